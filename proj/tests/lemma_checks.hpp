// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared instrumentation for the greedy/deterministic-policy analysis
// inequalities, used by the unit tests (small corpus) and the acceptance
// suite (full corpus). Each inequality is checked with its hypotheses;
// steps whose hypotheses fail are skipped and counted.

#ifndef SUBKNAP_TESTS_LEMMA_CHECKS_HPP
#define SUBKNAP_TESTS_LEMMA_CHECKS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "subknap/instance.hpp"
#include "subknap/oracle.hpp"
#include "subknap/policy.hpp"

namespace subknap::testing {

struct CorpusCounters {
  std::int64_t lemma1_checks = 0, lemma1_skips = 0, lemma1_violations = 0;
  std::int64_t clause2_checks = 0, clause2_skips = 0, clause2_violations = 0;
  std::int64_t lemma3_checks = 0, lemma3_skips = 0, lemma3_violations = 0;
  std::int64_t lemma4_checks = 0, lemma4_violations = 0;
  std::int64_t lemma5_checks = 0, lemma5_skips = 0, lemma5_violations = 0;
  std::int64_t claim1_checks = 0, claim1_skips = 0, claim1_violations = 0;
  std::int64_t claim2_checks = 0, claim2_skips = 0, claim2_violations = 0;
  std::int64_t alg2_floor_checks = 0, alg2_floor_violations = 0;
  std::int64_t alg3_floor_checks = 0, alg3_floor_violations = 0;
  std::int64_t alg4_floor_checks = 0, alg4_floor_violations = 0;

  std::int64_t total_violations() const {
    return lemma1_violations + clause2_violations + lemma3_violations +
           lemma4_violations + lemma5_violations + claim1_violations +
           claim2_violations + alg2_floor_violations + alg3_floor_violations +
           alg4_floor_violations;
  }
};

constexpr double kTol = 1e-9;

// Lemma-1-style run: one greedy execution at capacity C, checked against
// OPT_{C'} for every C'. The main inequality is checked at every prefix;
// the second clause (Z_j equals the packed prefix) applies for j < q and is
// skipped when q is undefined. Lemma 3 is checked at each step whose
// hypothesis holds: the step item must maximize marginal density w.r.t.
// X = Z_{j-1} u U over the unattempted items (automatic for j <= q, where
// Z_{j-1} u U coincides with the algorithm's packed set).
inline void check_greedy_run(const Instance& inst, const PolicyTrace& trace, Mask u,
                             const std::vector<OptResult<double>>& opts,
                             CorpusCounters* c) {
  const Mask p1 = trace.packed;
  const std::int64_t t_total = inst.total_size();
  for (std::int64_t cp = 1; cp <= t_total; ++cp) {
    const Mask opt = opts[cp].subset;
    const double fopt = opts[cp].value;

    int q = -1;
    for (std::size_t j = 0; j < trace.greedy_order.size(); ++j) {
      const int item = trace.greedy_order[j];
      if (contains(opt, item) && !contains(p1, item)) {
        q = static_cast<int>(j) + 1;
        break;
      }
    }

    Mask z = 0;
    std::int64_t size_z = 0;
    for (std::size_t j = 0; j < trace.greedy_order.size(); ++j) {
      const int item = trace.greedy_order[j];
      const Mask x_before = z | u;

      // Lemma 3 hypothesis: item is a density argmax w.r.t. x_before over
      // the items not attempted yet.
      bool argmax_holds = true;
      const double item_density =
          inst.f().marginal(x_before, item) / static_cast<double>(inst.size(item));
      for (std::size_t jj = j + 1; jj < trace.greedy_order.size(); ++jj) {
        const int other = trace.greedy_order[jj];
        const double d =
            inst.f().marginal(x_before, other) / static_cast<double>(inst.size(other));
        if (d > item_density + 1e-12) argmax_holds = false;
      }
      if (!argmax_holds) {
        ++c->lemma3_skips;
      } else {
        const double gain = inst.f().marginal(x_before, item);
        const double need = static_cast<double>(inst.size(item)) /
                            static_cast<double>(cp) *
                            (fopt - inst.f().eval(x_before));
        ++c->lemma3_checks;
        if (gain - need < -kTol) ++c->lemma3_violations;
      }

      if (contains(p1, item) || contains(opt, item)) {
        z = with(z, item);
        size_z += inst.size(item);
      }

      // Lemma 1 main inequality at this prefix.
      const double lhs = inst.f().eval(z | u);
      const double rhs =
          (1.0 - std::exp(-static_cast<double>(size_z) / static_cast<double>(cp))) * fopt;
      ++c->lemma1_checks;
      if (lhs - rhs < -kTol) ++c->lemma1_violations;

      // Second clause for j+1 < q.
      if (q < 0) {
        ++c->clause2_skips;
      } else if (static_cast<int>(j) + 1 < q) {
        Mask p1_prefix = 0;
        for (std::size_t jj = 0; jj <= j; ++jj) {
          if (contains(p1, trace.greedy_order[jj])) {
            p1_prefix = with(p1_prefix, trace.greedy_order[jj]);
          }
        }
        ++c->clause2_checks;
        if (z != p1_prefix) ++c->clause2_violations;
      }
    }
  }
}

// Lemma 4, Lemma 5 and the two case-(b) claims, instrumented over one run
// of the deterministic policy at capacity C (gamma = 1).
inline void check_deterministic_run(const Instance& inst, const PolicyTrace& trace,
                                    std::int64_t capacity,
                                    const std::vector<OptResult<double>>& opts,
                                    CorpusCounters* c) {
  auto opt_at_half = [&](std::int64_t twice_budget) {
    // f(OPT_{twice_budget/2}) with integer sizes: s(X) <= twice_budget/2
    // iff 2 s(X) <= twice_budget.
    return detail::opt_subset<double>(inst, twice_budget, 2).second;
  };
  const double f_u = inst.f().eval(trace.initial_set);
  const std::int64_t s_star = trace.initial_size;

  for (int i = 0; i < inst.n(); ++i) {
    if (inst.size(i) > capacity) continue;
    const double fi = inst.f().eval(with(0, i));
    const double bound = std::max(f_u, 2.0 * opt_at_half(inst.size(i)));
    ++c->lemma4_checks;
    if (fi - bound > kTol) ++c->lemma4_violations;
  }

  if (2 * s_star <= capacity) {
    // x ranges over [s*, C/2]; with integer sizes it suffices to check all
    // half-integers 2x in {2 s*, ..., C}.
    for (std::int64_t twice_x = 2 * s_star; twice_x <= capacity; ++twice_x) {
      const double lhs = opt_at_half(2 * twice_x);  // f(OPT_{2x})
      const double rhs = 3.0 * opt_at_half(twice_x);
      ++c->lemma5_checks;
      if (lhs - rhs > kTol) ++c->lemma5_violations;
    }
  } else {
    ++c->lemma5_skips;
  }

  // Case (b): s* >= C/3.
  if (s_star > 0 && 3 * s_star >= capacity) {
    const double f_opt_c = opts[capacity].value;
    const double f_opt_star = opt_at_half(2 * s_star);
    ++c->claim1_checks;
    if (f_opt_c - 7.0 * f_opt_star > kTol) ++c->claim1_violations;
    const double f_star_item = inst.f().eval(with(0, trace.star_item));
    ++c->claim2_checks;
    if (f_opt_star - 1.5 * f_star_item > kTol) ++c->claim2_violations;
  } else {
    ++c->claim1_skips;
    ++c->claim2_skips;
  }
}

// Full per-instance sweep: all integer capacities, every instrumented
// inequality plus the three theorem floors.
inline void check_instance(const Instance& inst, CorpusCounters* c) {
  const auto opts = opt_profile<double>(inst);
  const double alg2_floor = (1.0 - std::exp(-1.0)) / 2.0;
  const double alg3_floor = (1.0 - std::exp(-1.0 / 3.0)) / 3.0;
  const double alg4_floor = (1.0 - std::exp(-1.0 / 4.0)) / 2.0;

  for (std::int64_t cap = 0; cap <= inst.total_size(); ++cap) {
    const double fopt = opts[cap].value;

    CapacityOracle o1(inst, cap);
    const PolicyTrace greedy = greedy_policy(inst, 0, o1);
    check_greedy_run(inst, greedy, 0, opts, c);

    const double alg2 = randomized_adaptive_expectation(inst, cap);
    ++c->alg2_floor_checks;
    if (alg2 - alg2_floor * fopt < -kTol) ++c->alg2_floor_violations;

    CapacityOracle o3(inst, cap);
    const PolicyTrace det = deterministic_policy(inst, o3);
    check_deterministic_run(inst, det, cap, opts, c);
    ++c->alg3_floor_checks;
    if (det.value - alg3_floor * fopt < -kTol) ++c->alg3_floor_violations;

    const double alg4 = randomized_universal_expectation(inst, cap);
    ++c->alg4_floor_checks;
    if (alg4 - alg4_floor * fopt < -kTol) ++c->alg4_floor_violations;
  }
}

inline Instance corpus_instance(std::uint64_t seed, int max_n = 8) {
  GeneratorSpec spec;
  spec.n = 2 + static_cast<int>(seed % static_cast<std::uint64_t>(max_n - 1));
  spec.min_size = 1;
  spec.max_size = 5;
  spec.family = static_cast<FunctionKind>(seed % 4);
  return generate_random(spec, mix_seed(seed, 0xc0));
}

}  // namespace subknap::testing

#endif  // SUBKNAP_TESTS_LEMMA_CHECKS_HPP
