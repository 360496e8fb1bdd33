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

#ifndef SUBKNAP_ORACLE_HPP
#define SUBKNAP_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subknap/errors.hpp"
#include "subknap/instance.hpp"
#include "subknap/policy.hpp"
#include "subknap/rational.hpp"

namespace subknap {

template <typename Num>
struct OptResult {
  Mask subset = 0;
  Num value = Num(0);
  Mask feasible_items = 0;  // I_C = {i : s(i) <= C}
  int best_single = -1;     // i^C, -1 when I_C is empty
};

// Exact OPT_C by 2^n enumeration (n <= 22); ties to the lexicographically
// smallest bitmask. Also exposes I_C and i^C.
template <typename Num = double>
OptResult<Num> opt_for_capacity(const Instance& inst, std::int64_t capacity) {
  if (inst.n() > 22) {
    throw CapabilityError("opt_for_capacity enumeration capped at n <= 22");
  }
  OptResult<Num> out;
  auto [mask, value] = detail::opt_subset<Num>(inst, capacity);
  out.subset = mask;
  out.value = value;
  Num best_single = Num(0);
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.size(i) > capacity) continue;
    out.feasible_items = with(out.feasible_items, i);
    Num v;
    if constexpr (std::is_same_v<Num, Rational>) {
      v = inst.f().eval_exact(with(0, i));
    } else {
      v = inst.f().eval(with(0, i));
    }
    if (out.best_single < 0 || v > best_single) {
      best_single = v;
      out.best_single = i;
    }
  }
  return out;
}

// Per-capacity OPT over the full sweep 0..T in one 2^n pass.
template <typename Num = double>
std::vector<OptResult<Num>> opt_profile(const Instance& inst) {
  const std::int64_t t = inst.total_size();
  std::vector<OptResult<Num>> out;
  out.reserve(t + 1);
  for (std::int64_t c = 0; c <= t; ++c) out.push_back(opt_for_capacity<Num>(inst, c));
  return out;
}

enum class PolicyId { kAlg1, kAlg2, kAlg3, kAlg4 };

inline std::string policy_name(PolicyId id) {
  switch (id) {
    case PolicyId::kAlg1: return "alg1";
    case PolicyId::kAlg2: return "alg2";
    case PolicyId::kAlg3: return "alg3";
    case PolicyId::kAlg4: return "alg4";
  }
  return "?";
}

inline PolicyId parse_policy(const std::string& s) {
  if (s == "alg1") return PolicyId::kAlg1;
  if (s == "alg2") return PolicyId::kAlg2;
  if (s == "alg3") return PolicyId::kAlg3;
  if (s == "alg4") return PolicyId::kAlg4;
  throw ParseError("unknown policy '" + s + "'");
}

// The robustness-ratio guarantee the policy's theorem promises, if any.
inline std::optional<double> theorem_floor(PolicyId id) {
  switch (id) {
    case PolicyId::kAlg1: return std::nullopt;
    case PolicyId::kAlg2: return (1.0 - std::exp(-1.0)) / 2.0;
    case PolicyId::kAlg3: return (1.0 - std::exp(-1.0 / 3.0)) / 3.0;
    case PolicyId::kAlg4: return (1.0 - std::exp(-1.0 / 4.0)) / 2.0;
  }
  return std::nullopt;
}

struct RatioRow {
  std::int64_t capacity = 0;
  double value = 0.0;  // policy value, or exact expectation for alg2/alg4
  double opt = 0.0;
  double ratio = 1.0;  // defined as 1 when opt == 0
};

struct RatioReport {
  std::string policy;
  std::string instance_id;
  std::string arithmetic = "double";
  std::string gamma_mode;
  std::vector<RatioRow> rows;
  double worst_ratio = 1.0;
  std::optional<double> floor;

  std::string to_csv() const {
    std::ostringstream out;
    out.precision(12);
    out << "capacity,value,opt,ratio\n";
    for (const auto& r : rows) {
      out << r.capacity << "," << r.value << "," << r.opt << "," << r.ratio << "\n";
    }
    out << "worst,,," << worst_ratio << "\n";
    return out.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows) {
      rows_j.push_back({{"capacity", r.capacity},
                        {"value", r.value},
                        {"opt", r.opt},
                        {"ratio", r.ratio}});
    }
    nlohmann::json j{{"policy", policy},
                     {"instance", instance_id},
                     {"arithmetic", arithmetic},
                     {"rows", std::move(rows_j)},
                     {"worst_ratio", worst_ratio}};
    if (floor) j["theorem_floor"] = *floor;
    if (!gamma_mode.empty()) j["gamma_mode"] = gamma_mode;
    return j;
  }
};

inline double policy_value_at(const Instance& inst, PolicyId id, std::int64_t capacity,
                              const PolicyConfig& config) {
  switch (id) {
    case PolicyId::kAlg1: {
      CapacityOracle oracle(inst, capacity);
      return greedy_policy(inst, 0, oracle).value;
    }
    case PolicyId::kAlg2:
      return randomized_adaptive_expectation(inst, capacity);
    case PolicyId::kAlg3: {
      CapacityOracle oracle(inst, capacity);
      return deterministic_policy(inst, oracle, config).value;
    }
    case PolicyId::kAlg4:
      return randomized_universal_expectation(inst, capacity);
  }
  return 0.0;
}

// Exact deterministic values for Algorithms 1/3, exact coin-enumerated
// expectations for Algorithms 2/4, against brute-force OPT_C.
inline RatioReport robustness_profile(PolicyId id, const Instance& inst,
                                      const std::vector<std::int64_t>& capacities,
                                      const PolicyConfig& config = {}) {
  RatioReport report;
  report.policy = policy_name(id);
  report.floor = theorem_floor(id);
  if (id == PolicyId::kAlg3) {
    report.gamma_mode = config.gamma_mode == PolicyConfig::kExactBruteForce
                            ? "exact_bruteforce(gamma=1)"
                            : "lazy_greedy_heuristic(no ratio guarantee)";
  }
  for (std::int64_t c : capacities) {
    if (c < 0 || c > inst.total_size()) {
      throw PreconditionError("capacity sweep outside {0,...,T}");
    }
    RatioRow row;
    row.capacity = c;
    row.value = policy_value_at(inst, id, c, config);
    row.opt = opt_for_capacity<double>(inst, c).value;
    row.ratio = row.opt == 0.0 ? 1.0 : row.value / row.opt;
    report.rows.push_back(row);
  }
  report.worst_ratio = 1.0;
  for (const auto& r : report.rows) report.worst_ratio = std::min(report.worst_ratio, r.ratio);
  return report;
}

inline std::vector<std::int64_t> full_capacity_sweep(const Instance& inst) {
  std::vector<std::int64_t> cs;
  for (std::int64_t c = 0; c <= inst.total_size(); ++c) cs.push_back(c);
  return cs;
}

// Exact E_C[f(Pi(C))] under no-cancellation semantics: the packed set at
// capacity t is the longest prefix whose total size fits, so per-prefix
// values are cached and each support point costs a lookup.
template <typename Num = double>
Num smpsc_expected_value(const UniversalSequence& seq, const Instance& inst,
                         const CapacityDistribution& dist) {
  check_permutation(seq, inst.n());
  const int n = inst.n();
  std::vector<std::int64_t> prefix_size(n + 1, 0);
  std::vector<Num> prefix_value(n + 1, Num(0));
  Mask packed = 0;
  for (int k = 0; k < n; ++k) {
    packed = with(packed, seq.order[k]);
    prefix_size[k + 1] = prefix_size[k] + inst.size(seq.order[k]);
    if constexpr (std::is_same_v<Num, Rational>) {
      prefix_value[k + 1] = inst.f().eval_exact(packed);
    } else {
      prefix_value[k + 1] = inst.f().eval(packed);
    }
  }
  Num total = Num(0);
  for (const auto& [t, p] : dist.support()) {
    if (p == 0) continue;
    const auto it = std::upper_bound(prefix_size.begin(), prefix_size.end(), t);
    const int k = static_cast<int>(it - prefix_size.begin()) - 1;
    if constexpr (std::is_same_v<Num, Rational>) {
      total += p * prefix_value[k];
    } else {
      total += to_double(p) * prefix_value[k];
    }
  }
  return total;
}

// Exact maximizer of the expected sequence value by dynamic programming over
// prefix sets: E(pi) = sum_k tail(S_k) * (f(P_k) - f(P_{k-1})). n <= 8 per
// the spec contract (the DP itself handles larger n, but stays within it).
template <typename Num = double>
std::pair<UniversalSequence, Num> smpsc_optimal_sequence(const Instance& inst,
                                                         const CapacityDistribution& dist) {
  const int n = inst.n();
  if (n > 8) throw CapabilityError("smpsc_optimal_sequence enumeration capped at n <= 8");
  const Mask top = full_mask(n);
  auto value_of = [&](Mask m) {
    if constexpr (std::is_same_v<Num, Rational>) {
      return inst.f().eval_exact(m);
    } else {
      return inst.f().eval(m);
    }
  };
  auto tail_at = [&](std::int64_t s) {
    if (s > inst.total_size()) return Num(0);
    if constexpr (std::is_same_v<Num, Rational>) {
      return dist.tail(s);
    } else {
      return dist.tail_d(s);
    }
  };
  std::vector<Num> best(std::size_t{1} << n, Num(0));
  std::vector<int> choice(std::size_t{1} << n, -1);
  // Iterate masks in decreasing popcount via plain reverse order: mask's
  // successors mask|i are numerically larger, so a descending loop suffices.
  for (Mask m = top;; --m) {
    Num best_here = Num(0);
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (contains(m, i)) continue;
      const Mask next = with(m, i);
      const Num gain = tail_at(inst.size_of(next)) * (value_of(next) - value_of(m));
      const Num cand = gain + best[next];
      if (pick < 0 || cand > best_here) {
        best_here = cand;
        pick = i;
      }
    }
    if (pick >= 0) {
      best[m] = best_here;
      choice[m] = pick;
    }
    if (m == 0) break;
  }
  UniversalSequence seq;
  Mask m = 0;
  while (choice[m] >= 0) {
    seq.order.push_back(choice[m]);
    m = with(m, choice[m]);
  }
  return {std::move(seq), best[0]};
}

// One copy of item i per admissible start time j, carrying the interval
// [j, j+s(i)-1]; f' charges, per capacity t, the items with a copy finishing
// by t.
struct IntervalInstance {
  struct Copy {
    int item = 0;
    std::int64_t start = 0;    // j
    std::int64_t finish = 0;   // j + s(i) - 1, inclusive
  };
  std::vector<Copy> copies;
  const Instance* instance = nullptr;
  const CapacityDistribution* distribution = nullptr;

  // f'(U') for a subset of copies given as indices into `copies`.
  template <typename Num = double>
  Num eval_fprime(const std::vector<int>& chosen) const {
    const std::int64_t infinity = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> completes(instance->n(), infinity);
    for (int c : chosen) {
      const Copy& k = copies[c];
      completes[k.item] = std::min(completes[k.item], k.start + instance->size(k.item));
    }
    Num total = Num(0);
    for (const auto& [t, p] : distribution->support()) {
      if (p == 0) continue;
      Mask covered = 0;
      for (int i = 0; i < instance->n(); ++i) {
        if (completes[i] <= t) covered = with(covered, i);
      }
      if constexpr (std::is_same_v<Num, Rational>) {
        total += p * instance->f().eval_exact(covered);
      } else {
        total += to_double(p) * instance->f().eval(covered);
      }
    }
    return total;
  }
};

inline IntervalInstance interval_reduction(const Instance& inst,
                                           const CapacityDistribution& dist,
                                           std::size_t copy_bound = 4096) {
  IntervalInstance iv;
  iv.instance = &inst;
  iv.distribution = &dist;
  const std::int64_t t_total = inst.total_size();
  for (int i = 0; i < inst.n(); ++i) {
    for (std::int64_t j = 0; j + inst.size(i) <= t_total; ++j) {
      iv.copies.push_back({i, j, j + inst.size(i) - 1});
    }
  }
  if (iv.copies.size() > copy_bound) {
    throw CapabilityError("interval reduction would create " +
                          std::to_string(iv.copies.size()) + " copies (bound " +
                          std::to_string(copy_bound) + ")");
  }
  return iv;
}

struct IntervalSolution {
  std::vector<int> chosen;  // copy indices
  double value = 0.0;
  UniversalSequence sequence;
};

namespace detail {

inline void interval_dfs(const IntervalInstance& iv, std::size_t next,
                         std::int64_t free_from, std::vector<int>& chosen,
                         std::vector<int>& best, double& best_value) {
  const double v = iv.eval_fprime<double>(chosen);
  if (v > best_value) {
    best_value = v;
    best = chosen;
  }
  for (std::size_t c = next; c < iv.copies.size(); ++c) {
    if (iv.copies[c].start < free_from) continue;  // overlap pruning
    chosen.push_back(static_cast<int>(c));
    interval_dfs(iv, c + 1, iv.copies[c].finish + 1, chosen, best, best_value);
    chosen.pop_back();
  }
}

}  // namespace detail

// Exact maximum of f' over interval-disjoint copy subsets, by DFS over
// copies sorted by start with overlap pruning. The recovered sequence picks
// each chosen item at its earliest chosen copy; its expected value is at
// least the f' value (asserted by tests).
inline IntervalSolution solve_interval_bruteforce(const IntervalInstance& iv,
                                                  std::size_t copy_bound = 26) {
  if (iv.copies.size() > copy_bound) {
    throw CapabilityError("interval brute force capped at " + std::to_string(copy_bound) +
                          " copies");
  }
  IntervalInstance sorted = iv;
  std::sort(sorted.copies.begin(), sorted.copies.end(), [](const auto& a, const auto& b) {
    return a.start < b.start || (a.start == b.start && a.item < b.item);
  });
  std::vector<int> chosen, best;
  double best_value = 0.0;
  detail::interval_dfs(sorted, 0, 0, chosen, best, best_value);

  IntervalSolution out;
  out.value = best_value;
  const std::int64_t infinity = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> pick_time(iv.instance->n(), infinity);
  for (int c : best) {
    const auto& k = sorted.copies[c];
    pick_time[k.item] = std::min(pick_time[k.item], k.start);
  }
  // Map the solution back to the caller's copy order.
  for (int c : best) {
    const auto& k = sorted.copies[c];
    for (std::size_t orig = 0; orig < iv.copies.size(); ++orig) {
      if (iv.copies[orig].item == k.item && iv.copies[orig].start == k.start) {
        out.chosen.push_back(static_cast<int>(orig));
        break;
      }
    }
  }
  std::sort(out.chosen.begin(), out.chosen.end());
  std::vector<int> order(iv.instance->n());
  for (int i = 0; i < iv.instance->n(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (pick_time[a] != pick_time[b]) return pick_time[a] < pick_time[b];
    return a < b;
  });
  out.sequence.order = std::move(order);
  return out;
}

}  // namespace subknap

#endif  // SUBKNAP_ORACLE_HPP
