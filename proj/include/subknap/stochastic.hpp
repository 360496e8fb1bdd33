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

#ifndef SUBKNAP_STOCHASTIC_HPP
#define SUBKNAP_STOCHASTIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subknap/errors.hpp"
#include "subknap/instance.hpp"
#include "subknap/lp.hpp"
#include "subknap/oracle.hpp"
#include "subknap/policy.hpp"
#include "subknap/rational.hpp"
#include "subknap/rng.hpp"

namespace subknap {

// ---------------------------------------------------------------------------
// Time-indexed relaxation. Variables x_{ti} for t in {0,...,T-1}, i in I,
// meaning "item i starts at time t". x-bar_{ti} = sum_{t' <= t-s(i)} x_{t'i}
// is the probability mass finishing by time t. The capacity-prefix
// constraint uses starts strictly before t (see the decisions ledger).
// ---------------------------------------------------------------------------

struct TimeGrid {
  int n = 0;
  std::int64_t T = 0;
  int var(std::int64_t t, int i) const { return static_cast<int>(t) * n + i; }
  int total() const { return static_cast<int>(T) * n; }
};

inline TimeGrid time_grid(const Instance& inst) {
  return TimeGrid{inst.n(), inst.total_size()};
}

inline LinearPolytope build_full_relaxation(const Instance& inst,
                                            std::int64_t desk_bound = 512) {
  const TimeGrid grid = time_grid(inst);
  if (grid.T > desk_bound) {
    throw CapabilityError("full time-indexed relaxation is pseudo-polynomial; T = " +
                          std::to_string(grid.T) + " exceeds the desk bound");
  }
  LinearPolytope poly;
  poly.num_vars = grid.total();
  for (int i = 0; i < grid.n; ++i) {
    std::vector<double> row(poly.num_vars, 0.0);
    for (std::int64_t t = 0; t < grid.T; ++t) row[grid.var(t, i)] = 1.0;
    poly.add_row(std::move(row), 1.0);
  }
  for (std::int64_t t = 1; t <= grid.T; ++t) {
    std::vector<double> row(poly.num_vars, 0.0);
    for (int i = 0; i < grid.n; ++i) {
      const double coeff = static_cast<double>(std::min<std::int64_t>(inst.size(i), t));
      for (std::int64_t tp = 0; tp < t && tp < grid.T; ++tp) {
        row[grid.var(tp, i)] = coeff;
      }
    }
    poly.add_row(std::move(row), 2.0 * static_cast<double>(t));
  }
  return poly;
}

// Exact-arithmetic feasibility of Eq. 2 for a rational point x[t][i].
inline bool eq2_feasible_exact(const Instance& inst,
                               const std::vector<std::vector<Rational>>& x,
                               std::string* why = nullptr) {
  const std::int64_t T = inst.total_size();
  const int n = inst.n();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<std::int64_t>(x.size()) != T) return fail("wrong time dimension");
  for (std::int64_t t = 0; t < T; ++t) {
    if (static_cast<int>(x[t].size()) != n) return fail("wrong item dimension");
    for (int i = 0; i < n; ++i) {
      if (x[t][i] < 0) return fail("negative entry");
    }
  }
  for (int i = 0; i < n; ++i) {
    Rational sum = 0;
    for (std::int64_t t = 0; t < T; ++t) sum += x[t][i];
    if (sum > 1) return fail("item mass exceeds 1 for item " + std::to_string(i));
  }
  for (std::int64_t t = 1; t <= T; ++t) {
    Rational lhs = 0;
    for (int i = 0; i < n; ++i) {
      const Rational coeff(std::min<std::int64_t>(inst.size(i), t));
      for (std::int64_t tp = 0; tp < t && tp < T; ++tp) lhs += coeff * x[tp][i];
    }
    if (lhs > Rational(2 * t)) {
      return fail("capacity-prefix constraint violated at t=" + std::to_string(t));
    }
  }
  return true;
}

// The paper's integrality-gap fractional point for make_integrality_gap(T):
// x_{0,0}=1, x_{0,1}=(T-1)/T, x_{T-1,2}=1. Its objective value is 3 - 1/T.
inline std::vector<std::vector<Rational>> integrality_gap_fractional_point(std::int64_t T) {
  std::vector<std::vector<Rational>> x(2 * T + 1, std::vector<Rational>(3, Rational(0)));
  x[0][0] = 1;
  x[0][1] = Rational(T - 1, T);
  x[T - 1][2] = 1;
  return x;
}

inline std::vector<double> xbar_at(const Instance& inst, std::span<const double> x,
                                   std::int64_t t) {
  const TimeGrid grid = time_grid(inst);
  std::vector<double> out(grid.n, 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const std::int64_t hi = t - inst.size(i);
    double sum = 0.0;
    for (std::int64_t tp = 0; tp <= hi && tp < grid.T; ++tp) sum += x[grid.var(tp, i)];
    out[i] = std::min(1.0, std::max(0.0, sum));
  }
  return out;
}

// F-bar(x) = sum_t p(t) F(xbar_t), by exact multilinear evaluation (n <= 16).
inline double fbar_value(const Instance& inst, const CapacityDistribution& dist,
                         std::span<const double> x) {
  double total = 0.0;
  for (const auto& [t, p] : dist.support()) {
    if (p == 0) continue;
    const auto xb = xbar_at(inst, x, t);
    total += to_double(p) * inst.f().multilinear_exact(xb);
  }
  return total;
}

// Exact F-bar for modular objectives and rational points.
inline Rational fbar_modular_exact(const Instance& inst, const CapacityDistribution& dist,
                                   const std::vector<std::vector<Rational>>& x) {
  if (inst.f().kind() != FunctionKind::kModular) {
    throw PreconditionError("exact F-bar path requires a modular objective");
  }
  const std::int64_t T = inst.total_size();
  Rational total = 0;
  for (const auto& [t, p] : dist.support()) {
    if (p == 0) continue;
    Rational ft = 0;
    for (int i = 0; i < inst.n(); ++i) {
      const Rational wi = inst.f().eval_exact(with(0, i));
      const std::int64_t hi = t - inst.size(i);
      for (std::int64_t tp = 0; tp <= hi && tp < T; ++tp) ft += wi * x[tp][i];
    }
    total += p * ft;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Breakpoint structure for the compact relaxation.
// ---------------------------------------------------------------------------

struct BreakpointStructure {
  double eps = 0.1;
  double big_w = 0.0;    // W = f(I)
  double small_w = 0.0;  // w = min_i f({i})
  std::int64_t eta = 0;  // paper's floor(log_{1-eps}(eps w / (W log T))), reported
  double tail_cutoff = 0.0;  // eps w / (W log2 T), with log2 T -> 1 when T = 1

  std::vector<std::int64_t> tau;  // tau_0 = 0, tau_1 = 1, ..., tau_{q+1} = T
  int q = 0;
  int q_eta = 0;
  std::vector<std::int64_t> xi;  // xi_0 = 0 < ... < xi_{r+1} = T
  int r = 0;
  std::vector<Rational> pbar_tau;  // pbar(tau_j) for j = 0..q+1

  int blocks() const { return r + 1; }

  nlohmann::json to_json() const {
    return nlohmann::json{{"eps", eps},     {"W", big_w},      {"w", small_w},
                          {"eta", eta},     {"tail_cutoff", tail_cutoff},
                          {"tau", tau},     {"q", q},          {"q_eta", q_eta},
                          {"xi", xi},       {"r", r}};
  }

  // Every structural invariant; returns human-readable violations (empty =
  // all hold). Comparisons against pbar are exact.
  std::vector<std::string> check_invariants(const Instance& inst,
                                            const CapacityDistribution& dist) const {
    std::vector<std::string> bad;
    const std::int64_t T = dist.T();
    if (tau.size() < 2 || tau.front() != 0 || tau.back() != T) {
      bad.push_back("tau endpoints are not 0 and T");
      return bad;
    }
    if (static_cast<int>(tau.size()) != q + 2) bad.push_back("q disagrees with |tau|");
    if (q >= 1 && tau[1] != 1) bad.push_back("tau_1 != 1");
    for (int j = 1; j + 1 < static_cast<int>(tau.size()); ++j) {
      if (!(tau[j] < tau[j + 1])) bad.push_back("tau not strictly increasing at j=" + std::to_string(j));
      if (j >= 1 && tau[j + 1] > 2 * tau[j]) {
        bad.push_back("tau_{j+1} > 2 tau_j at j=" + std::to_string(j));
      }
    }
    const Rational one_minus_eps = Rational(1) - Rational(eps);
    for (int j = 0; j <= q_eta && j + 1 < static_cast<int>(tau.size()); ++j) {
      const Rational a = dist.pbar(tau[j]);
      const Rational b = dist.pbar(tau[j + 1] - 1);
      if (!(a >= b && b >= one_minus_eps * a)) {
        bad.push_back("tail-density condition fails at j=" + std::to_string(j));
      }
    }
    const Rational cutoff(tail_cutoff);
    for (int j = q_eta + 1; j <= q; ++j) {
      if (!(dist.pbar(tau[j]) < cutoff)) {
        bad.push_back("negligible-tail condition fails at j=" + std::to_string(j));
      }
    }
    // xi must be exactly {tau} with {tau_j - s(i) + 1} merged in, within [0,T].
    std::set<std::int64_t> expect(tau.begin(), tau.end());
    for (std::size_t j = 1; j < tau.size(); ++j) {
      for (const Item& it : inst.items()) {
        const std::int64_t cut = tau[j] - it.size + 1;
        if (cut >= 0 && cut <= T) expect.insert(cut);
      }
    }
    if (std::vector<std::int64_t>(expect.begin(), expect.end()) != xi) {
      bad.push_back("xi differs from the merged breakpoint set");
    }
    if (xi.empty() || xi.front() != 0 || xi.back() != T) bad.push_back("xi endpoints are not 0 and T");
    for (std::size_t k = 0; k + 1 < xi.size(); ++k) {
      if (!(xi[k] < xi[k + 1])) bad.push_back("xi not strictly increasing");
    }
    if (static_cast<int>(xi.size()) != r + 2) bad.push_back("r disagrees with |xi|");
    return bad;
  }
};

// Builds the tau/xi breakpoints by exact binary search on the tail oracle.
// Strict mode requires pbar(s_min) = 1; the permissive path is handled by
// the caller conditioning the distribution first.
inline BreakpointStructure build_breakpoints(const Instance& inst,
                                             const CapacityDistribution& dist,
                                             double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("eps must lie in (0,1)");
  if (inst.n() < 1) throw PreconditionError("breakpoints need a nonempty instance");
  const std::int64_t T = inst.total_size();

  BreakpointStructure bp;
  bp.eps = eps;
  bp.big_w = inst.f().eval(full_mask(inst.n()));
  bp.small_w = inst.f().eval(with(0, 0));
  for (int i = 1; i < inst.n(); ++i) {
    bp.small_w = std::min(bp.small_w, inst.f().eval(with(0, i)));
  }
  if (!(bp.small_w > 0.0)) {
    throw PreconditionError(
        "zero-value items must be removed before the compact relaxation (w = 0)");
  }
  const double log2T = T > 1 ? std::log2(static_cast<double>(T)) : 1.0;
  bp.tail_cutoff = eps * bp.small_w / (bp.big_w * log2T);
  bp.eta = static_cast<std::int64_t>(
      std::floor(std::log(bp.tail_cutoff) / std::log(1.0 - eps)));

  if (dist.pbar(inst.min_size()) != 1) {
    throw PreconditionError(
        "pbar(s_min) != 1; condition the distribution on C > s_min first "
        "(permissive mode) or fix the instance");
  }

  std::set<std::int64_t> tau_set;
  if (T == 1) {
    // Degenerate single-slot horizon: tau = (0, 1), no interior points.
  } else {
    for (std::int64_t p = 1; p < T; p *= 2) tau_set.insert(p);
    // tau' thresholds: smallest t in [0, T-1] with pbar(t) < (1-eps)^{j-1},
    // extended until the tail drops below the cutoff (see ledger).
    const Rational one_minus_eps = Rational(1) - Rational(eps);
    const Rational cutoff(bp.tail_cutoff);
    Rational threshold(1);
    for (int guard = 0; guard < 100000; ++guard) {
      std::int64_t lo = 0, hi = T;  // hi = T encodes "no such t"
      // pbar is nonincreasing; find the first t with pbar(t) < threshold.
      if (dist.pbar(T - 1) >= threshold) {
        lo = hi = T;
      } else {
        hi = T - 1;
        while (lo < hi) {
          const std::int64_t mid = lo + (hi - lo) / 2;
          if (dist.pbar(mid) < threshold) {
            hi = mid;
          } else {
            lo = mid + 1;
          }
        }
      }
      const std::int64_t tau_prime = lo;
      if (tau_prime >= T) break;
      if (tau_prime > 0) tau_set.insert(tau_prime);
      if (dist.pbar(tau_prime) < cutoff) break;
      threshold *= one_minus_eps;
    }
  }
  bp.tau.assign(tau_set.begin(), tau_set.end());
  bp.tau.insert(bp.tau.begin(), 0);
  bp.tau.push_back(T);
  bp.q = static_cast<int>(bp.tau.size()) - 2;

  // q_eta: the last index before the tails become negligible.
  const Rational cutoff(bp.tail_cutoff);
  bp.q_eta = bp.q;
  for (int j = 1; j <= bp.q; ++j) {
    if (dist.pbar(bp.tau[j]) < cutoff) {
      bp.q_eta = j - 1;
      break;
    }
  }

  std::set<std::int64_t> xi_set(bp.tau.begin(), bp.tau.end());
  for (std::size_t j = 1; j < bp.tau.size(); ++j) {
    for (int i = 0; i < inst.n(); ++i) {
      const std::int64_t cut = bp.tau[j] - inst.size(i) + 1;
      if (cut >= 0 && cut <= T) xi_set.insert(cut);
    }
  }
  bp.xi.assign(xi_set.begin(), xi_set.end());
  bp.r = static_cast<int>(bp.xi.size()) - 2;

  bp.pbar_tau.clear();
  for (std::int64_t tj : bp.tau) bp.pbar_tau.push_back(dist.pbar(tj));
  return bp;
}

// ---------------------------------------------------------------------------
// Compact relaxation over y_{ki}, k indexing blocks [xi_k, xi_{k+1}).
// ---------------------------------------------------------------------------

struct CompactGrid {
  int n = 0;
  int blocks = 0;
  int var(int k, int i) const { return k * n + i; }
  int total() const { return blocks * n; }
};

inline CompactGrid compact_grid(const Instance& inst, const BreakpointStructure& bp) {
  return CompactGrid{inst.n(), bp.blocks()};
}

inline LinearPolytope build_compact_relaxation(const Instance& inst,
                                               const BreakpointStructure& bp) {
  const CompactGrid grid = compact_grid(inst, bp);
  LinearPolytope poly;
  poly.num_vars = grid.total();
  for (int i = 0; i < grid.n; ++i) {
    std::vector<double> row(poly.num_vars, 0.0);
    for (int k = 0; k < grid.blocks; ++k) row[grid.var(k, i)] = 1.0;
    poly.add_row(std::move(row), 1.0);
  }
  for (int j = 1; j <= bp.q; ++j) {
    const std::int64_t tj = bp.tau[j];
    std::vector<double> row(poly.num_vars, 0.0);
    for (int i = 0; i < grid.n; ++i) {
      const double coeff = static_cast<double>(std::min<std::int64_t>(inst.size(i), tj));
      for (int k = 0; k < grid.blocks; ++k) {
        if (bp.xi[k] < tj) row[grid.var(k, i)] = coeff;
      }
    }
    poly.add_row(std::move(row), 2.0 * static_cast<double>(tj));
  }
  return poly;
}

// z_{ji} = sum over blocks fully finishing by tau_j - s(i):
// xi_{k+1} - 1 <= tau_j - s(i).
inline std::vector<double> z_at(const Instance& inst, const BreakpointStructure& bp,
                                std::span<const double> y, int j) {
  const CompactGrid grid = compact_grid(inst, bp);
  std::vector<double> z(grid.n, 0.0);
  const std::int64_t tj = bp.tau[j];
  for (int i = 0; i < grid.n; ++i) {
    double sum = 0.0;
    for (int k = 0; k < grid.blocks; ++k) {
      if (bp.xi[k + 1] - 1 <= tj - inst.size(i)) sum += y[grid.var(k, i)];
    }
    z[i] = std::min(1.0, std::max(0.0, sum));
  }
  return z;
}

// ---------------------------------------------------------------------------
// Smooth monotone submodular objectives over the relaxation variables.
// ---------------------------------------------------------------------------

struct GradientMode {
  bool exact = true;
  std::int64_t samples = 2000;
  std::uint64_t seed = 0;
};

// Picks exact gradients when the instance is tabulable and the variable
// count is moderate, Monte-Carlo otherwise.
inline GradientMode pick_gradient_mode(const Instance& inst, int num_vars,
                                       std::uint64_t seed) {
  GradientMode mode;
  mode.exact = inst.n() <= 12 && num_vars <= 2000;
  mode.seed = seed;
  return mode;
}

class ContinuousObjective {
 public:
  virtual ~ContinuousObjective() = default;
  virtual int num_vars() const = 0;
  virtual double value(std::span<const double> v) const = 0;
  virtual std::vector<double> gradient(std::span<const double> v, int step) const = 0;
};

// Objective of Eq. 3: sum_{j=0}^{q} pbar(tau_j) (F(z_{j+1}) - F(z_j)), i.e.
// after Abel summation a nonnegative combination of F at the z_j.
class CompactObjective : public ContinuousObjective {
 public:
  CompactObjective(const Instance& inst, const BreakpointStructure& bp, GradientMode mode)
      : inst_(inst), bp_(bp), mode_(mode), grid_(compact_grid(inst, bp)) {
    coeff_.resize(bp_.q + 2, 0.0);
    for (int j = 1; j <= bp_.q; ++j) {
      coeff_[j] = to_double(bp_.pbar_tau[j - 1] - bp_.pbar_tau[j]);
    }
    coeff_[bp_.q + 1] = to_double(bp_.pbar_tau[bp_.q]);
  }

  int num_vars() const override { return grid_.total(); }

  double value(std::span<const double> y) const override {
    double total = 0.0;
    for (int j = 1; j <= bp_.q + 1; ++j) {
      if (coeff_[j] == 0.0) continue;
      const auto z = z_at(inst_, bp_, y, j);
      total += coeff_[j] * f_value(z, j);
    }
    return total;
  }

  std::vector<double> gradient(std::span<const double> y, int step) const override {
    std::vector<double> grad(grid_.total(), 0.0);
    for (int j = 1; j <= bp_.q + 1; ++j) {
      if (coeff_[j] == 0.0) continue;
      const auto z = z_at(inst_, bp_, y, j);
      const auto gf = f_gradient(z, j, step);
      const std::int64_t tj = bp_.tau[j];
      for (int i = 0; i < grid_.n; ++i) {
        if (gf[i] == 0.0) continue;
        for (int k = 0; k < grid_.blocks; ++k) {
          if (bp_.xi[k + 1] - 1 <= tj - inst_.size(i)) {
            grad[grid_.var(k, i)] += coeff_[j] * gf[i];
          }
        }
      }
    }
    return grad;
  }

 private:
  double f_value(std::span<const double> z, int j) const {
    if (mode_.exact) return inst_.f().multilinear_exact(z);
    return inst_.f()
        .multilinear_mc(z, mode_.samples, mix_seed(mode_.seed, 0x1000 + j))
        .mean;
  }
  std::vector<double> f_gradient(std::span<const double> z, int j, int step) const {
    if (mode_.exact) return inst_.f().multilinear_gradient(z);
    return inst_.f().multilinear_gradient_mc(
        z, mode_.samples, mix_seed(mode_.seed, 0x9000 + 64 * step + j));
  }

  const Instance& inst_;
  const BreakpointStructure& bp_;
  GradientMode mode_;
  CompactGrid grid_;
  std::vector<double> coeff_;
};

// Objective of Eq. 2: F-bar(x) = sum_t p(t) F(xbar_t).
class FullObjective : public ContinuousObjective {
 public:
  FullObjective(const Instance& inst, const CapacityDistribution& dist, GradientMode mode)
      : inst_(inst), dist_(dist), mode_(mode), grid_(time_grid(inst)) {}

  int num_vars() const override { return grid_.total(); }

  double value(std::span<const double> x) const override {
    double total = 0.0;
    int j = 0;
    for (const auto& [t, p] : dist_.support()) {
      ++j;
      if (p == 0) continue;
      const auto xb = xbar_at(inst_, x, t);
      if (mode_.exact) {
        total += to_double(p) * inst_.f().multilinear_exact(xb);
      } else {
        total += to_double(p) *
                 inst_.f().multilinear_mc(xb, mode_.samples, mix_seed(mode_.seed, j)).mean;
      }
    }
    return total;
  }

  std::vector<double> gradient(std::span<const double> x, int step) const override {
    std::vector<double> grad(grid_.total(), 0.0);
    int j = 0;
    for (const auto& [t, p] : dist_.support()) {
      ++j;
      if (p == 0) continue;
      const auto xb = xbar_at(inst_, x, t);
      const auto gf =
          mode_.exact ? inst_.f().multilinear_gradient(xb)
                      : inst_.f().multilinear_gradient_mc(
                            xb, mode_.samples, mix_seed(mode_.seed, 4096 + 64 * step + j));
      const double pd = to_double(p);
      for (int i = 0; i < grid_.n; ++i) {
        if (gf[i] == 0.0) continue;
        const std::int64_t hi = t - inst_.size(i);
        for (std::int64_t tp = 0; tp <= hi && tp < grid_.T; ++tp) {
          grad[grid_.var(tp, i)] += pd * gf[i];
        }
      }
    }
    return grad;
  }

 private:
  const Instance& inst_;
  const CapacityDistribution& dist_;
  GradientMode mode_;
  TimeGrid grid_;
};

struct ContinuousGreedyResult {
  std::vector<double> point;        // v with v/b in the polytope
  double value = 0.0;               // objective at v
  std::vector<double> step_values;  // objective after each step (exact mode)
  bool exact = true;
};

// Continuous greedy with stopping time b: N steps of size b/N toward the LP
// vertex maximizing the current gradient. The output is a convex combination
// of vertices scaled by b, so point/b lies in the polytope.
inline ContinuousGreedyResult continuous_greedy(const ContinuousObjective& objective,
                                                const LinearPolytope& polytope, double b,
                                                int steps, bool track_values = true) {
  if (!(b > 0.0 && b <= 1.0)) throw PreconditionError("stopping time must lie in (0,1]");
  if (steps < 1) throw PreconditionError("continuous greedy needs at least one step");
  ContinuousGreedyResult out;
  out.point.assign(objective.num_vars(), 0.0);
  const double delta = b / static_cast<double>(steps);
  for (int m = 0; m < steps; ++m) {
    const auto grad = objective.gradient(out.point, m);
    const LpResult vertex = lp_maximize(polytope, grad);
    for (int j = 0; j < objective.num_vars(); ++j) {
      out.point[j] += delta * vertex.x[j];
    }
    if (track_values) out.step_values.push_back(objective.value(out.point));
  }
  out.value = track_values ? out.step_values.back() : objective.value(out.point);
  return out;
}

// ---------------------------------------------------------------------------
// Rounding (the two-round scheme of the pseudo-polynomial algorithm).
// ---------------------------------------------------------------------------

struct RoundingTrace {
  std::vector<std::int64_t> chosen_time;  // -1 if the item chose no integer
  Mask first_round = 0;                   // I_1
  Mask second_round = 0;                  // I_2
  UniversalSequence sequence;

  nlohmann::json to_json() const {
    nlohmann::json times = nlohmann::json::array();
    for (auto t : chosen_time) times.push_back(t);
    nlohmann::json j{{"chosen_time", std::move(times)},
                     {"sequence", sequence.to_json()}};
    nlohmann::json i1 = nlohmann::json::array(), i2 = nlohmann::json::array();
    for (int i = 0; i < 32; ++i) {
      if (contains(first_round, i)) i1.push_back(i);
      if (contains(second_round, i)) i2.push_back(i);
    }
    j["first_round"] = std::move(i1);
    j["second_round"] = std::move(i2);
    return j;
  }
};

// First round: item i picks time t with probability x*_{ti}/4 (or x_{ti}
// directly when the input is already the stopping-time-1/4 output; the flag
// exists to prevent silent double scaling). Second round: J_i = {j in I_1 :
// t_j <= t_i} and i is discarded iff s(J_i) >= t_i, exactly as written.
// Survivors are sorted by time (ties by index), discarded items appended in
// ascending index.
inline RoundingTrace round_solution(const Instance& inst, std::span<const double> x,
                                    std::uint64_t seed, bool already_scaled) {
  const TimeGrid grid = time_grid(inst);
  if (static_cast<int>(x.size()) != grid.total()) {
    throw PreconditionError("rounding input has the wrong dimension");
  }
  // The unscaled point must be feasible for Eq. 2.
  {
    std::vector<double> unscaled(x.begin(), x.end());
    if (already_scaled) {
      for (double& v : unscaled) v *= 4.0;
    }
    const auto poly = build_full_relaxation(inst);
    if (!poly.contains(unscaled, 1e-7)) {
      throw PreconditionError("rounding input is not feasible for the time-indexed relaxation");
    }
  }
  RoundingTrace trace;
  trace.chosen_time.assign(grid.n, -1);
  Rng rng(seed);
  for (int i = 0; i < grid.n; ++i) {
    std::vector<double> probs(grid.T);
    for (std::int64_t t = 0; t < grid.T; ++t) {
      probs[t] = x[grid.var(t, i)] * (already_scaled ? 1.0 : 0.25);
    }
    const int pick = rng.pick_or_none(probs);
    if (pick >= 0) {
      trace.chosen_time[i] = pick;
      trace.first_round = with(trace.first_round, i);
    }
  }
  for (int i = 0; i < grid.n; ++i) {
    if (!contains(trace.first_round, i)) continue;
    std::int64_t load = 0;  // s(J_i), J_i includes i itself
    for (int j = 0; j < grid.n; ++j) {
      if (contains(trace.first_round, j) && trace.chosen_time[j] <= trace.chosen_time[i]) {
        load += inst.size(j);
      }
    }
    if (load < trace.chosen_time[i]) trace.second_round = with(trace.second_round, i);
  }
  std::vector<int> survivors, leftovers;
  for (int i = 0; i < grid.n; ++i) {
    (contains(trace.second_round, i) ? survivors : leftovers).push_back(i);
  }
  std::stable_sort(survivors.begin(), survivors.end(), [&](int a, int b) {
    if (trace.chosen_time[a] != trace.chosen_time[b]) {
      return trace.chosen_time[a] < trace.chosen_time[b];
    }
    return a < b;
  });
  trace.sequence.order = std::move(survivors);
  trace.sequence.order.insert(trace.sequence.order.end(), leftovers.begin(), leftovers.end());
  return trace;
}

// ---------------------------------------------------------------------------
// Contention-resolution verification (Lemma 7 statistics).
// ---------------------------------------------------------------------------

struct CrsItemStat {
  int item = -1;
  std::int64_t conditioned = 0;  // trials with i in R
  std::int64_t kept = 0;
  double frequency = 0.0;
  double stderr_ = 0.0;
  bool pass = true;
};

struct CrsReport {
  std::int64_t trials = 0;
  std::int64_t feasibility_violations = 0;
  std::vector<CrsItemStat> items;
  std::int64_t monotone_pairs = 0;
  std::int64_t monotone_violations = 0;
  bool pass = true;

  nlohmann::json to_json() const {
    nlohmann::json items_j = nlohmann::json::array();
    for (const auto& s : items) {
      items_j.push_back({{"item", s.item},
                         {"conditioned", s.conditioned},
                         {"kept", s.kept},
                         {"frequency", s.frequency},
                         {"stderr", s.stderr_},
                         {"pass", s.pass}});
    }
    return nlohmann::json{{"trials", trials},
                          {"feasibility_violations", feasibility_violations},
                          {"items", std::move(items_j)},
                          {"monotone_pairs", monotone_pairs},
                          {"monotone_violations", monotone_violations},
                          {"pass", pass}};
  }
};

namespace detail {

// One draw of the resolution map on the ambient set A: every i in A samples
// a completion-window time from x conditioned on finishing by t, then is
// kept iff the peers at or before its time leave room: sum_{j != i in A,
// t_j <= t_i} s(j) <= t_i. (Peer set excludes i; see the decisions ledger.)
struct CrsDraw {
  std::vector<std::int64_t> times;  // -1 for items outside A
  Mask kept = 0;
};

// Each item's time sample is derived from (base_seed, item), so runs over
// nested ambient sets share the samples of their common items.
inline CrsDraw crs_resolve(const Instance& inst, std::span<const double> x, std::int64_t t,
                           Mask ambient, std::uint64_t base_seed) {
  const TimeGrid grid = time_grid(inst);
  CrsDraw draw;
  draw.times.assign(grid.n, -1);
  for (int i = 0; i < grid.n; ++i) {
    if (!contains(ambient, i)) continue;
    const std::int64_t window = t - inst.size(i);
    double total = 0.0;
    for (std::int64_t tp = 0; tp <= window && tp < grid.T; ++tp) {
      total += x[grid.var(tp, i)];
    }
    if (total <= 0.0) continue;
    Rng item_rng(mix_seed(base_seed, static_cast<std::uint64_t>(i)));
    double u = item_rng.next_unit() * total;
    std::int64_t picked = 0;
    for (std::int64_t tp = 0; tp <= window && tp < grid.T; ++tp) {
      u -= x[grid.var(tp, i)];
      picked = tp;
      if (u < 0.0) break;
    }
    draw.times[i] = picked;
  }
  for (int i = 0; i < grid.n; ++i) {
    if (draw.times[i] < 0) continue;
    std::int64_t peers = 0;
    for (int j = 0; j < grid.n; ++j) {
      if (j != i && draw.times[j] >= 0 && draw.times[j] <= draw.times[i]) {
        peers += inst.size(j);
      }
    }
    if (peers <= draw.times[i]) draw.kept = with(draw.kept, i);
  }
  return draw;
}

}  // namespace detail

// Empirical check that the rounding map is a monotone (1/4,1/2)-balanced
// contention resolution scheme at capacity t for the Eq.2-feasible point x:
// (a) the kept set always fits in t (hard count), (b) conditional survival
// frequency >= 1/2 - 3 sigma per item with xbar_{ti} > 0, (c) keeping never
// improves when the ambient set grows (coupled draws on sampled pairs).
inline CrsReport crs_verify(const Instance& inst, std::span<const double> x, std::int64_t t,
                            std::int64_t trials, std::uint64_t seed) {
  if (trials < 10000) throw PreconditionError("crs_verify needs at least 10^4 trials");
  const TimeGrid grid = time_grid(inst);
  const auto xb = xbar_at(inst, x, t);
  CrsReport report;
  report.trials = trials;
  std::vector<std::int64_t> conditioned(grid.n, 0), kept_count(grid.n, 0);

  Rng rng(mix_seed(seed, 1));
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    Mask ambient = 0;
    for (int i = 0; i < grid.n; ++i) {
      if (rng.bernoulli(xb[i] / 4.0)) ambient = with(ambient, i);
    }
    const auto draw = detail::crs_resolve(inst, x, t, ambient, rng.next_u64());
    std::int64_t kept_size = 0;
    for (int i = 0; i < grid.n; ++i) {
      if (contains(ambient, i)) ++conditioned[i];
      if (contains(draw.kept, i)) {
        ++kept_count[i];
        kept_size += inst.size(i);
      }
    }
    if (kept_size > t) ++report.feasibility_violations;
  }
  for (int i = 0; i < grid.n; ++i) {
    if (xb[i] <= 0.0) continue;
    CrsItemStat stat;
    stat.item = i;
    stat.conditioned = conditioned[i];
    stat.kept = kept_count[i];
    if (conditioned[i] > 0) {
      stat.frequency = static_cast<double>(kept_count[i]) / static_cast<double>(conditioned[i]);
      stat.stderr_ = std::sqrt(std::max(stat.frequency * (1.0 - stat.frequency), 1e-12) /
                               static_cast<double>(conditioned[i]));
      stat.pass = stat.frequency >= 0.5 - 3.0 * stat.stderr_;
    }
    report.items.push_back(stat);
  }

  // Monotonicity on coupled draws: remove one ambient item and rerun with
  // identical time samples; survivors may only disappear.
  Rng mono_rng(mix_seed(seed, 2));
  const std::int64_t pair_trials = std::min<std::int64_t>(trials, 20000);
  for (std::int64_t trial = 0; trial < pair_trials; ++trial) {
    Mask superset = 0;
    for (int i = 0; i < grid.n; ++i) {
      if (mono_rng.bernoulli(std::min(1.0, xb[i]))) superset = with(superset, i);
    }
    if (superset == 0) continue;
    std::vector<int> present;
    for (int i = 0; i < grid.n; ++i)
      if (contains(superset, i)) present.push_back(i);
    const int removed = present[mono_rng.uniform_int(0, static_cast<int>(present.size()) - 1)];
    const Mask subset = without(superset, removed);

    const std::uint64_t draw_seed = mono_rng.next_u64();
    const auto big = detail::crs_resolve(inst, x, t, superset, draw_seed);
    const auto small = detail::crs_resolve(inst, x, t, subset, draw_seed);
    ++report.monotone_pairs;
    // With identical per-item samples, anything kept in the superset and
    // still ambient in the subset must be kept in the subset.
    const Mask still = big.kept & subset;
    if ((still & ~small.kept) != 0) ++report.monotone_violations;
  }

  report.pass = report.feasibility_violations == 0 && report.monotone_violations == 0;
  for (const auto& s : report.items) report.pass = report.pass && s.pass;
  return report;
}

// ---------------------------------------------------------------------------
// Lemma 8 / Lemma 9 conversions between the two relaxations.
// ---------------------------------------------------------------------------

// y_{ki} = sum of x over block k (Lemma 8).
inline std::vector<double> compaction_project(const Instance& inst,
                                              const BreakpointStructure& bp,
                                              std::span<const double> x) {
  const TimeGrid grid = time_grid(inst);
  const CompactGrid cgrid = compact_grid(inst, bp);
  std::vector<double> y(cgrid.total(), 0.0);
  for (int k = 0; k < cgrid.blocks; ++k) {
    for (std::int64_t t = bp.xi[k]; t < bp.xi[k + 1]; ++t) {
      for (int i = 0; i < grid.n; ++i) {
        y[cgrid.var(k, i)] += x[grid.var(t, i)];
      }
    }
  }
  return y;
}

// x_{ti} = y_{ki}/(xi_{k+1} - xi_k) on block k (Lemma 9); x/2 is feasible
// for Eq. 2.
inline std::vector<double> conversion_expand(const Instance& inst,
                                             const BreakpointStructure& bp,
                                             std::span<const double> y) {
  const TimeGrid grid = time_grid(inst);
  const CompactGrid cgrid = compact_grid(inst, bp);
  std::vector<double> x(grid.total(), 0.0);
  for (int k = 0; k < cgrid.blocks; ++k) {
    const double width = static_cast<double>(bp.xi[k + 1] - bp.xi[k]);
    for (std::int64_t t = bp.xi[k]; t < bp.xi[k + 1]; ++t) {
      for (int i = 0; i < grid.n; ++i) {
        x[grid.var(t, i)] = y[cgrid.var(k, i)] / width;
      }
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Algorithm 5: breakpoints -> continuous greedy (stopping time 1/4) on the
// compact relaxation -> implicit-x sampling -> prefix survival filtering.
// ---------------------------------------------------------------------------

struct Alg5Pipeline {
  BreakpointStructure breakpoints;
  LinearPolytope polytope;
  std::vector<double> y;  // continuous-greedy output, sum_k y_{ki} <= 1/4
  double cg_value = 0.0;
  std::vector<double> cg_step_values;
  bool exact_gradients = true;
  double conditioning_scale = 1.0;  // permissive-mode renormalization factor
  CapacityDistribution dist;        // the (possibly conditioned) distribution
};

inline Alg5Pipeline algorithm5_prepare(const Instance& inst, const CapacityDistribution& dist,
                                       double eps, std::uint64_t seed, int steps = 200,
                                       bool permissive = false) {
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.f().eval(with(0, i)) <= 0.0) {
      throw PreconditionError("remove zero-value items before running the pipeline");
    }
  }
  CapacityDistribution used = dist;
  double scale = 1.0;
  if (dist.pbar(inst.min_size()) != 1) {
    if (!permissive) {
      throw PreconditionError(
          "pbar(s_min) != 1; rerun with the permissive flag to condition on C > s_min");
    }
    auto [conditioned, factor] = dist.conditioned_at_least(inst.min_size() + 1);
    used = std::move(conditioned);
    scale = to_double(factor);
  }
  BreakpointStructure bp = build_breakpoints(inst, used, eps);
  LinearPolytope poly = build_compact_relaxation(inst, bp);
  const GradientMode mode = pick_gradient_mode(inst, poly.num_vars, seed);
  CompactObjective objective(inst, bp, mode);
  ContinuousGreedyResult cg =
      continuous_greedy(objective, poly, 0.25, steps, /*track_values=*/mode.exact);

  Alg5Pipeline pipe{std::move(bp), std::move(poly), std::move(cg.point), cg.value,
                    std::move(cg.step_values), mode.exact, scale, std::move(used)};
  return pipe;
}

// Lines 5-13 of the algorithm: sample k per item with probability y_{ki}
// (blocks index the y variables; see ledger), draw t_i uniformly on
// [xi_k, xi_{k+1}), sort the non-discarded items by t_i, then keep item i of
// the sorted list iff the total size of all earlier listed items is < t_i
// (the first item is kept unconditionally). Discarded items are appended in
// ascending index.
inline UniversalSequence algorithm5_round(const Instance& inst, const Alg5Pipeline& pipe,
                                          std::uint64_t seed) {
  const CompactGrid grid = compact_grid(inst, pipe.breakpoints);
  Rng rng(seed);
  std::vector<std::int64_t> times(inst.n(), -1);
  for (int i = 0; i < inst.n(); ++i) {
    std::vector<double> probs(grid.blocks);
    for (int k = 0; k < grid.blocks; ++k) probs[k] = pipe.y[grid.var(k, i)];
    const int block = rng.pick_or_none(probs);
    if (block >= 0) {
      times[i] =
          rng.uniform_int(pipe.breakpoints.xi[block], pipe.breakpoints.xi[block + 1] - 1);
    }
  }
  std::vector<int> picked, leftovers;
  for (int i = 0; i < inst.n(); ++i) (times[i] >= 0 ? picked : leftovers).push_back(i);
  std::stable_sort(picked.begin(), picked.end(), [&](int a, int b) {
    if (times[a] != times[b]) return times[a] < times[b];
    return a < b;
  });
  UniversalSequence seq;
  std::int64_t prefix = 0;
  for (std::size_t pos = 0; pos < picked.size(); ++pos) {
    const int item = picked[pos];
    if (pos == 0 || prefix < times[item]) {
      seq.order.push_back(item);
    } else {
      leftovers.push_back(item);
    }
    prefix += inst.size(item);
  }
  std::sort(leftovers.begin(), leftovers.end());
  seq.order.insert(seq.order.end(), leftovers.begin(), leftovers.end());
  return seq;
}

inline UniversalSequence algorithm5(const Instance& inst, const CapacityDistribution& dist,
                                    double eps, std::uint64_t seed, int steps = 200,
                                    bool permissive = false) {
  const Alg5Pipeline pipe = algorithm5_prepare(inst, dist, eps, seed, steps, permissive);
  return algorithm5_round(inst, pipe, mix_seed(seed, 0xa15));
}

}  // namespace subknap

#include <boost/math/special_functions/gamma.hpp>

namespace subknap {

// chi-square upper-tail p-value via the regularized incomplete gamma.
inline double chi_square_pvalue(double statistic, int dof) {
  if (dof < 1) throw PreconditionError("chi-square needs dof >= 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

}  // namespace subknap

#endif  // SUBKNAP_STOCHASTIC_HPP
