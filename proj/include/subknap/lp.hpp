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

#ifndef SUBKNAP_LP_HPP
#define SUBKNAP_LP_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "subknap/errors.hpp"

namespace subknap {

// A v <= b, v >= 0, with b >= 0 (the origin is feasible). All systems built
// here are downward-closed: A >= 0.
struct LinearPolytope {
  int num_vars = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  void add_row(std::vector<double> coeffs, double bound) {
    rows.push_back(std::move(coeffs));
    rhs.push_back(bound);
  }

  // Most negative slack of A v <= b, v >= 0 (>= 0 means feasible).
  double min_slack(std::span<const double> v) const {
    double slack = 0.0;
    for (double x : v) slack = std::min(slack, x);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double lhs = 0.0;
      for (int j = 0; j < num_vars; ++j) lhs += rows[r][j] * v[j];
      slack = std::min(slack, rhs[r] - lhs);
    }
    return slack;
  }

  bool contains(std::span<const double> v, double tol = 1e-9) const {
    return min_slack(v) >= -tol;
  }
};

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

// Dense primal simplex maximizing w.x over the polytope, starting from the
// all-slack basis (valid because b >= 0). Bland's rule on both the entering
// and leaving choices makes the vertex deterministic and prevents cycling.
inline LpResult lp_maximize(const LinearPolytope& poly, std::span<const double> weights,
                            double tol = 1e-9, int max_iterations = 200000) {
  const int n = poly.num_vars;
  const int m = static_cast<int>(poly.rows.size());
  if (static_cast<int>(weights.size()) != n) {
    throw PreconditionError("objective dimension mismatch");
  }
  for (double b : poly.rhs) {
    if (b < 0) throw SolverError("polytope rhs must be nonnegative (origin-feasible form)");
  }

  // Tableau: m rows by (n structural + m slack + 1 rhs) columns, plus the
  // reduced-cost row stored separately.
  std::vector<std::vector<double>> tab(m, std::vector<double>(n + m + 1, 0.0));
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) tab[r][j] = poly.rows[r][j];
    tab[r][n + r] = 1.0;
    tab[r][n + m] = poly.rhs[r];
  }
  std::vector<double> cost(n + m, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = weights[j];
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) basis[r] = n + r;
  double objective = 0.0;

  LpResult result;
  for (result.iterations = 0; result.iterations < max_iterations; ++result.iterations) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (cost[j] > tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m; ++r) {
      if (tab[r][enter] > tol) {
        const double ratio = tab[r][n + m] / tab[r][enter];
        if (leave < 0 || ratio < best_ratio - tol ||
            (ratio < best_ratio + tol && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      throw SolverError("LP is unbounded along variable " + std::to_string(enter));
    }

    const double pivot = tab[leave][enter];
    for (double& v : tab[leave]) v /= pivot;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double factor = tab[r][enter];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) tab[r][j] -= factor * tab[leave][j];
    }
    const double cost_factor = cost[enter];
    for (int j = 0; j < n + m; ++j) cost[j] -= cost_factor * tab[leave][j];
    objective += cost_factor * tab[leave][n + m];
    basis[leave] = enter;
  }
  if (result.iterations >= max_iterations) {
    throw SolverError("simplex iteration cap reached (" + std::to_string(max_iterations) +
                      " iterations, " + std::to_string(m) + "x" + std::to_string(n) +
                      " system)");
  }

  result.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) result.x[basis[r]] = std::max(0.0, tab[r][n + m]);
  }
  result.objective = objective;
  return result;
}

}  // namespace subknap

#endif  // SUBKNAP_LP_HPP
