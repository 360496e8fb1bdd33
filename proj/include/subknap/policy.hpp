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

#ifndef SUBKNAP_POLICY_HPP
#define SUBKNAP_POLICY_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subknap/errors.hpp"
#include "subknap/instance.hpp"
#include "subknap/rational.hpp"
#include "subknap/submodular.hpp"

namespace subknap {

// Fit/no-fit oracle hiding the capacity. Policies observe only the boolean
// answers; there is deliberately no capacity accessor on this type.
class CapacityOracle {
 public:
  struct Attempt {
    int item = -1;
    bool fit = false;
  };

  CapacityOracle(const Instance& instance, std::int64_t capacity)
      : capacity_(capacity) {
    sizes_.reserve(instance.n());
    for (const Item& it : instance.items()) sizes_.push_back(it.size);
  }

  // Installs an initial knapsack state without fit checks; the caller
  // guarantees s(U) <= C.
  void preload(Mask u) {
    packed_ = u;
    packed_size_ = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (contains(u, static_cast<int>(i))) packed_size_ += sizes_[i];
    }
  }

  // Tries to add item i; on fit the addition is irrevocable.
  bool attempt(int i) {
    if (i < 0 || i >= static_cast<int>(sizes_.size())) {
      throw PreconditionError("attempted an unknown item");
    }
    const bool fit = packed_size_ + sizes_[i] <= capacity_;
    if (fit) {
      packed_ = with(packed_, i);
      packed_size_ += sizes_[i];
    }
    log_.push_back({i, fit});
    return fit;
  }

  Mask packed() const { return packed_; }
  std::int64_t packed_size() const { return packed_size_; }
  const std::vector<Attempt>& log() const { return log_; }

 private:
  std::int64_t capacity_ = 0;
  std::int64_t packed_size_ = 0;
  Mask packed_ = 0;
  std::vector<std::int64_t> sizes_;
  std::vector<Attempt> log_;
};

// Binary decision tree: try `item`; descend `on_fit` if it fit, `on_nofit`
// otherwise. Each root-to-leaf path contains every item at most once.
struct DecisionTree {
  int item = -1;
  std::unique_ptr<DecisionTree> on_fit;
  std::unique_ptr<DecisionTree> on_nofit;

  nlohmann::json to_json() const {
    nlohmann::json j{{"item", item}};
    j["fit"] = on_fit ? on_fit->to_json() : nlohmann::json();
    j["nofit"] = on_nofit ? on_nofit->to_json() : nlohmann::json();
    return j;
  }

  std::unique_ptr<DecisionTree> clone() const {
    auto t = std::make_unique<DecisionTree>();
    t->item = item;
    if (on_fit) t->on_fit = on_fit->clone();
    if (on_nofit) t->on_nofit = on_nofit->clone();
    return t;
  }
};

inline bool tree_paths_valid(const DecisionTree* node, Mask seen, int n) {
  if (node == nullptr) return true;
  if (node->item < 0 || node->item >= n) return false;
  if (contains(seen, node->item)) return false;
  const Mask now = with(seen, node->item);
  return tree_paths_valid(node->on_fit.get(), now, n) &&
         tree_paths_valid(node->on_nofit.get(), now, n);
}

// A universal policy: a fixed permutation of all items.
struct UniversalSequence {
  std::vector<int> order;

  nlohmann::json to_json() const { return nlohmann::json(order); }
};

inline void check_permutation(const UniversalSequence& seq, int n) {
  if (static_cast<int>(seq.order.size()) != n) {
    throw PreconditionError("sequence must contain every item exactly once");
  }
  Mask seen = 0;
  for (int i : seq.order) {
    if (i < 0 || i >= n || contains(seen, i)) {
      throw PreconditionError("sequence must contain every item exactly once");
    }
    seen = with(seen, i);
  }
}

struct PolicyTrace {
  std::vector<CapacityOracle::Attempt> attempts;
  Mask packed = 0;
  double value = 0.0;
  std::vector<int> greedy_order;

  // Populated by the deterministic policy (Algorithm 3).
  Mask single_valuable = 0;  // S
  Mask initial_set = 0;      // U
  std::int64_t initial_size = 0;  // s* = s(U)
  int star_item = -1;        // i*, the unique element of U when nonempty

  nlohmann::json to_json() const {
    nlohmann::json att = nlohmann::json::array();
    for (const auto& a : attempts) att.push_back({{"item", a.item}, {"fit", a.fit}});
    nlohmann::json packed_items = nlohmann::json::array();
    for (int i = 0; i < 32; ++i)
      if (contains(packed, i)) packed_items.push_back(i);
    nlohmann::json j{{"attempts", std::move(att)},
                     {"packed", std::move(packed_items)},
                     {"value", value}};
    if (!greedy_order.empty()) j["greedy_order"] = greedy_order;
    if (star_item >= 0) {
      j["single_valuable"] = [&] {
        nlohmann::json s = nlohmann::json::array();
        for (int i = 0; i < 32; ++i)
          if (contains(single_valuable, i)) s.push_back(i);
        return s;
      }();
      j["initial_size"] = initial_size;
      j["star_item"] = star_item;
    }
    return j;
  }
};

struct PolicyConfig {
  bool cancellation = true;
  enum GammaMode { kExactBruteForce, kLazyGreedyHeuristic } gamma_mode = kExactBruteForce;
  int brute_force_bound = 20;  // max n for the exact gamma=1 subroutine
};

namespace detail {

// Exact maximizer of f over {X : s(X) <= budget_num/budget_den}, by 2^n
// enumeration, ties to the lexicographically smallest bitmask. Num is
// double or Rational.
template <typename Num>
std::pair<Mask, Num> opt_subset(const Instance& inst, std::int64_t budget_num,
                                std::int64_t budget_den = 1) {
  const int n = inst.n();
  Mask best_mask = 0;
  Num best = Num(0);
  const Mask top = full_mask(n);
  for (Mask x = 0;; ++x) {
    if (inst.size_of(x) * budget_den <= budget_num) {
      Num v;
      if constexpr (std::is_same_v<Num, Rational>) {
        v = inst.f().eval_exact(x);
      } else {
        v = inst.f().eval(x);
      }
      if (v > best) {
        best = v;
        best_mask = x;
      }
    }
    if (x == top) break;
  }
  return {best_mask, best};
}

inline int argmax_density(const Instance& inst, Mask x, Mask remaining) {
  int best = -1;
  double best_density = -1.0;
  for (int i = 0; i < inst.n(); ++i) {
    if (!contains(remaining, i)) continue;
    const double d = inst.f().marginal(x, i) / static_cast<double>(inst.size(i));
    if (d > best_density) {
      best_density = d;
      best = i;
    }
  }
  return best;
}

inline int argmax_marginal(const Instance& inst, Mask x, Mask remaining) {
  int best = -1;
  double best_gain = -1.0;
  for (int i = 0; i < inst.n(); ++i) {
    if (!contains(remaining, i)) continue;
    const double g = inst.f().marginal(x, i);
    if (g > best_gain) {
      best_gain = g;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

// Simulates a decision tree against the oracle. Without cancellation the
// process stops at the first non-fit and the failing item is excluded.
inline PolicyTrace execute_adaptive(const Instance& inst, const DecisionTree* tree,
                                    CapacityOracle& oracle, bool cancellation) {
  if (!tree_paths_valid(tree, oracle.packed(), inst.n())) {
    throw PreconditionError("decision tree repeats or references unknown items");
  }
  const DecisionTree* node = tree;
  while (node != nullptr) {
    const bool fit = oracle.attempt(node->item);
    if (!fit && !cancellation) break;
    node = fit ? node->on_fit.get() : node->on_nofit.get();
  }
  PolicyTrace trace;
  trace.attempts = oracle.log();
  trace.packed = oracle.packed();
  trace.value = inst.f().eval(trace.packed);
  return trace;
}

inline PolicyTrace execute_universal(const Instance& inst, const UniversalSequence& seq,
                                     CapacityOracle& oracle, bool cancellation) {
  check_permutation(seq, inst.n());
  for (int i : seq.order) {
    const bool fit = oracle.attempt(i);
    if (!fit && !cancellation) break;
  }
  PolicyTrace trace;
  trace.attempts = oracle.log();
  trace.packed = oracle.packed();
  trace.value = inst.f().eval(trace.packed);
  return trace;
}

// Algorithm 1: density greedy from initial state U. The oracle must already
// hold exactly U. Requires cancellation (the loop runs through all items).
// Records the greedy order (i_1, ..., i_{|I\U|}).
inline PolicyTrace greedy_policy(const Instance& inst, Mask u, CapacityOracle& oracle) {
  if (oracle.packed() != u) {
    throw PreconditionError("oracle state does not match the initial set U");
  }
  Mask x = u;
  Mask remaining = full_mask(inst.n()) & ~u;
  PolicyTrace trace;
  while (remaining != 0) {
    const int i = detail::argmax_density(inst, x, remaining);
    trace.greedy_order.push_back(i);
    if (oracle.attempt(i)) x = with(x, i);
    remaining = without(remaining, i);
  }
  trace.attempts = oracle.log();
  trace.packed = oracle.packed();
  trace.value = inst.f().eval(trace.packed);
  return trace;
}

// Algorithm 2's tail branch: greedy by marginal value. The packed set always
// contains argmax{f({i}) : s(i) <= C}.
inline PolicyTrace value_greedy_policy(const Instance& inst, CapacityOracle& oracle) {
  Mask x = oracle.packed();
  Mask remaining = full_mask(inst.n()) & ~x;
  PolicyTrace trace;
  while (remaining != 0) {
    const int i = detail::argmax_marginal(inst, x, remaining);
    trace.greedy_order.push_back(i);
    if (oracle.attempt(i)) x = with(x, i);
    remaining = without(remaining, i);
  }
  trace.attempts = oracle.log();
  trace.packed = oracle.packed();
  trace.value = inst.f().eval(trace.packed);
  return trace;
}

// Algorithm 2: a fair coin picks between the density greedy P1 and the value
// greedy P2; the coin is the only randomness, so the expectation is the
// average of the two branch values.
inline double randomized_adaptive_expectation(const Instance& inst, std::int64_t capacity) {
  CapacityOracle o1(inst, capacity);
  const PolicyTrace p1 = greedy_policy(inst, 0, o1);
  CapacityOracle o2(inst, capacity);
  const PolicyTrace p2 = value_greedy_policy(inst, o2);
  return (p1.value + p2.value) / 2.0;
}

namespace detail {

// gamma-subroutine of Algorithm 3: a value L with f(L) approximating
// max{f(X) : 2 s(X) <= s(i)} (the budget s(i)/2 against integer sizes).
inline double gamma_opt_half(const Instance& inst, std::int64_t item_size,
                             const PolicyConfig& config) {
  if (config.gamma_mode == PolicyConfig::kExactBruteForce) {
    if (inst.n() > config.brute_force_bound) {
      throw CapabilityError("exact gamma subroutine capped at n <= " +
                            std::to_string(config.brute_force_bound));
    }
    return opt_subset<double>(inst, item_size, 2).second;
  }
  // Lazy-greedy heuristic: better of density greedy and value greedy under
  // the budget. No approximation guarantee; reports label this mode.
  double best = 0;
  for (const bool by_density : {true, false}) {
    Mask x = 0;
    Mask remaining = full_mask(inst.n());
    std::int64_t used = 0;
    while (remaining != 0) {
      const int i = by_density ? argmax_density(inst, x, remaining)
                               : argmax_marginal(inst, x, remaining);
      if (2 * (used + inst.size(i)) <= item_size) {
        x = with(x, i);
        used += inst.size(i);
      }
      remaining = without(remaining, i);
    }
    best = std::max(best, inst.f().eval(x));
  }
  return best;
}

}  // namespace detail

// Algorithm 3: compute the single-valuable set S (f({i}) >= 2 f(L) for the
// configured subroutine's L), try S in decreasing singleton value until one
// item fits, then run Algorithm 1 from that state.
inline PolicyTrace deterministic_policy(const Instance& inst, CapacityOracle& oracle,
                                        const PolicyConfig& config = {}) {
  Mask s_set = 0;
  for (int i = 0; i < inst.n(); ++i) {
    const double l = detail::gamma_opt_half(inst, inst.size(i), config);
    if (inst.f().eval(with(0, i)) >= 2.0 * l) s_set = with(s_set, i);
  }
  Mask u = 0;
  Mask remaining = full_mask(inst.n());
  int star = -1;
  while (u == 0 && (s_set & remaining) != 0) {
    int i = -1;
    double best = -1.0;
    for (int k = 0; k < inst.n(); ++k) {
      if (!contains(s_set & remaining, k)) continue;
      const double v = inst.f().eval(with(0, k));
      if (v > best) {
        best = v;
        i = k;
      }
    }
    if (oracle.attempt(i)) {
      u = with(0, i);
      star = i;
    }
    remaining = without(remaining, i);
  }
  PolicyTrace trace = greedy_policy(inst, u, oracle);
  trace.attempts = oracle.log();
  trace.single_valuable = s_set;
  trace.initial_set = u;
  trace.initial_size = inst.size_of(u);
  trace.star_item = star;
  return trace;
}

// Algorithm 4: the doubling sequence Pi1 (simulated Algorithm 1 at
// capacities 2^k * s_min) and the decreasing-singleton-value sequence Pi2.
// The construction is offline and never queries the real oracle.
inline std::pair<UniversalSequence, UniversalSequence> universal_policy_sequences(
    const Instance& inst, std::uint64_t /*seed; demo-mode API symmetry*/ = 0) {
  UniversalSequence pi1, pi2;
  const int n = inst.n();
  if (n == 0) return {pi1, pi2};

  const std::int64_t s_min = inst.min_size();
  const std::int64_t total = inst.total_size();
  int k_max = 0;  // smallest k with 2^k * s_min >= total, exact integer arithmetic
  while ((s_min << k_max) < total) ++k_max;

  Mask emitted = 0;
  for (int k = 0; k <= k_max; ++k) {
    CapacityOracle sim(inst, s_min << k);
    const PolicyTrace y = greedy_policy(inst, 0, sim);
    for (int i = 0; i < n; ++i) {
      if (contains(y.packed, i) && !contains(emitted, i)) {
        pi1.order.push_back(i);
        emitted = with(emitted, i);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!contains(emitted, i)) pi1.order.push_back(i);
  }

  std::vector<int> by_value(n);
  for (int i = 0; i < n; ++i) by_value[i] = i;
  std::stable_sort(by_value.begin(), by_value.end(), [&](int a, int b) {
    return inst.f().eval(with(0, a)) > inst.f().eval(with(0, b));
  });
  pi2.order = std::move(by_value);
  return {pi1, pi2};
}

// Exact expectation of Algorithm 4 at a fixed capacity (the coin is the only
// randomness).
inline double randomized_universal_expectation(const Instance& inst, std::int64_t capacity) {
  const auto [pi1, pi2] = universal_policy_sequences(inst);
  if (inst.n() == 0) return 0.0;
  CapacityOracle o1(inst, capacity);
  CapacityOracle o2(inst, capacity);
  const double v1 = execute_universal(inst, pi1, o1, /*cancellation=*/true).value;
  const double v2 = execute_universal(inst, pi2, o2, /*cancellation=*/true).value;
  return (v1 + v2) / 2.0;
}

enum class SearchAggregate { kWeightedSum, kWorstCase };

template <typename Num>
struct PolicySearchResult {
  std::unique_ptr<DecisionTree> tree;
  Num score = Num(0);
};

namespace detail {

// Builds every complete decision tree over `remaining` (each path tries all
// remaining items). Counts grow as t(k) = k * t(k-1)^2, so n <= 4.
inline std::vector<std::unique_ptr<DecisionTree>> all_trees(Mask remaining, int n) {
  std::vector<std::unique_ptr<DecisionTree>> out;
  if (remaining == 0) {
    out.push_back(nullptr);
    return out;
  }
  for (int r = 0; r < n; ++r) {
    if (!contains(remaining, r)) continue;
    auto fits = all_trees(without(remaining, r), n);
    auto nofits = all_trees(without(remaining, r), n);
    for (const auto& l : fits) {
      for (const auto& rr : nofits) {
        auto node = std::make_unique<DecisionTree>();
        node->item = r;
        node->on_fit = l ? l->clone() : nullptr;
        node->on_nofit = rr ? rr->clone() : nullptr;
        out.push_back(std::move(node));
      }
    }
  }
  return out;
}

}  // namespace detail

// Enumerates all deterministic adaptive policies (complete decision trees)
// and maximizes either sum_C w_C * f(tree(C))/f(OPT_C) or the worst-case
// ratio min_C f(tree(C))/f(OPT_C). Rows with f(OPT_C) = 0 count as ratio 1.
template <typename Num>
PolicySearchResult<Num> exhaustive_policy_search(
    const Instance& inst, const std::vector<std::int64_t>& capacities,
    const std::vector<Num>& weights, SearchAggregate aggregate) {
  if (inst.n() > 4) {
    throw CapabilityError("exhaustive policy search capped at n <= 4");
  }
  if (aggregate == SearchAggregate::kWeightedSum && weights.size() != capacities.size()) {
    throw PreconditionError("weighted search needs one weight per capacity");
  }
  std::vector<Num> opts;
  for (std::int64_t c : capacities) {
    opts.push_back(detail::opt_subset<Num>(inst, c).second);
  }
  auto trees = detail::all_trees(full_mask(inst.n()), inst.n());
  PolicySearchResult<Num> best;
  bool first = true;
  for (auto& tree : trees) {
    Num score = aggregate == SearchAggregate::kWeightedSum ? Num(0) : Num(1);
    for (std::size_t k = 0; k < capacities.size(); ++k) {
      CapacityOracle oracle(inst, capacities[k]);
      const PolicyTrace t = execute_adaptive(inst, tree.get(), oracle, /*cancellation=*/true);
      Num value;
      if constexpr (std::is_same_v<Num, Rational>) {
        value = inst.f().eval_exact(t.packed);
      } else {
        value = t.value;
      }
      const Num ratio = opts[k] == Num(0) ? Num(1) : Num(value / opts[k]);
      if (aggregate == SearchAggregate::kWeightedSum) {
        score += weights[k] * ratio;
      } else {
        score = std::min(score, ratio);
      }
    }
    if (first || score > best.score) {
      best.score = score;
      best.tree = tree ? tree->clone() : nullptr;
      first = false;
    }
  }
  if (first) {  // n == 0: the empty policy
    best.score = Num(1);
  }
  return best;
}

}  // namespace subknap

#endif  // SUBKNAP_POLICY_HPP
