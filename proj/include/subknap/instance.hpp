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

#ifndef SUBKNAP_INSTANCE_HPP
#define SUBKNAP_INSTANCE_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subknap/errors.hpp"
#include "subknap/rational.hpp"
#include "subknap/rng.hpp"
#include "subknap/submodular.hpp"

namespace subknap {

struct Item {
  int id = 0;
  std::int64_t size = 1;  // positive integer
};

// Items plus a submodular objective over the same ground set.
class Instance {
 public:
  Instance(std::vector<Item> items, SubmodularFunction f)
      : items_(std::move(items)), f_(std::move(f)) {
    if (static_cast<int>(items_.size()) != f_.n()) {
      throw PreconditionError("item count disagrees with the function's ground set");
    }
    total_ = 0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].size < 1) throw PreconditionError("item sizes must be >= 1");
      items_[i].id = static_cast<int>(i);
      total_ += items_[i].size;
    }
  }

  int n() const { return static_cast<int>(items_.size()); }
  std::int64_t total_size() const { return total_; }
  std::int64_t size(int i) const { return items_[i].size; }
  const std::vector<Item>& items() const { return items_; }
  const SubmodularFunction& f() const { return f_; }

  std::int64_t size_of(Mask x) const {
    std::int64_t s = 0;
    for (int i = 0; i < n(); ++i)
      if (contains(x, i)) s += items_[i].size;
    return s;
  }

  std::int64_t min_size() const {
    std::int64_t m = items_.empty() ? 0 : items_[0].size;
    for (const Item& it : items_) m = std::min(m, it.size);
    return m;
  }

 private:
  std::vector<Item> items_;
  SubmodularFunction f_;
  std::int64_t total_ = 0;
};

enum class NormalizePolicy { kStrict, kRenormalize };

// Probability distribution of the capacity over {0,...,T}. Zero-probability
// support points are preserved. tail(t) = sum_{t'>=t} p(t'); pbar(t) =
// tail(t+1).
class CapacityDistribution {
 public:
  CapacityDistribution(std::int64_t T, std::vector<std::pair<std::int64_t, Rational>> mass,
                       NormalizePolicy policy = NormalizePolicy::kStrict)
      : T_(T) {
    std::sort(mass.begin(), mass.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Rational sum = 0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
      const auto t = mass[k].first;
      if (t < 0 || t > T_) throw ParseError("distribution: support point outside [0,T]");
      if (k > 0 && mass[k - 1].first == t) throw ParseError("distribution: duplicate support point");
      if (mass[k].second < 0) throw ParseError("distribution: negative probability");
      sum += mass[k].second;
    }
    if (sum != 1) {
      const double err = std::abs(to_double(sum) - 1.0);
      if (err > 1e-12) {
        throw ParseError("distribution: probabilities sum to " + format_rational(sum));
      }
      if (policy == NormalizePolicy::kStrict) {
        throw ParseError("distribution: probabilities sum to " + format_rational(sum) +
                         " (strict mode; pass the renormalize flag to rescale)");
      }
      if (sum == 0) throw ParseError("distribution: probabilities sum to 0");
      for (auto& [t, p] : mass) p /= sum;
    }
    mass_ = std::move(mass);
    rebuild_tails();
  }

  std::int64_t T() const { return T_; }
  const std::vector<std::pair<std::int64_t, Rational>>& support() const { return mass_; }

  Rational prob(std::int64_t t) const {
    const auto it = std::lower_bound(
        mass_.begin(), mass_.end(), t,
        [](const auto& a, std::int64_t v) { return a.first < v; });
    if (it == mass_.end() || it->first != t) return Rational(0);
    return it->second;
  }
  double prob_d(std::int64_t t) const { return to_double(prob(t)); }

  // Suffix sum over t' >= t; defined for 0 <= t <= T+1.
  Rational tail(std::int64_t t) const {
    if (t < 0 || t > T_ + 1) throw PreconditionError("tail index outside [0, T+1]");
    const auto it = std::lower_bound(
        mass_.begin(), mass_.end(), t,
        [](const auto& a, std::int64_t v) { return a.first < v; });
    const std::size_t k = static_cast<std::size_t>(it - mass_.begin());
    return k < tails_.size() ? tails_[k] : Rational(0);
  }
  double tail_d(std::int64_t t) const { return to_double(tail(t)); }

  Rational pbar(std::int64_t t) const { return tail(t + 1); }
  double pbar_d(std::int64_t t) const { return to_double(pbar(t)); }

  // Conditions on C >= cutoff, renormalizing. Returns the conditioned
  // distribution and the scaling factor 1/Pr[C >= cutoff].
  std::pair<CapacityDistribution, Rational> conditioned_at_least(std::int64_t cutoff) const {
    const Rational keep = tail(cutoff);
    if (keep == 0) throw PreconditionError("conditioning event has probability 0");
    std::vector<std::pair<std::int64_t, Rational>> mass;
    for (const auto& [t, p] : mass_) {
      if (t >= cutoff) mass.emplace_back(t, p / keep);
    }
    return {CapacityDistribution(T_, std::move(mass)), Rational(1) / keep};
  }

  nlohmann::json to_json() const {
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [t, q] : mass_) p[std::to_string(t)] = format_rational(q);
    return nlohmann::json{{"p", std::move(p)}};
  }

  static CapacityDistribution from_json(const nlohmann::json& j, std::int64_t T,
                                        NormalizePolicy policy) {
    if (!j.is_object()) throw ParseError("distribution: expected object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "p") throw ParseError("distribution: unknown key '" + it.key() + "'");
    }
    if (!j.contains("p") || !j["p"].is_object()) {
      throw ParseError("distribution: missing 'p' object");
    }
    std::vector<std::pair<std::int64_t, Rational>> mass;
    for (auto it = j["p"].begin(); it != j["p"].end(); ++it) {
      std::int64_t t = 0;
      try {
        std::size_t pos = 0;
        t = std::stoll(it.key(), &pos);
        if (pos != it.key().size()) throw std::invalid_argument(it.key());
      } catch (const std::exception&) {
        throw ParseError("distribution: bad support point '" + it.key() + "'");
      }
      const auto& v = it.value();
      Rational p;
      if (v.is_string()) {
        p = parse_rational(v.get<std::string>());
      } else if (v.is_number_integer()) {
        p = Rational(v.get<std::int64_t>());
      } else if (v.is_number_float()) {
        p = Rational(v.get<double>());  // exact binary expansion
      } else {
        throw ParseError("distribution: probability must be a number or \"p/q\"");
      }
      mass.emplace_back(t, std::move(p));
    }
    return CapacityDistribution(T, std::move(mass), policy);
  }

 private:
  void rebuild_tails() {
    tails_.assign(mass_.size() + 1, Rational(0));
    for (std::size_t k = mass_.size(); k-- > 0;) {
      tails_[k] = tails_[k + 1] + mass_[k].second;
    }
  }

  std::int64_t T_ = 0;
  std::vector<std::pair<std::int64_t, Rational>> mass_;
  std::vector<Rational> tails_;
};

struct Fixture {
  Instance instance;
  std::optional<CapacityDistribution> distribution;
};

// Three items a,b,c with sizes 2,3,4 and weights equal to sizes; the
// adversary plays capacity 4 with probability 4/9 and 5 with probability 5/9.
inline Fixture make_kpuc_eight_ninths() {
  std::vector<Item> items = {{0, 2}, {1, 3}, {2, 4}};
  auto f = SubmodularFunction::Modular({Rational(2), Rational(3), Rational(4)});
  Instance inst(std::move(items), std::move(f));
  CapacityDistribution dist(
      inst.total_size(),
      {{4, Rational(4, 9)}, {5, Rational(5, 9)}});
  return Fixture{std::move(inst), std::move(dist)};
}

// sqrt(5) to 50 significant digits; double rounding happens once, here.
inline constexpr double kSqrt5 = 2.2360679774997896964091736687747975994502646971403;

// Three unit-size items with the symmetric-in-b,c table
// f({a})=4, f({b})=f({c})=1+sqrt5, f({a,b})=f({a,c})=3+sqrt5,
// f({b,c})=f({a,b,c})=2+2*sqrt5.
inline Fixture make_unit_sqrt5() {
  std::vector<Item> items = {{0, 1}, {1, 1}, {2, 1}};
  std::vector<double> values(8);
  values[0b000] = 0.0;
  values[0b001] = 4.0;
  values[0b010] = 1.0 + kSqrt5;
  values[0b100] = 1.0 + kSqrt5;
  values[0b011] = 3.0 + kSqrt5;
  values[0b101] = 3.0 + kSqrt5;
  values[0b110] = 2.0 + 2.0 * kSqrt5;
  values[0b111] = 2.0 + 2.0 * kSqrt5;
  auto f = SubmodularFunction::TableReal(3, std::move(values));
  return Fixture{Instance(std::move(items), std::move(f)), std::nullopt};
}

// n items where item i (1-based) has size and weight M^i.
inline Fixture make_geometric(std::int64_t M, int n) {
  if (M < 2) throw PreconditionError("geometric fixture needs M >= 2");
  if (n < 1) throw PreconditionError("geometric fixture needs n >= 1");
  std::vector<Item> items;
  std::vector<Rational> weights;
  BigInt power = 1;
  for (int i = 1; i <= n; ++i) {
    power *= M;
    if (power >= BigInt(std::int64_t{1} << 62)) {
      throw CapabilityError("geometric fixture sizes exceed the int64 range");
    }
    items.push_back({i - 1, power.convert_to<std::int64_t>()});
    weights.emplace_back(power);
  }
  auto f = SubmodularFunction::Modular(std::move(weights));
  return Fixture{Instance(std::move(items), std::move(f)), std::nullopt};
}

// Two items of size T and one of size 1, all of weight 1; capacity is T with
// probability 1. Integer optimum 1, fractional optimum 3 - 1/T.
inline Fixture make_integrality_gap(std::int64_t T) {
  if (T < 2) throw PreconditionError("integrality gap fixture needs T >= 2");
  std::vector<Item> items = {{0, T}, {1, T}, {2, 1}};
  auto f = SubmodularFunction::Modular({Rational(1), Rational(1), Rational(1)});
  Instance inst(std::move(items), std::move(f));
  CapacityDistribution dist(inst.total_size(), {{T, Rational(1)}});
  return Fixture{std::move(inst), std::move(dist)};
}

inline Fixture make_fixture(const std::string& id, std::int64_t M = 4, int n = 4,
                            std::int64_t T = 5) {
  if (id == "kpuc89" || id == "kpuc_eight_ninths") return make_kpuc_eight_ninths();
  if (id == "unit_sqrt5") return make_unit_sqrt5();
  if (id == "geometric") return make_geometric(M, n);
  if (id == "integrality_gap" || id == "integrality-gap") return make_integrality_gap(T);
  throw ParseError("unknown fixture '" + id + "'");
}

inline nlohmann::json instance_to_json(const Instance& inst,
                                       const std::optional<CapacityDistribution>& dist) {
  nlohmann::json items = nlohmann::json::array();
  for (const Item& it : inst.items()) items.push_back({{"size", it.size}});
  nlohmann::json j{{"items", std::move(items)}, {"function", inst.f().to_json()}};
  if (dist) j["distribution"] = dist->to_json();
  return j;
}

inline Fixture instance_from_json(const nlohmann::json& j,
                                  NormalizePolicy policy = NormalizePolicy::kStrict) {
  if (!j.is_object()) throw ParseError("instance: expected object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "items" && it.key() != "function" && it.key() != "distribution") {
      throw ParseError("instance: unknown key '" + it.key() + "'");
    }
  }
  if (!j.contains("items") || !j["items"].is_array()) {
    throw ParseError("instance: missing 'items' array");
  }
  if (!j.contains("function")) throw ParseError("instance: missing 'function'");
  std::vector<Item> items;
  int id = 0;
  for (const auto& e : j["items"]) {
    if (!e.is_object() || !e.contains("size")) {
      throw ParseError("instance.items: each item needs a 'size'");
    }
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (it.key() != "size") throw ParseError("instance.items: unknown key '" + it.key() + "'");
    }
    if (!e["size"].is_number_integer()) {
      throw ParseError("instance.items: size must be an integer");
    }
    const std::int64_t size = e["size"].get<std::int64_t>();
    if (size < 1) throw ParseError("instance.items: size must be >= 1");
    items.push_back({id++, size});
  }
  Instance inst(std::move(items), SubmodularFunction::from_json(j["function"]));
  std::optional<CapacityDistribution> dist;
  if (j.contains("distribution")) {
    dist = CapacityDistribution::from_json(j["distribution"], inst.total_size(), policy);
  }
  return Fixture{std::move(inst), std::move(dist)};
}

inline void save_instance(const Instance& inst,
                          const std::optional<CapacityDistribution>& dist,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << instance_to_json(inst, dist).dump(2) << "\n";
}

inline Fixture load_instance(const std::string& path,
                             NormalizePolicy policy = NormalizePolicy::kStrict) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  return instance_from_json(j, policy);
}

struct GeneratorSpec {
  int n = 4;
  std::int64_t min_size = 1;
  std::int64_t max_size = 6;
  FunctionKind family = FunctionKind::kCoverage;
};

// Reproducible per seed; generated functions satisfy the axioms by
// construction.
inline Instance generate_random(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 1 || spec.min_size < 1 || spec.max_size < spec.min_size) {
    throw PreconditionError("unsatisfiable generator spec");
  }
  Rng rng(mix_seed(seed, 0x5eed));
  std::vector<Item> items;
  for (int i = 0; i < spec.n; ++i) {
    items.push_back({i, rng.uniform_int(spec.min_size, spec.max_size)});
  }
  auto modular_weights = [&] {
    std::vector<Rational> w;
    for (int i = 0; i < spec.n; ++i) w.emplace_back(rng.uniform_int(0, 12));
    return w;
  };
  switch (spec.family) {
    case FunctionKind::kModular:
      return Instance(std::move(items), SubmodularFunction::Modular(modular_weights()));
    case FunctionKind::kConcaveModular: {
      std::vector<double> w;
      for (int i = 0; i < spec.n; ++i) {
        w.push_back(static_cast<double>(rng.uniform_int(0, 12)));
      }
      return Instance(std::move(items),
                      SubmodularFunction::ConcaveOfModular(std::move(w)));
    }
    case FunctionKind::kCoverage:
    case FunctionKind::kTable: {
      const int universe = spec.n + static_cast<int>(rng.uniform_int(1, 4));
      std::vector<Rational> weights;
      for (int e = 0; e < universe; ++e) weights.emplace_back(rng.uniform_int(1, 5));
      std::vector<std::uint64_t> masks;
      for (int i = 0; i < spec.n; ++i) {
        std::uint64_t m = 0;
        for (int e = 0; e < universe; ++e) {
          if (rng.bernoulli(0.45)) m |= 1ULL << e;
        }
        if (m == 0) m = 1ULL << rng.uniform_int(0, universe - 1);
        masks.push_back(m);
      }
      auto cov = SubmodularFunction::Coverage(std::move(weights), std::move(masks));
      if (spec.family == FunctionKind::kCoverage) {
        return Instance(std::move(items), std::move(cov));
      }
      // Tabulate the coverage function: a random exact table that satisfies
      // the axioms by construction.
      std::vector<Rational> table(std::size_t{1} << spec.n);
      for (Mask x = 0; x < table.size(); ++x) table[x] = cov.eval_exact(x);
      return Instance(std::move(items),
                      SubmodularFunction::TableUnchecked(spec.n, std::move(table)));
    }
  }
  throw PreconditionError("unknown function family");
}

}  // namespace subknap

#endif  // SUBKNAP_INSTANCE_HPP
