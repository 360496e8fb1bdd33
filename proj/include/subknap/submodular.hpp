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

#ifndef SUBKNAP_SUBMODULAR_HPP
#define SUBKNAP_SUBMODULAR_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subknap/errors.hpp"
#include "subknap/rational.hpp"
#include "subknap/rng.hpp"

namespace subknap {

// Subsets of the ground set {0,...,n-1} are bitmasks; canonical order is
// ascending index, ties downstream always break toward the smaller index.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }
inline bool contains(Mask m, int i) { return (m >> i) & 1u; }
inline Mask with(Mask m, int i) { return m | (Mask{1} << i); }
inline Mask without(Mask m, int i) { return m & ~(Mask{1} << i); }
inline Mask full_mask(int n) {
  return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1;
}

struct GroundSet {
  int n = 0;
};

enum class FunctionKind { kModular, kCoverage, kConcaveModular, kTable };

// Scalar maps for the concave-of-modular family. Every map is nondecreasing
// and concave with phi(0)=0, which makes phi(sum of weights) monotone
// submodular.
struct ConcaveMap {
  enum Kind { kSqrt, kCap } kind = kSqrt;
  double cap = 1.0;  // only for kCap: phi(v) = min(v, cap)

  double operator()(double v) const {
    return kind == kSqrt ? std::sqrt(v) : std::min(v, cap);
  }
  std::string name() const { return kind == kSqrt ? "sqrt" : "cap"; }
};

struct AxiomWitness {
  Mask set = 0;
  int i = -1;
  int j = -1;
  std::string detail;
};

struct VerificationReport {
  bool nonnegative = true;
  bool zero_at_empty = true;
  bool monotone = true;
  bool submodular = true;
  bool exhaustive = true;
  std::optional<AxiomWitness> witness;

  bool all_pass() const {
    return nonnegative && zero_at_empty && monotone && submodular;
  }
  std::string summary() const {
    auto mark = [](bool b) { return b ? std::string("pass") : std::string("FAIL"); };
    std::string s = "nonnegative=" + mark(nonnegative) +
                    " zero_at_empty=" + mark(zero_at_empty) +
                    " monotone=" + mark(monotone) +
                    " submodular=" + mark(submodular) +
                    (exhaustive ? " (exhaustive)" : " (sampled)");
    if (witness) s += "; witness: " + witness->detail;
    return s;
  }
};

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
};

// A monotone nonnegative submodular set function with f(empty)=0, in one of
// four families. Modular/Coverage and rational tables evaluate exactly in
// rational arithmetic; concave-of-modular (and tables built from irrational
// constants) are double-only.
class SubmodularFunction {
 public:
  static SubmodularFunction Modular(std::vector<Rational> weights) {
    SubmodularFunction f;
    f.kind_ = FunctionKind::kModular;
    f.n_ = static_cast<int>(weights.size());
    for (const auto& w : weights) {
      if (w < 0) throw PreconditionError("modular weights must be nonnegative");
    }
    f.values_q_ = std::move(weights);
    f.cache_doubles();
    return f;
  }

  // item_elements[i] is a bitmask over a universe of at most 64 weighted
  // elements; f(X) is the total weight covered by the union.
  static SubmodularFunction Coverage(std::vector<Rational> element_weights,
                                     std::vector<std::uint64_t> item_elements) {
    SubmodularFunction f;
    f.kind_ = FunctionKind::kCoverage;
    f.n_ = static_cast<int>(item_elements.size());
    f.universe_ = static_cast<int>(element_weights.size());
    if (f.universe_ > 64) throw PreconditionError("coverage universe exceeds 64 elements");
    for (const auto& w : element_weights) {
      if (w < 0) throw PreconditionError("element weights must be nonnegative");
    }
    const std::uint64_t valid =
        f.universe_ == 64 ? ~0ULL : ((1ULL << f.universe_) - 1);
    for (auto m : item_elements) {
      if ((m & ~valid) != 0) throw PreconditionError("item covers unknown element");
    }
    f.values_q_ = std::move(element_weights);
    f.elements_ = std::move(item_elements);
    f.cache_doubles();
    return f;
  }

  static SubmodularFunction ConcaveOfModular(std::vector<double> weights,
                                             ConcaveMap map = {}) {
    SubmodularFunction f;
    f.kind_ = FunctionKind::kConcaveModular;
    f.n_ = static_cast<int>(weights.size());
    for (double w : weights) {
      if (!(w >= 0)) throw PreconditionError("modular weights must be nonnegative");
    }
    f.values_d_ = std::move(weights);
    f.map_ = map;
    f.exact_ = false;
    return f;
  }

  // Exact table over 2^n subsets, n <= 16, verified exhaustively.
  static SubmodularFunction Table(int n, std::vector<Rational> values) {
    SubmodularFunction f = TableUnchecked(n, std::move(values));
    VerificationReport report = f.verify_structure();
    if (!report.all_pass()) {
      throw PreconditionError("explicit table fails structural verification: " +
                              report.summary());
    }
    return f;
  }

  // Double-valued table (for fixtures carrying irrational constants),
  // verified with tolerance.
  static SubmodularFunction TableReal(int n, std::vector<double> values) {
    SubmodularFunction f = TableRealUnchecked(n, std::move(values));
    VerificationReport report = f.verify_structure();
    if (!report.all_pass()) {
      throw PreconditionError("explicit table fails structural verification: " +
                              report.summary());
    }
    return f;
  }

  // Unverified constructors, used by instance deserialization so that the
  // verify command can report axiom failures instead of refusing to load.
  static SubmodularFunction TableUnchecked(int n, std::vector<Rational> values) {
    SubmodularFunction f;
    f.init_table(n, values.size());
    f.values_q_ = std::move(values);
    f.cache_doubles();
    return f;
  }
  static SubmodularFunction TableRealUnchecked(int n, std::vector<double> values) {
    SubmodularFunction f;
    f.init_table(n, values.size());
    f.values_d_ = std::move(values);
    f.exact_ = false;
    return f;
  }

  FunctionKind kind() const { return kind_; }
  int n() const { return n_; }
  bool has_exact() const { return exact_; }

  double eval(Mask x) const {
    check_subset(x);
    switch (kind_) {
      case FunctionKind::kModular: {
        double s = 0;
        for (int i = 0; i < n_; ++i)
          if (contains(x, i)) s += values_d_[i];
        return s;
      }
      case FunctionKind::kCoverage: {
        std::uint64_t covered = 0;
        for (int i = 0; i < n_; ++i)
          if (contains(x, i)) covered |= elements_[i];
        double s = 0;
        while (covered) {
          const int e = std::countr_zero(covered);
          s += values_d_[e];
          covered &= covered - 1;
        }
        return s;
      }
      case FunctionKind::kConcaveModular: {
        double s = 0;
        for (int i = 0; i < n_; ++i)
          if (contains(x, i)) s += values_d_[i];
        return map_(s);
      }
      case FunctionKind::kTable:
        return values_d_[x];
    }
    return 0;
  }

  Rational eval_exact(Mask x) const {
    check_subset(x);
    if (!exact_) {
      throw CapabilityError("function family has no exact rational evaluation");
    }
    switch (kind_) {
      case FunctionKind::kModular: {
        Rational s = 0;
        for (int i = 0; i < n_; ++i)
          if (contains(x, i)) s += values_q_[i];
        return s;
      }
      case FunctionKind::kCoverage: {
        std::uint64_t covered = 0;
        for (int i = 0; i < n_; ++i)
          if (contains(x, i)) covered |= elements_[i];
        Rational s = 0;
        while (covered) {
          const int e = std::countr_zero(covered);
          s += values_q_[e];
          covered &= covered - 1;
        }
        return s;
      }
      case FunctionKind::kTable:
        return values_q_[x];
      default:
        throw CapabilityError("function family has no exact rational evaluation");
    }
  }

  double marginal(Mask x, int i) const {
    check_not_in(x, i);
    return eval(with(x, i)) - eval(x);
  }

  Rational marginal_exact(Mask x, int i) const {
    check_not_in(x, i);
    return eval_exact(with(x, i)) - eval_exact(x);
  }

  // Exhaustive axiom check over all (X, i, j); n <= 16.
  VerificationReport verify_structure() const {
    if (n_ > 16) {
      throw CapabilityError(
          "exhaustive structural verification needs n <= 16; use "
          "verify_structure_sampled for larger ground sets");
    }
    if (exact_) return verify_exact();
    return verify_real();
  }

  // Non-exhaustive check on random (X, i, j) triples; report is flagged.
  VerificationReport verify_structure_sampled(int samples, std::uint64_t seed) const {
    VerificationReport report;
    report.exhaustive = false;
    const double tol = real_tolerance();
    Rng rng(seed);
    if (std::abs(eval(0)) > tol) {
      report.zero_at_empty = false;
      report.witness = AxiomWitness{0, -1, -1, "f(empty) != 0"};
      return report;
    }
    for (int s = 0; s < samples; ++s) {
      Mask x = static_cast<Mask>(rng.next_u64()) & full_mask(n_);
      const int i = static_cast<int>(rng.uniform_int(0, n_ - 1));
      const int j = static_cast<int>(rng.uniform_int(0, n_ - 1));
      if (eval(x) < -tol) {
        report.nonnegative = false;
        report.witness = AxiomWitness{x, -1, -1, "f(X) < 0"};
        return report;
      }
      if (!contains(x, i) && marginal(x, i) < -tol) {
        report.monotone = false;
        report.witness = AxiomWitness{x, i, -1, "negative marginal"};
        return report;
      }
      if (i != j && !contains(x, i) && !contains(x, j)) {
        if (eval(with(x, i)) + eval(with(x, j)) - eval(with(with(x, i), j)) - eval(x) < -tol) {
          report.submodular = false;
          report.witness = AxiomWitness{x, i, j, "marginal gain increases"};
          return report;
        }
      }
    }
    return report;
  }

  // Exact multilinear extension F(x) = sum_X f(X) prod x_i prod (1-x_i'),
  // by full subset enumeration; n <= 16.
  double multilinear_exact(std::span<const double> x) const {
    check_fractional(x);
    if (n_ > 16) {
      throw CapabilityError("multilinear_exact needs n <= 16; use multilinear_mc");
    }
    const Mask top = full_mask(n_);
    double total = 0;
    for (Mask m = 0;; ++m) {
      double p = 1;
      for (int i = 0; i < n_; ++i) p *= contains(m, i) ? x[i] : 1 - x[i];
      if (p > 0) total += p * eval(m);
      if (m == top) break;
    }
    return total;
  }

  // Unbiased Monte-Carlo estimate of F(x). Work is split into `tasks` chunks
  // with derived seeds; the estimate depends only on (seed, samples, tasks).
  McEstimate multilinear_mc(std::span<const double> x, std::int64_t samples,
                            std::uint64_t seed, int tasks = 1) const {
    check_fractional(x);
    if (samples < 1) throw PreconditionError("multilinear_mc needs samples >= 1");
    if (tasks < 1) tasks = 1;
    double sum = 0, sum_sq = 0;
    std::int64_t done = 0;
    for (int task = 0; task < tasks; ++task) {
      const std::int64_t begin = samples * task / tasks;
      const std::int64_t end = samples * (task + 1) / tasks;
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(task)));
      for (std::int64_t s = begin; s < end; ++s) {
        const double v = eval(sample_subset(x, rng));
        sum += v;
        sum_sq += v * v;
        ++done;
      }
    }
    McEstimate est;
    est.samples = done;
    est.mean = sum / static_cast<double>(done);
    if (done > 1) {
      const double var =
          std::max(0.0, (sum_sq - sum * sum / static_cast<double>(done)) /
                            static_cast<double>(done - 1));
      est.stderr_ = std::sqrt(var / static_cast<double>(done));
    }
    return est;
  }

  // dF/dx_i = F(x with x_i=1) - F(x with x_i=0), exact mode.
  std::vector<double> multilinear_gradient(std::span<const double> x) const {
    check_fractional(x);
    if (n_ > 16) {
      throw CapabilityError(
          "exact multilinear gradient needs n <= 16; use multilinear_gradient_mc");
    }
    std::vector<double> grad(n_);
    std::vector<double> probe(x.begin(), x.end());
    for (int i = 0; i < n_; ++i) {
      const double keep = probe[i];
      probe[i] = 1.0;
      const double hi = multilinear_exact(probe);
      probe[i] = 0.0;
      const double lo = multilinear_exact(probe);
      probe[i] = keep;
      grad[i] = hi - lo;
    }
    return grad;
  }

  // Sampled gradient: per sample R over the other coordinates, averages
  // f(R u {i}) - f(R \ {i}) for every i.
  std::vector<double> multilinear_gradient_mc(std::span<const double> x,
                                              std::int64_t samples,
                                              std::uint64_t seed) const {
    check_fractional(x);
    if (samples < 1) throw PreconditionError("gradient sampling needs samples >= 1");
    std::vector<double> grad(n_, 0.0);
    Rng rng(seed);
    for (std::int64_t s = 0; s < samples; ++s) {
      const Mask r = sample_subset(x, rng);
      for (int i = 0; i < n_; ++i) {
        const Mask base = without(r, i);
        grad[i] += eval(with(base, i)) - eval(base);
      }
    }
    for (double& g : grad) g /= static_cast<double>(samples);
    return grad;
  }

  // Draws R_x: item i included independently with probability x_i.
  Mask sample_subset(std::span<const double> x, Rng& rng) const {
    Mask r = 0;
    for (int i = 0; i < n_; ++i) {
      if (rng.bernoulli(x[i])) r = with(r, i);
    }
    return r;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (kind_) {
      case FunctionKind::kModular: {
        j["kind"] = "modular";
        nlohmann::json w = nlohmann::json::array();
        for (const auto& q : values_q_) w.push_back(format_rational(q));
        j["weights"] = std::move(w);
        break;
      }
      case FunctionKind::kCoverage: {
        j["kind"] = "coverage";
        nlohmann::json w = nlohmann::json::array();
        for (const auto& q : values_q_) w.push_back(format_rational(q));
        j["element_weights"] = std::move(w);
        nlohmann::json items = nlohmann::json::array();
        for (int i = 0; i < n_; ++i) {
          nlohmann::json elems = nlohmann::json::array();
          for (int e = 0; e < universe_; ++e)
            if ((elements_[i] >> e) & 1ULL) elems.push_back(e);
          items.push_back(std::move(elems));
        }
        j["item_elements"] = std::move(items);
        break;
      }
      case FunctionKind::kConcaveModular: {
        j["kind"] = "concave_modular";
        j["weights"] = values_d_;
        j["map"] = map_.name();
        if (map_.kind == ConcaveMap::kCap) j["cap"] = map_.cap;
        break;
      }
      case FunctionKind::kTable: {
        j["kind"] = "table";
        j["n"] = n_;
        if (exact_) {
          nlohmann::json v = nlohmann::json::array();
          for (const auto& q : values_q_) v.push_back(format_rational(q));
          j["values"] = std::move(v);
        } else {
          j["values"] = values_d_;
        }
        break;
      }
    }
    return j;
  }

  static SubmodularFunction from_json(const nlohmann::json& j);

 private:
  void init_table(int n, std::size_t count) {
    kind_ = FunctionKind::kTable;
    if (n < 1 || n > 16) throw PreconditionError("explicit table needs 1 <= n <= 16");
    n_ = n;
    if (count != (std::size_t{1} << n)) {
      throw ParseError("explicit table needs exactly 2^n values");
    }
  }

  void cache_doubles() {
    values_d_.clear();
    values_d_.reserve(values_q_.size());
    for (const auto& q : values_q_) values_d_.push_back(to_double(q));
  }

  void check_subset(Mask x) const {
    if ((x & ~full_mask(n_)) != 0) {
      throw PreconditionError("subset references an item outside the ground set");
    }
  }
  void check_not_in(Mask x, int i) const {
    check_subset(x);
    if (i < 0 || i >= n_) throw PreconditionError("item index out of range");
    if (contains(x, i)) throw PreconditionError("marginal requires i not in X");
  }
  void check_fractional(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) {
      throw PreconditionError("fractional vector has wrong dimension");
    }
    for (double v : x) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw PreconditionError("fractional vector component outside [0,1]");
      }
    }
  }

  double real_tolerance() const {
    double scale = 1.0;
    for (double v : values_d_) scale = std::max(scale, std::abs(v));
    return 1e-9 * scale;
  }

  VerificationReport verify_exact() const {
    VerificationReport report;
    const Mask top = full_mask(n_);
    if (eval_exact(0) != 0) {
      report.zero_at_empty = false;
      report.witness = AxiomWitness{0, -1, -1, "f(empty) != 0"};
      return report;
    }
    for (Mask x = 0;; ++x) {
      if (eval_exact(x) < 0) {
        report.nonnegative = false;
        report.witness = AxiomWitness{x, -1, -1, "f(X) < 0 at X=" + std::to_string(x)};
        return report;
      }
      for (int i = 0; i < n_; ++i) {
        if (contains(x, i)) continue;
        const Rational mi = eval_exact(with(x, i)) - eval_exact(x);
        if (mi < 0) {
          report.monotone = false;
          report.witness = AxiomWitness{
              x, i, -1, "f(X+" + std::to_string(i) + ") < f(X) at X=" + std::to_string(x)};
          return report;
        }
        for (int j = i + 1; j < n_; ++j) {
          if (contains(x, j)) continue;
          const Rational gain =
              eval_exact(with(x, i)) + eval_exact(with(x, j)) -
              eval_exact(with(with(x, i), j)) - eval_exact(x);
          if (gain < 0) {
            report.submodular = false;
            report.witness = AxiomWitness{
                x, i, j,
                "f(X+i)+f(X+j) < f(X+i+j)+f(X) at X=" + std::to_string(x) +
                    " i=" + std::to_string(i) + " j=" + std::to_string(j)};
            return report;
          }
        }
      }
      if (x == top) break;
    }
    return report;
  }

  VerificationReport verify_real() const {
    VerificationReport report;
    const double tol = real_tolerance();
    const Mask top = full_mask(n_);
    if (std::abs(eval(0)) > tol) {
      report.zero_at_empty = false;
      report.witness = AxiomWitness{0, -1, -1, "f(empty) != 0"};
      return report;
    }
    for (Mask x = 0;; ++x) {
      if (eval(x) < -tol) {
        report.nonnegative = false;
        report.witness = AxiomWitness{x, -1, -1, "f(X) < 0 at X=" + std::to_string(x)};
        return report;
      }
      for (int i = 0; i < n_; ++i) {
        if (contains(x, i)) continue;
        if (marginal(x, i) < -tol) {
          report.monotone = false;
          report.witness = AxiomWitness{x, i, -1, "negative marginal at X=" + std::to_string(x)};
          return report;
        }
        for (int j = i + 1; j < n_; ++j) {
          if (contains(x, j)) continue;
          const double gain = eval(with(x, i)) + eval(with(x, j)) -
                              eval(with(with(x, i), j)) - eval(x);
          if (gain < -tol) {
            report.submodular = false;
            report.witness = AxiomWitness{
                x, i, j, "marginal gain increases at X=" + std::to_string(x)};
            return report;
          }
        }
      }
      if (x == top) break;
    }
    return report;
  }

  FunctionKind kind_ = FunctionKind::kModular;
  int n_ = 0;
  int universe_ = 0;
  bool exact_ = true;
  std::vector<Rational> values_q_;
  std::vector<double> values_d_;
  std::vector<std::uint64_t> elements_;
  ConcaveMap map_;
};

inline SubmodularFunction SubmodularFunction::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError("function: missing 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed)
        if (it.key() == a) ok = true;
      if (!ok) throw ParseError("function: unknown key '" + it.key() + "'");
    }
  };
  auto parse_rationals = [](const nlohmann::json& arr, const char* where) {
    if (!arr.is_array()) throw ParseError(std::string(where) + ": expected array");
    std::vector<Rational> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
      if (v.is_string()) {
        out.push_back(parse_rational(v.get<std::string>()));
      } else if (v.is_number_integer()) {
        out.push_back(Rational(v.get<std::int64_t>()));
      } else {
        throw ParseError(std::string(where) +
                         ": rationals must be \"p/q\" strings or integers");
      }
    }
    return out;
  };

  if (kind == "modular") {
    reject_unknown({"kind", "weights"});
    if (!j.contains("weights")) throw ParseError("modular: missing 'weights'");
    return Modular(parse_rationals(j["weights"], "modular.weights"));
  }
  if (kind == "coverage") {
    reject_unknown({"kind", "element_weights", "item_elements"});
    if (!j.contains("element_weights") || !j.contains("item_elements")) {
      throw ParseError("coverage: missing 'element_weights' or 'item_elements'");
    }
    auto weights = parse_rationals(j["element_weights"], "coverage.element_weights");
    const auto& items = j["item_elements"];
    if (!items.is_array()) throw ParseError("coverage.item_elements: expected array");
    std::vector<std::uint64_t> masks;
    for (const auto& e : items) {
      if (!e.is_array()) throw ParseError("coverage.item_elements: expected arrays of indices");
      std::uint64_t m = 0;
      for (const auto& idx : e) {
        if (!idx.is_number_integer()) throw ParseError("coverage element index must be integer");
        const auto k = idx.get<std::int64_t>();
        if (k < 0 || k >= static_cast<std::int64_t>(weights.size())) {
          throw ParseError("coverage element index out of range");
        }
        m |= 1ULL << k;
      }
      masks.push_back(m);
    }
    return Coverage(std::move(weights), std::move(masks));
  }
  if (kind == "concave_modular") {
    reject_unknown({"kind", "weights", "map", "cap"});
    if (!j.contains("weights")) throw ParseError("concave_modular: missing 'weights'");
    std::vector<double> weights;
    for (const auto& v : j["weights"]) {
      if (!v.is_number()) throw ParseError("concave_modular weights must be numbers");
      weights.push_back(v.get<double>());
    }
    ConcaveMap map;
    if (j.contains("map")) {
      const std::string name = j["map"].get<std::string>();
      if (name == "sqrt") {
        map.kind = ConcaveMap::kSqrt;
      } else if (name == "cap") {
        map.kind = ConcaveMap::kCap;
        if (!j.contains("cap")) throw ParseError("concave_modular: 'cap' map needs 'cap'");
        map.cap = j["cap"].get<double>();
      } else {
        throw ParseError("concave_modular: unknown map '" + name + "'");
      }
    }
    return ConcaveOfModular(std::move(weights), map);
  }
  if (kind == "table") {
    reject_unknown({"kind", "n", "values"});
    if (!j.contains("n") || !j.contains("values")) {
      throw ParseError("table: missing 'n' or 'values'");
    }
    const int n = j["n"].get<int>();
    const auto& arr = j["values"];
    if (!arr.is_array()) throw ParseError("table.values: expected array");
    bool exact = true;
    for (const auto& v : arr) {
      if (v.is_number_float()) exact = false;
    }
    if (exact) {
      return TableUnchecked(n, parse_rationals(arr, "table.values"));
    }
    std::vector<double> values;
    for (const auto& v : arr) {
      if (v.is_string()) {
        values.push_back(to_double(parse_rational(v.get<std::string>())));
      } else if (v.is_number()) {
        values.push_back(v.get<double>());
      } else {
        throw ParseError("table.values: expected numbers or rational strings");
      }
    }
    return TableRealUnchecked(n, std::move(values));
  }
  throw ParseError("function: unknown kind '" + kind + "'");
}

}  // namespace subknap

#endif  // SUBKNAP_SUBMODULAR_HPP
