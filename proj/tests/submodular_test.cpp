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

#include "subknap/submodular.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "subknap/instance.hpp"

namespace subknap {
namespace {

SubmodularFunction modular234() {
  return SubmodularFunction::Modular({Rational(2), Rational(3), Rational(4)});
}

// Unit-weight universe {u,v,w}; item 0 covers {u,v}, item 1 covers {v,w}.
SubmodularFunction coverage_fixture() {
  return SubmodularFunction::Coverage({Rational(1), Rational(1), Rational(1)},
                                      {0b011, 0b110});
}

// Brute-force union weight, the independent oracle for coverage answers.
double coverage_union_oracle(const std::vector<std::uint64_t>& items,
                             const std::vector<double>& weights, Mask x) {
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (contains(x, static_cast<int>(i))) u |= items[i];
  }
  double s = 0;
  for (std::size_t e = 0; e < weights.size(); ++e) {
    if ((u >> e) & 1) s += weights[e];
  }
  return s;
}

TEST(Eval, ModularSum) {
  auto f = modular234();
  EXPECT_EQ(f.eval(0b011), 5.0);
  EXPECT_EQ(f.eval_exact(0b011), Rational(5));
}

TEST(Eval, EmptyIsZero) {
  EXPECT_EQ(modular234().eval(0), 0.0);
  EXPECT_EQ(coverage_fixture().eval(0), 0.0);
}

TEST(Eval, CoverageUnion) {
  auto f = coverage_fixture();
  EXPECT_EQ(f.eval(0b11), 3.0);  // union {u,v,w}
  EXPECT_EQ(f.eval(0b11),
            coverage_union_oracle({0b011, 0b110}, {1, 1, 1}, 0b11));
}

TEST(Eval, OutOfRangeSubsetRejected) {
  EXPECT_THROW(modular234().eval(0b1000), PreconditionError);
}

TEST(Marginal, Modular) {
  EXPECT_EQ(modular234().marginal(0b001, 2), 4.0);
}

TEST(Marginal, CoverageUnionDifference) {
  auto f = coverage_fixture();
  // item0 = {u,v}; adding item1 = {v,w} contributes only w.
  EXPECT_EQ(f.marginal(0b01, 1), 1.0);
}

TEST(Marginal, AtEmptyEqualsSingleton) {
  auto f = coverage_fixture();
  for (int i = 0; i < f.n(); ++i) {
    EXPECT_EQ(f.marginal(0, i), f.eval(with(0, i)));
  }
}

TEST(Marginal, MemberRejected) {
  EXPECT_THROW(modular234().marginal(0b001, 0), PreconditionError);
}

TEST(VerifyStructure, ModularPasses) {
  EXPECT_TRUE(modular234().verify_structure().all_pass());
}

TEST(VerifyStructure, SuperadditiveTableFailsWithWitness) {
  // f({0}) = f({1}) = 1 but f({0,1}) = 3 > 2: strictly superadditive.
  auto f = SubmodularFunction::TableUnchecked(
      2, {Rational(0), Rational(1), Rational(1), Rational(3)});
  const auto report = f.verify_structure();
  EXPECT_FALSE(report.all_pass());
  EXPECT_FALSE(report.submodular);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_EQ(report.witness->set, 0u);
}

TEST(VerifyStructure, UnitSqrt5TablePasses) {
  const auto fx = make_unit_sqrt5();
  EXPECT_TRUE(fx.instance.f().verify_structure().all_pass());
}

TEST(VerifyStructure, CheckedFactoryRejectsBadTable) {
  EXPECT_THROW(SubmodularFunction::Table(
                   2, {Rational(0), Rational(1), Rational(1), Rational(3)}),
               PreconditionError);
}

TEST(VerifyStructure, TooLargeIsCapabilityError) {
  std::vector<Rational> w(17, Rational(1));
  EXPECT_THROW(SubmodularFunction::Modular(w).verify_structure(), CapabilityError);
  EXPECT_TRUE(SubmodularFunction::Modular(w)
                  .verify_structure_sampled(2000, 7)
                  .all_pass());
}

TEST(Multilinear, AllZerosIsZero) {
  std::vector<double> x(3, 0.0);
  EXPECT_EQ(modular234().multilinear_exact(x), 0.0);
}

TEST(Multilinear, IndicatorEqualsEval) {
  auto f = coverage_fixture();
  for (Mask m = 0; m < 4; ++m) {
    std::vector<double> x(2, 0.0);
    for (int i = 0; i < 2; ++i) x[i] = contains(m, i) ? 1.0 : 0.0;
    EXPECT_DOUBLE_EQ(f.multilinear_exact(x), f.eval(m));
  }
}

TEST(Multilinear, ModularLinearity) {
  std::vector<double> x(3, 0.5);
  EXPECT_DOUBLE_EQ(modular234().multilinear_exact(x), 4.5);
}

TEST(MultilinearMc, DegenerateCases) {
  auto f = modular234();
  std::vector<double> zeros(3, 0.0);
  auto est = f.multilinear_mc(zeros, 100, 1);
  EXPECT_EQ(est.mean, 0.0);
  EXPECT_EQ(est.stderr_, 0.0);
  std::vector<double> ind = {1.0, 0.0, 1.0};
  est = f.multilinear_mc(ind, 100, 1);
  EXPECT_EQ(est.mean, 6.0);
  EXPECT_EQ(est.stderr_, 0.0);
}

TEST(MultilinearMc, AgreesWithExactWithinFourSigma) {
  auto f = coverage_fixture();
  std::vector<double> x = {0.5, 0.5};
  const double exact = f.multilinear_exact(x);
  const auto est = f.multilinear_mc(x, 100000, 42);
  EXPECT_NEAR(est.mean, exact, 4.0 * est.stderr_);
}

TEST(MultilinearMc, ReproduciblePerSeedAndChunking) {
  auto f = coverage_fixture();
  std::vector<double> x = {0.3, 0.8};
  const auto a = f.multilinear_mc(x, 5000, 9, 4);
  const auto b = f.multilinear_mc(x, 5000, 9, 4);
  EXPECT_EQ(a.mean, b.mean);
  const auto c = f.multilinear_mc(x, 5000, 10, 4);
  EXPECT_NE(a.mean, c.mean);
}

TEST(Gradient, ModularIsConstant) {
  std::vector<double> x = {0.2, 0.9, 0.4};
  const auto g = modular234().multilinear_gradient(x);
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 3.0);
  EXPECT_DOUBLE_EQ(g[2], 4.0);
}

TEST(Gradient, AtOriginEqualsSingletons) {
  auto f = coverage_fixture();
  std::vector<double> zeros(2, 0.0);
  const auto g = f.multilinear_gradient(zeros);
  for (int i = 0; i < 2; ++i) EXPECT_DOUBLE_EQ(g[i], f.eval(with(0, i)));
}

TEST(Gradient, MatchesCentralFiniteDifferences) {
  auto f = coverage_fixture();
  std::vector<double> x = {0.3, 0.7};
  const auto g = f.multilinear_gradient(x);
  const double h = 1e-5;
  for (int i = 0; i < 2; ++i) {
    auto hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    const double fd = (f.multilinear_exact(hi) - f.multilinear_exact(lo)) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-6);
  }
}

TEST(Gradient, McAgreesWithExact) {
  auto f = coverage_fixture();
  std::vector<double> x = {0.4, 0.6};
  const auto exact = f.multilinear_gradient(x);
  const auto mc = f.multilinear_gradient_mc(x, 200000, 5);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(mc[i], exact[i], 0.01);
}

// Diminishing returns, exhaustively on random instances with n <= 10.
TEST(Properties, DiminishingReturnsExhaustive) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GeneratorSpec spec;
    spec.n = 6;
    spec.family = seed % 2 == 0 ? FunctionKind::kCoverage : FunctionKind::kConcaveModular;
    const auto inst = generate_random(spec, seed);
    const auto& f = inst.f();
    const Mask top = full_mask(f.n());
    for (Mask x = 0; x <= top; ++x) {
      for (Mask y = x;; y = (y + 1) | x) {  // supersets of x
        for (int i = 0; i < f.n(); ++i) {
          if (contains(y, i)) continue;
          EXPECT_GE(f.marginal(x, i) - f.marginal(y, i), -1e-9);
        }
        if (y == top) break;
      }
    }
  }
}

// f(Y) <= f(X) + sum of singleton marginals of Y\X at X, for all X subset Y.
TEST(Properties, MarginalDecompositionBound) {
  GeneratorSpec spec;
  spec.n = 7;
  spec.family = FunctionKind::kCoverage;
  const auto inst = generate_random(spec, 3);
  const auto& f = inst.f();
  const Mask top = full_mask(f.n());
  for (Mask x = 0; x <= top; ++x) {
    for (Mask y = x;; y = (y + 1) | x) {
      double bound = f.eval(x);
      for (int i = 0; i < f.n(); ++i) {
        if (contains(y, i) && !contains(x, i)) bound += f.marginal(x, i);
      }
      EXPECT_GE(bound - f.eval(y), -1e-9);
      if (y == top) break;
    }
  }
}

TEST(Properties, MultilinearComponentwiseNondecreasing) {
  auto f = coverage_fixture();
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x = {rng.next_unit(), rng.next_unit()};
    const int i = static_cast<int>(rng.uniform_int(0, 1));
    auto raised = x;
    raised[i] = std::min(1.0, raised[i] + 0.25);
    EXPECT_GE(f.multilinear_exact(raised) - f.multilinear_exact(x), -1e-12);
  }
}

TEST(Properties, GradientCrossDerivativeNonpositive) {
  auto f = coverage_fixture();
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x = {rng.next_unit(), rng.next_unit()};
    const int i = static_cast<int>(rng.uniform_int(0, 1));
    const int j = 1 - i;
    auto raised = x, lowered = x;
    raised[j] = std::min(1.0, x[j] + 0.2);
    lowered[j] = std::max(0.0, x[j] - 0.2);
    const double gi_raised = f.multilinear_gradient(raised)[i];
    const double gi_lowered = f.multilinear_gradient(lowered)[i];
    EXPECT_LE(gi_raised - gi_lowered, 1e-12);
  }
}

TEST(Json, RoundTripAllKinds) {
  std::vector<SubmodularFunction> fns;
  fns.push_back(modular234());
  fns.push_back(coverage_fixture());
  fns.push_back(SubmodularFunction::ConcaveOfModular({1.0, 2.5, 4.0}));
  fns.push_back(SubmodularFunction::TableUnchecked(
      1, {Rational(0), Rational(1, 3)}));
  for (const auto& f : fns) {
    const auto j = f.to_json();
    const auto g = SubmodularFunction::from_json(j);
    EXPECT_EQ(g.kind(), f.kind());
    EXPECT_EQ(g.n(), f.n());
    for (Mask m = 0; m <= full_mask(f.n()); ++m) {
      EXPECT_DOUBLE_EQ(g.eval(m), f.eval(m));
    }
    EXPECT_EQ(g.to_json(), j);
  }
}

TEST(Json, RationalsAsFractionStrings) {
  auto f = SubmodularFunction::Modular({Rational(4, 9)});
  EXPECT_EQ(f.to_json()["weights"][0], "4/9");
  EXPECT_THROW(SubmodularFunction::from_json({{"kind", "nope"}}), ParseError);
}

TEST(Rationals, ParseAndFormat) {
  EXPECT_EQ(parse_rational("4/9"), Rational(4, 9));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_THROW(parse_rational("x"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_EQ(format_rational(Rational(8, 9)), "8/9");
  EXPECT_EQ(format_rational(Rational(3)), "3");
}

}  // namespace
}  // namespace subknap
