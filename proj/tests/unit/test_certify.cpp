#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "stripbound/blaschke.hpp"
#include "stripbound/certify.hpp"
#include "stripbound/error.hpp"

namespace sb = stripbound;
namespace ct = stripbound::certify;
namespace fz = stripbound::factorization;
using sb::Complex;

namespace {

sb::ZeroSet unit_spaced(int first, int last, double im = 1.0) {
  std::vector<sb::ZeroEntry> raw;
  for (int j = first; j <= last; ++j) raw.push_back({Complex{static_cast<double>(j), im}, 1});
  return sb::make_zero_set(raw);
}

const sb::SeparationParams kSep{1.0, 1.0, 0.0};

}  // namespace

TEST(NormalizeGrowth, ConstantBecomesOne) {
  const auto n = ct::normalize_growth(sb::FunctionModel::constant(2.0), {2.0, 0, 0.0});
  for (const auto& z : ct::default_envelope_grid()) EXPECT_NEAR(n.model.log_modulus(z), 0.0, 1e-15);
  EXPECT_TRUE(n.violations.empty());
}

TEST(NormalizeGrowth, UnimodularOnRealAxis) {
  const auto f = sb::FunctionModel::rational(1.0, {Complex{0, 1}, Complex{0, -1}}, {}) * sb::FunctionModel::exp_linear(1.0);
  const auto n = ct::normalize_growth(f, {1.0, 2, 0.0});
  EXPECT_TRUE(n.violations.empty());
  for (double x = -50; x <= 50; x += 0.7) EXPECT_NEAR(n.model.log_modulus({x, 0}), 0.0, 1e-12);
}

TEST(NormalizeGrowth, PreservesStripZeros) {
  const auto f = sb::FunctionModel::rational(1.0, {Complex{2, 0.5}, Complex{-1, 3}}, {Complex{0, -1}});
  const auto n = ct::normalize_growth(f, {1.0, 1, 0.0});
  ASSERT_EQ(n.model.strip_zeros().size(), f.strip_zeros().size());
  EXPECT_EQ(n.model.strip_zeros()[0].position, f.strip_zeros()[0].position);
  EXPECT_EQ(n.model.log_modulus({2, 0.5}), -INFINITY);
  oracle::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const Complex z{rng.uniform(-10, 10), rng.uniform(0.01, 0.99)};
    EXPECT_EQ(std::isfinite(n.model.log_modulus(z)), std::isfinite(f.log_modulus(z)));
  }
}

TEST(NormalizeGrowth, ViolationsAreDiagnosticsOnly) {
  const auto n = ct::normalize_growth(sb::FunctionModel::exp_linear(-1.0), {1.0, 0, 0.0});
  EXPECT_FALSE(n.violations.empty());
  for (const auto& v : n.violations) EXPECT_GT(v.modulus, 1.0 + ct::kEnvelopeSlack);
}

TEST(RatioProfile, ConstantIsZero) {
  const auto p = ct::strip_ratio_profile(sb::FunctionModel::constant(1.0), {1, 2, 4, 8}, 2.0);
  for (const auto& s : p.samples) EXPECT_EQ(s.ratio, 0.0);
  EXPECT_EQ(p.tail_sup.front(), 0.0);
}

TEST(RatioProfile, ExponentialSlope) {
  const std::vector<double> xs{1, 10, 100, 1000};
  const auto p = ct::strip_ratio_profile(sb::FunctionModel::exp_linear(1.0), xs, 1.0);
  for (const auto& s : p.samples) EXPECT_NEAR(s.ratio, -0.5 / s.x, 1e-15);
  EXPECT_NEAR(p.tail_sup[0], 0.5, 1e-15);
  EXPECT_NEAR(p.tail_sup[3], 0.0005, 1e-15);
}

TEST(RatioProfile, NormalizedNodesShowNegativeLiminf) {
  const auto rho = sb::RateFunction::reciprocal_log();
  const auto cfg = sb::blaschke::construct_prop23(rho, 5);
  std::vector<double> xs;
  for (const auto& n : cfg.nodes) xs.push_back(n.x);
  const auto p = ct::strip_ratio_profile(sb::blaschke::product_model(cfg), xs, 2.0);
  for (const auto& s : p.samples) EXPECT_LE(s.ratio, -rho(s.x) * (1.0 - 0.1));
}

TEST(RatioProfile, Errors) {
  const auto one = sb::FunctionModel::constant(1.0);
  EXPECT_THROW(ct::strip_ratio_profile(one, {0.5, 2}, 2.0), sb::InvalidInput);
  EXPECT_THROW(ct::strip_ratio_profile(one, {2, 1}, 2.0), sb::InvalidInput);
  const auto f = sb::FunctionModel::rational(1.0, {Complex{3, 0.5}}, {});
  try {
    ct::strip_ratio_profile(f, {1, 3}, 2.0);
    FAIL() << "expected EvaluationError";
  } catch (const sb::EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("x = 3"), std::string::npos);
  }
}

TEST(Dyadic, EmptySet) {
  const auto r = ct::dyadic_estimate(sb::ZeroSet{}, 10.0, kSep);
  EXPECT_EQ(r.total, 0.0);
  EXPECT_EQ(r.far_sum, 0.0);
  EXPECT_EQ(r.near_sum, 0.0);
  EXPECT_TRUE(r.annuli.empty());
}

TEST(Dyadic, MatchesBruteForce) {
  const auto zs = unit_spaced(1, 1000);
  const auto r = ct::dyadic_estimate(zs, 500.0, kSep);
  long double direct = 0.0L;
  for (int j = 1; j <= 1000; ++j) direct += 1.0L / ((500.0L - j) * (500.0L - j) + 1.0L);
  EXPECT_NEAR(r.total, static_cast<double>(direct), 1e-12 * static_cast<double>(direct));
  EXPECT_NEAR(r.total, r.far_sum + r.near_sum, 1e-12 * r.total);
  EXPECT_DOUBLE_EQ(r.m, 2.0);
}

TEST(Dyadic, LinearScale) {
  const auto zs = unit_spaced(1, 1000);
  for (double x : {10.0, 100.0, 1000.0}) {
    const auto r = ct::dyadic_estimate(zs, x, kSep);
    EXPECT_LE(r.total / x, sb::kPi + 1.0);
  }
}

TEST(Dyadic, PartitionIsExhaustive) {
  oracle::Rng rng(32);
  for (int draw = 0; draw < 20; ++draw) {
    std::vector<sb::ZeroEntry> raw;
    double re = rng.uniform(-100, 0);
    for (int j = 0; j < 300; ++j) {
      re += rng.uniform(1.0, 3.0);
      raw.push_back({Complex{re, rng.uniform(1.0, 10.0)}, static_cast<double>(rng.integer(1, 3))});
    }
    const auto zs = sb::make_zero_set(raw);
    const double x = rng.uniform(1, 500);
    const auto r = ct::dyadic_estimate(zs, x, kSep);
    std::size_t cards = 0;
    for (const auto& a : r.annuli) {
      cards += a.card;
      EXPECT_GE(a.n, 1);
    }
    EXPECT_EQ(cards, r.near_count);
    EXPECT_EQ(r.near_count + r.far_count, zs.size());
    const double direct = static_cast<double>(oracle::dyadic_sum(zs, x));
    EXPECT_NEAR(r.total, direct, 1e-12 * direct);
  }
}

TEST(Dyadic, AdditiveAndMonotone) {
  const auto a = unit_spaced(1, 200);
  const auto b = unit_spaced(300, 600, 2.0);
  const double x = 250.0;
  const double ta = ct::dyadic_estimate(a, x, kSep).total;
  const double tb = ct::dyadic_estimate(b, x, kSep).total;
  EXPECT_NEAR(ct::dyadic_estimate(a.merged_with(b), x, kSep).total, ta + tb, 1e-12 * (ta + tb));
  const auto heavier = a.merged_with(sb::make_zero_set({{Complex{7, 1}, 1}}));
  EXPECT_GT(ct::dyadic_estimate(heavier, x, kSep).total, ta);
}

TEST(Dyadic, Hypotheses) {
  const auto low = sb::make_zero_set({{Complex{5, 0.5}, 1}});
  try {
    ct::dyadic_estimate(low, 10.0, kSep);
    FAIL() << "expected HypothesisViolation";
  } catch (const sb::HypothesisViolation& e) {
    EXPECT_NE(std::string(e.what()).find("5+0.5i"), std::string::npos);
  }
  const auto close = sb::make_zero_set({{Complex{5, 1}, 1}, {Complex{5.01, 1}, 1}});
  EXPECT_THROW(ct::dyadic_estimate(close, 10.0, kSep), sb::HypothesisViolation);
  EXPECT_THROW(ct::dyadic_estimate(sb::ZeroSet{}, 0.5, kSep), sb::InvalidInput);
}

TEST(Dyadic, CardinalityConstantBounded) {
  const auto zs = unit_spaced(1, 10000);
  double worst = 0.0;
  for (double x : {10.0, 100.0, 1000.0, 5000.0}) {
    worst = std::max(worst, ct::dyadic_estimate(zs, x, kSep).constants.c1_card);
  }
  EXPECT_LT(worst, 2.0);
}

TEST(BlaschkeComparison, LogModulusAboveScaledSum) {
  oracle::Rng rng(33);
  for (int i = 0; i < 2000; ++i) {
    const Complex l{rng.uniform(-100, 100), rng.uniform(1.0, 50.0)};
    const double x = rng.uniform(-100, 100);
    const double exact = std::log(static_cast<double>(oracle::mobius_modulus(l, {x, 0.5})));
    const double dx = x - l.real();
    const double term = l.imag() / (dx * dx + l.imag() * l.imag());
    EXPECT_GE(exact, -ct::kBlaschkeComparison * term - 1e-15);
  }
}

TEST(MidlineLowerBound, TrivialParts) {
  const fz::NevanlinnaParts parts{0.0, {}, fz::BoundaryModulus::zero()};
  for (const auto& b : ct::certify_prop26(parts, {1, 10, 100}, kSep, {})) {
    EXPECT_EQ(b.bound, 0.0);
    EXPECT_TRUE(b.certified);
  }
}

TEST(MidlineLowerBound, ExponentialOnly) {
  const fz::NevanlinnaParts parts{1.0, {}, fz::BoundaryModulus::zero()};
  for (const auto& b : ct::certify_prop26(parts, {1, 10, 100}, kSep, {})) EXPECT_EQ(b.bound, -0.5);
}

TEST(MidlineLowerBound, BoundIsBelowTrueValue) {
  // f = e^{iz} B F with F = (z + 2i)/(z + i) (outer, bounded data) and a
  // finite Blaschke product: every x has an exact log-modulus to compare.
  const auto zs = unit_spaced(3, 60, 1.5);
  const auto outer = sb::FunctionModel::rational(1.0, {Complex{0, -2}}, {Complex{0, -1}});
  const fz::NevanlinnaParts parts{1.0, zs, fz::BoundaryModulus::of_model(outer, fz::DecayClass::power(1.5, -2.0, 1.0))};
  const std::vector<double> xs{1, 5, 20, 40, 100};
  for (const auto& b : ct::certify_prop26(parts, xs, kSep, {})) {
    ASSERT_TRUE(b.certified);
    ASSERT_TRUE(b.outer_tail.has_value());
    double log_b = 0.0;
    for (const auto& e : zs.entries()) {
      log_b += std::log(static_cast<double>(oracle::mobius_modulus(e.position, {b.x, 0.5})));
    }
    const double truth = -0.5 + log_b + std::log(std::abs(Complex(b.x, 2.5) / Complex(b.x, 1.5)));
    EXPECT_LE(b.bound, truth);
    EXPECT_NEAR(b.blaschke_exact, log_b, 1e-10);
  }
}

TEST(MidlineLowerBound, LinearBoundaryDataStaysLinear) {
  const auto zs = unit_spaced(1, 5000);
  const fz::BoundaryModulus bm{"-|t|/10", [](double t) { return -std::abs(t) / 10.0; }, fz::DecayClass::linear(0.1), {0.0}};
  const fz::NevanlinnaParts parts{0.0, zs, bm};
  sb::QuadratureSpec q;
  q.tail_radius = 1e4;
  const auto bounds = ct::certify_prop26(parts, {10, 100, 1000}, kSep, q);
  std::vector<double> ratios;
  for (const auto& b : bounds) {
    EXPECT_FALSE(b.certified);
    EXPECT_FALSE(b.outer_tail.has_value());
    EXPECT_NE(std::find(b.flags.begin(), b.flags.end(), "boundary_tail_not_integrable"), b.flags.end());
    ratios.push_back(-b.bound / b.x);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LT(*hi, 20.0);
}

TEST(MidlineLowerBound, RejectsStripZero) {
  const auto zs = sb::make_zero_set({{Complex{4, 0.5}, 1}});
  const fz::NevanlinnaParts parts{0.0, zs, fz::BoundaryModulus::zero()};
  EXPECT_THROW(ct::certify_prop26(parts, {10}, kSep, {}), sb::HypothesisViolation);
}

TEST(GeometricGrid, Values) {
  const auto g = ct::geometric_grid(10, 10, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[2], 1000.0);
  EXPECT_THROW(ct::geometric_grid(10, 1, 3), sb::InvalidInput);
}
