#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pwlab/fixtures.hpp"
#include "pwlab/interpolation.hpp"

using namespace pwlab;

namespace {

constexpr double kPi = std::numbers::pi;

const HBModel& unit() {
  static const HBModel E = fixtures::unit_multiplier(1000);
  return E;
}

double phase_mod_pi(const HBModel& E, double x) {
  double a = std::fmod(phase(E, x), kPi);
  return a < 0 ? a + kPi : a;
}

const MajorantRepresentation& unit_rep() {
  static const MajorantRepresentation rep = [] {
    RepresentationConfig rc;
    rc.window_lo = -20;
    rc.window_hi = 20;
    rc.battery = false;
    return build_majorant_representation(unit(), StripParams{}, 4, rc).rep;
  }();
  return rep;
}

TEST(LevelSet, SingleZeroAtZeroPhase) {
  const auto E = fixtures::single_zero();
  const auto ls = solve_level_set(E, 0, -10, 10);
  ASSERT_EQ(ls.points.size(), 1u);
  EXPECT_NEAR(ls.points[0], 0.0, 1e-12);
}

TEST(LevelSet, SingleZeroPhaseNeverReachesHalfPi) {
  const auto E = fixtures::single_zero();
  EXPECT_TRUE(solve_level_set(E, kPi / 2, -10, 10).points.empty());
}

TEST(LevelSet, UnitMultiplierIsNearlyIntegerSpaced) {
  const double a = phase_mod_pi(unit(), 0);
  const auto ls = solve_level_set(unit(), a, -10, 10);
  EXPECT_EQ(ls.points.size(), 19u);
  EXPECT_NEAR(ls.max_gap(), 1.0, 1e-3);
  EXPECT_NEAR(ls.nearest(0.2), 0.0, 1e-9);
}

TEST(LevelSet, PointsMakeRotatedFunctionReal) {
  for (double a : {0.3, 1.1, 2.9}) {
    const auto ls = solve_level_set(unit(), a, -8, 8);
    ASSERT_FALSE(ls.points.empty());
    for (double x : ls.points) {
      const cplx w = eval_E(unit(), x) * std::exp(cplx(0, a));
      EXPECT_LT(std::abs(w.imag()) / std::abs(w), 1e-9) << "alpha " << a << " x " << x;
    }
  }
}

TEST(LevelSet, KernelColumnsAreOrthogonal) {
  const auto ls = solve_level_set(unit(), phase_mod_pi(unit(), 0), -10, 10);
  double worst = 0;
  for (double x : ls.points)
    for (double y : ls.points) {
      if (x == y) continue;
      const double k = std::abs(reproducing_kernel(unit(), x, y));
      const double n = std::sqrt(std::abs(reproducing_kernel(unit(), x, x)) * std::abs(reproducing_kernel(unit(), y, y)));
      worst = std::max(worst, k / n);
    }
  EXPECT_LT(worst, 1e-10);
}

TEST(LevelSet, RejectsAlphaOutsideRange) {
  EXPECT_THROW(solve_level_set(unit(), kPi, -1, 1), Error);
  EXPECT_THROW(solve_level_set(unit(), -0.1, -1, 1), Error);
  EXPECT_THROW(solve_level_set(unit(), 0.1, 1, -1), Error);
}

TEST(LevelSet, DistanceOnEmptySetIsInfinite) {
  LevelSet ls;
  EXPECT_TRUE(std::isinf(ls.distance(0)));
  EXPECT_TRUE(std::isnan(ls.nearest(0)));
}

TEST(Separation, BadStairFailsForSomeAlpha) {
  const auto B = fixtures::bad_stair();
  double worst = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const auto ls = solve_level_set(B, i * kPi / 200, -30, 30);
    worst = std::min(worst, check_separation(ls.points, Metric::euclidean, 0.1).min_gap);
  }
  EXPECT_LT(worst, 0.1);
}

TEST(Separation, MatchesBruteForceGap) {
  oracle::Gen g(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pts;
    const int n = g.integer(2, 30);
    for (int i = 0; i < n; ++i) pts.push_back(g.uniform(-50, 50));
    const auto r = check_separation(pts, Metric::euclidean, 0.5);
    EXPECT_NEAR(r.min_gap, oracle::min_gap(pts), 1e-12);
    EXPECT_EQ(r.pass, r.min_gap >= 0.5);
  }
}

TEST(Separation, PseudoDistanceClosedForm) {
  const cplx z(0, 1), w(1, 1);
  EXPECT_NEAR(pseudo_distance(z, w), 1.0 / (1 + std::abs(cplx(-1, 2))), 1e-15);
  std::vector<cplx> pts{{0, 1}, {1, 1}, {5, 3}};
  const auto r = check_separation(pts, Metric::pseudo, 0.1);
  EXPECT_NEAR(r.min_gap, pseudo_distance(pts[0], pts[1]), 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(Carleson, IntegersShiftedByIAreBounded) {
  std::vector<cplx> pts;
  for (int k = -50; k <= 50; ++k) pts.emplace_back(k, 1);
  const auto r = check_carleson(pts, {1, 4, 16, 32});
  EXPECT_NEAR(r.sup_estimate, 2.0, 0.05);
  EXPECT_TRUE(r.pass);
}

TEST(Carleson, DiagonalHeightsBlowUp) {
  std::vector<cplx> pts;
  for (int k = 1; k <= 200; ++k) pts.emplace_back(k, k);
  EXPECT_FALSE(check_carleson(pts, {1, 4, 16, 64, 256}).pass);
}

TEST(GeneratingProduct, SineProductAtHalf) {
  std::vector<double> Z;
  for (int k = -100000; k <= 100000; ++k) Z.push_back(k);
  EXPECT_NEAR((kPi * generating_product(Z, 1e5, 0.5)).real(), 1.0, 1e-5);
}

TEST(GeneratingProduct, SineProductMatchesClosedFormOffAxis) {
  std::vector<double> Z;
  for (int k = -100000; k <= 100000; ++k) Z.push_back(k);
  const cplx z(0.3, 0.7);
  const cplx want = std::sin(kPi * z) / kPi;
  EXPECT_LT(std::abs(generating_product(Z, 1e5, z) - want) / std::abs(want), 1e-4);
}

TEST(GeneratingProduct, SineTypeAlongImaginaryAxisIsPi) {
  std::vector<cplx> Z;
  for (int k = -100000; k <= 100000; ++k) Z.emplace_back(k, 0);
  const auto t = exponential_type_estimate([&](cplx z) { return log_generating_product(Z, 1e5, z).real(); },
                                           {kPi / 2}, {8, 12, 16, 24, 32});
  EXPECT_NEAR(t.value, kPi, 0.02);
}

TEST(Density, IntegersEvensAndUnion) {
  std::vector<double> Z, E2, U;
  for (int k = -1000; k <= 1000; ++k) {
    Z.push_back(k);
    if (k % 2 == 0) E2.push_back(k);
    U.push_back(k);
    U.push_back(k + 0.5);
  }
  EXPECT_NEAR(upper_density(Z, default_density_ladder(Z)).estimate, 1.0, 1e-2);
  EXPECT_NEAR(upper_density(E2, default_density_ladder(E2)).estimate, 0.5, 1e-2);
  EXPECT_NEAR(upper_density(U, default_density_ladder(U)).estimate, 2.0, 2e-2);
}

TEST(A2, ConstantWeightIsOne) {
  A2Weight w{[](double) { return 1.0; }, {}, {}};
  const auto r = check_a2(w, A2Family{});
  EXPECT_NEAR(r.sup_product, 1.0, 1e-9);
  EXPECT_TRUE(r.pass);
}

TEST(A2, SquareRootWeightHitsFourThirds) {
  A2Weight w{[](double x) { return std::sqrt(std::abs(x)); }, {0}, {}};
  const auto r = check_a2(w, A2Family{});
  // on [0, h]: (2/3 h^{1/2}) (2 h^{-1/2}) = 4/3
  EXPECT_NEAR(r.sup_product, 4.0 / 3.0, 1e-3);
  EXPECT_TRUE(r.pass);
}

TEST(A2, QuadraticWeightDiverges) {
  A2Weight w{[](double x) { return x * x; }, {0}, {}};
  const auto r = check_a2(w, A2Family{});
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.divergent);
}

TEST(Lift, SincLiftsToClassicalSpace) {
  const Grid g = Grid::line(-30, 30, 0.1);
  const auto lr = lift_to_classical(
      [](cplx z) {
        if (z == cplx(0, 0)) return 0.0;
        return std::log(std::abs(std::sin(kPi * z) / (kPi * z)));
      },
      Weight::constant(1), RealPoly{{0}}, 2.0, g);
  EXPECT_NEAR(lr.ratio, 1.0, 0.01);
  EXPECT_NEAR(lr.lift_type.value, 2 * kPi, 0.05 * 2 * kPi);
  EXPECT_TRUE(lr.type_pass);
}

TEST(Battery, UnitMultiplierPassesForTwoAlphas) {
  for (double a : {0.3, 1.8}) {
    const auto pr = pavlov_diagnostics(unit(), a, unit_rep(), 2.0);
    EXPECT_TRUE(pr.separation.pass) << a;
    EXPECT_TRUE(pr.carleson.pass) << a;
    EXPECT_TRUE(pr.type_estimate.pass) << a;
    EXPECT_TRUE(pr.a2.pass) << a << " " << pr.a2.sup_product;
    EXPECT_TRUE(pr.overall) << pr.verdict;
  }
}

TEST(Battery, BadStairFailsTypeOrA2) {
  const auto B = fixtures::bad_stair();
  RepresentationConfig rc;
  rc.window_lo = -20;
  rc.window_hi = 20;
  rc.battery = false;
  rc.branch = "easy";
  const auto rep = build_majorant_representation(B, StripParams{}, 4, rc).rep;
  const auto pr = pavlov_diagnostics(B, 0.3, rep, 2.0);
  EXPECT_FALSE(pr.overall);
  EXPECT_FALSE(pr.type_estimate.pass && pr.a2.pass);
}

TEST(Battery, DefaultAlphaPairIsDistinct) {
  const auto [a, b] = default_alpha_pair(unit());
  EXPECT_GE(a, 0);
  EXPECT_LT(a, kPi);
  EXPECT_GE(b, 0);
  EXPECT_LT(b, kPi);
  EXPECT_GT(std::abs(a - b), 1e-3);
}

TEST(Exceptional, UnitMultiplierIntegralsGrowLinearly) {
  const auto ex = exceptional_alpha_diagnostic(unit(), 0.3);
  ASSERT_EQ(ex.rows.size(), 4u);
  for (const auto& r : ex.rows) {
    EXPECT_NEAR(r.sine_integral, r.T, 0.01 * r.T);
    EXPECT_NEAR(r.sigma_integral, 2 * r.T, 1e-6 * r.T);
  }
  EXPECT_TRUE(ex.sine_grows);
  EXPECT_FALSE(ex.counterexample);
}

TEST(Complement, WeightAddsUpToTau) {
  const auto m = Weight::step(0, 2, 3);
  const auto c = complement_weight(m, 4);
  for (double x : {-5.0, 0.5, 1.9, 10.0}) EXPECT_NEAR(m(x) + c(x), 4.0, 1e-15);
}

}  // namespace
