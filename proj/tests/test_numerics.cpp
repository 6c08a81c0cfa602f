#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>

#include "oracles.hpp"
#include "pwlab/numerics.hpp"

using namespace pwlab;

namespace {

const QuadratureConfig kCfg{};

TEST(IntegrateLine, GaussianMatchesMidpointOracle) {
  auto f = [](double t) { return std::exp(-t * t); };
  const double ref = oracle::midpoint(f, -12, 12, 240000);
  const auto r = integrate_line(f, kCfg);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-9);
  EXPECT_NEAR(r.value, ref, 1e-9);
  EXPECT_LE(r.err_est, 1e-8);
}

TEST(IntegrateLine, ZeroIntegrand) {
  const auto r = integrate_line([](double) { return 0.0; }, kCfg);
  EXPECT_EQ(r.value, 0.0);
}

TEST(IntegrateLine, AlgebraicTails) {
  const auto r = integrate_line([](double t) { return 1 / (1 + t * t); }, kCfg);
  EXPECT_NEAR(r.value, std::numbers::pi, 1e-9);
}

TEST(IntegrateInterval, LogSingularityMatchesGradedOracle) {
  auto f = [](double t) { return std::log(std::abs(1 - 1 / t)); };
  const double ref = oracle::graded_midpoint(f, 0.5, 2.0, 1.0, 1000000);
  LinePoints pts;
  pts.singular = {1.0};
  const auto r = integrate_interval(f, 0.5, 2.0, kCfg, pts);
  EXPECT_NEAR(r.value, ref, 1e-7);
  // closed form: int log|t-1| - log t over [0.5, 2]
  const double exact = (1 * std::log(1.0) - 1) - (-0.5 * std::log(0.5) + 0.5) -
                       ((2 * std::log(2.0) - 2) - (0.5 * std::log(0.5) - 0.5));
  EXPECT_NEAR(r.value, exact, 1e-9);
}

TEST(IntegrateLine, SingularPointInsideLineIntegral) {
  auto f = [](double t) { return std::log(std::abs(t)) * std::exp(-t * t); };
  LinePoints pts;
  pts.singular = {0.0};
  const auto r = integrate_line(f, kCfg, pts);
  // int log|t| e^{-t^2} dt = -sqrt(pi)(gamma + 2 log 2)/2
  const double exact = -std::sqrt(std::numbers::pi) * (0.5772156649015329 + 2 * std::log(2.0)) / 2;
  EXPECT_NEAR(r.value, exact, 1e-9);
}

TEST(IntegrateHalfLine, ExponentialTail) {
  const auto r = integrate_half_line([](double t) { return 1 / (t * t); }, 1.0, kCfg);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  const auto l = integrate_half_line([](double t) { return 1 / (t * t); }, -2.0, kCfg, {}, true);
  EXPECT_NEAR(l.value, 0.5, 1e-10);
}

TEST(IntegrateLine, NonFiniteIntegrandIsReported) {
  try {
    integrate_line([](double t) { return t > 0.3 ? NAN : std::exp(-t * t); }, kCfg);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::quadrature_failure);
  }
}

TEST(IntegrateLine, SubdivisionBudgetExhaustion) {
  QuadratureConfig tight{1e-15, 1e-15, 5, 8.0};
  EXPECT_THROW(integrate_line([](double t) { return std::sin(40 * t) / (1 + t * t); }, tight), Error);
}

TEST(QuadratureConfig, RejectsBadTolerances) {
  EXPECT_THROW((QuadratureConfig{0, 1e-10, 100, 8}.validate()), Error);
  EXPECT_THROW((QuadratureConfig{1e-10, 1e-10, 100, 0.5}.validate()), Error);
}

TEST(IntegratePv, OddAboutThePoleVanishes) {
  const double x = 1.0;
  const double v = integrate_pv([&](double t) { return std::abs(t - x) <= 1 ? 1 / (x - t) : 0.0; }, x, kCfg,
                                {x - 1, x + 1});
  EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(IntegratePv, OddIntegrandAtZero) {
  const double v = integrate_pv([](double t) { return 1 / ((0 - t) * (1 + t * t)); }, 0.0, kCfg);
  EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(IntegratePv, CauchyKernelAgainstExcisionOracle) {
  const double x = 1.0;
  auto g = [&](double t) { return 1 / ((x - t) * (1 + t * t)); };
  const double v = integrate_pv(g, x, kCfg);
  // closed form: pv int 1/((x-t)(1+t^2)) dt = pi x/(1+x^2)
  EXPECT_NEAR(v, std::numbers::pi * x / (1 + x * x), 1e-9);
  const double ref = oracle::pv_by_excision(g, x, 4000);
  EXPECT_NEAR(v, ref, 2e-3);
}

TEST(IntegratePv, NonIntegrablePairIsDiverging) {
  try {
    integrate_pv([](double t) { return 1 / std::abs(1 - t); }, 1.0, kCfg);
    FAIL() << "expected pv divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::pv_divergence);
  }
}

TEST(IntegratePv, AgreesWithLineIntegralWithoutPole) {
  auto f = [](double t) { return std::exp(-(t - 0.3) * (t - 0.3)); };
  EXPECT_NEAR(integrate_pv(f, 0.7, kCfg), integrate_line(f, kCfg).value, kCfg.abs_tol * 10);
}

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n : {2, 5, 10}) {
    GaussLegendre gl(n);
    for (int d = 0; d < 2 * n; ++d) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], d);
      EXPECT_NEAR(s, d % 2 ? 0.0 : 2.0 / (d + 1), 1e-13) << "n=" << n << " d=" << d;
    }
  }
}

TEST(Certify, IdentityGivesUnitRatios) {
  auto f = [](cplx z) { return 1 + std::abs(z); };
  const auto c = certify_comparable(f, f, Grid::line(-3, 3, 0.5), {0.99, 1.01});
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.ratio_min, 1.0);
  EXPECT_EQ(c.ratio_max, 1.0);
}

TEST(Certify, ConstantScaling) {
  auto g = [](cplx z) { return 2 + z.real() * z.real(); };
  const auto c = certify_comparable([&](cplx z) { return 2 * g(z); }, g, Grid::line(-3, 3, 0.5), {0.5, 3});
  EXPECT_TRUE(c.pass);
  EXPECT_DOUBLE_EQ(c.ratio_min, 2.0);
  EXPECT_DOUBLE_EQ(c.ratio_max, 2.0);
}

TEST(Certify, FailsOutsideBandAndReportsArgmax) {
  auto g = [](cplx) { return 1.0; };
  const auto c = certify_comparable([](cplx z) { return 1 + z.real() * z.real(); }, g, Grid::line(-2, 2, 1), {0.5, 3});
  EXPECT_FALSE(c.pass);
  EXPECT_DOUBLE_EQ(c.ratio_max, 5.0);
  EXPECT_EQ(std::abs(c.argmax.real()), 2.0);
}

TEST(Certify, VanishingDenominatorIsGridError) {
  try {
    certify_comparable([](cplx) { return 1.0; }, [](cplx z) { return z.real(); }, Grid::line(-1, 1, 1), {0.5, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_grid);
  }
}

TEST(Certify, LogFormMatchesDirectForm) {
  const Grid g = Grid::rect(-2, 2, 5, 0.5, 1.5, 3);
  auto f = [](cplx z) { return std::exp(z.imag()) * (2 + std::cos(z.real())); };
  auto h = [](cplx z) { return 1 + z.imag(); };
  const auto a = certify_comparable(f, h, g, {0.1, 10});
  const auto b = certify_comparable_log([&](cplx z) { return std::log(f(z)); }, [&](cplx z) { return std::log(h(z)); },
                                        g, {0.1, 10});
  EXPECT_NEAR(a.ratio_min, b.ratio_min, 1e-13);
  EXPECT_NEAR(a.ratio_max, b.ratio_max, 1e-13);
}

TEST(Grid, ConstructorsAndValidation) {
  const Grid l = Grid::line(-1, 1, 0.5, 2.0);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l.points.front(), cplx(-1, 2));
  EXPECT_FALSE(l.is_real());
  const Grid r = Grid::rect(0, 1, 3, -1, 1, 2);
  EXPECT_EQ(r.size(), 6u);
  EXPECT_THROW(Grid::line(1, 0, 0.5), Error);
  EXPECT_THROW(Grid::from_points({}, "empty").validate(), Error);
  EXPECT_TRUE(Grid::from_reals({0, 1}, "two").is_real());
}

TEST(Band, RejectsIllOrdered) {
  EXPECT_THROW((Band{2, 1}.validate()), Error);
  EXPECT_NO_THROW((Band{0.5, 0.5}.validate()));
}

TEST(ParallelMap, PreservesOrderAndPropagatesErrors) {
  setenv("PWLAB_THREADS", "3", 1);
  const auto v = parallel_map<int>(1000, [](size_t i) { return static_cast<int>(i * i); });
  for (size_t i = 0; i < v.size(); ++i) ASSERT_EQ(v[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map<int>(100,
                                 [](size_t i) -> int {
                                   if (i == 57) throw Error(ErrorKind::quadrature_failure, "x");
                                   return 0;
                                 }),
               Error);
  unsetenv("PWLAB_THREADS");
}

TEST(Polyfit, RecoversQuadratic) {
  std::vector<double> xs, ys;
  for (double x = -10; x <= 10; x += 0.5) {
    xs.push_back(x);
    ys.push_back(1.5 - 0.25 * x + 0.01 * x * x);
  }
  const auto c = polyfit(xs, ys, 2);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0], 1.5, 1e-10);
  EXPECT_NEAR(c[1], -0.25, 1e-10);
  EXPECT_NEAR(c[2], 0.01, 1e-12);
  const RealPoly p{c};
  EXPECT_NEAR(p(2.0), 1.5 - 0.5 + 0.04, 1e-10);
}

TEST(TypeEstimate, ExponentialAndConstant) {
  const auto e = exponential_type_estimate([](cplx z) { return std::numbers::pi * z.imag(); },
                                           {std::numbers::pi / 2}, {8, 16, 32});
  EXPECT_NEAR(e.value, std::numbers::pi, 1e-12);
  const auto one = exponential_type_estimate([](cplx) { return 0.0; }, default_rays(), {8, 16, 32});
  EXPECT_NEAR(one.value, 0.0, 1e-14);
  EXPECT_EQ(default_rays().size(), 6u);
}

TEST(Errors, KindStringsAndUsageClass) {
  const Error e(ErrorKind::invalid_grid, "bad");
  EXPECT_EQ(std::string(e.what()), std::string(to_string(ErrorKind::invalid_grid)) + ": bad");
  EXPECT_TRUE(e.is_usage_error());
  EXPECT_FALSE(Error(ErrorKind::quadrature_failure, "q").is_usage_error());
}

}  // namespace
