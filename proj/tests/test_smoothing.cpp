#include <gtest/gtest.h>

#include "pwlab/fixtures.hpp"
#include "pwlab/smoothing.hpp"

using namespace pwlab;

namespace {

const StripParams kSp{};
const double kPi = std::numbers::pi;

struct StairSetup {
  HBModel E = fixtures::stair();
  MountainChain chain = segment_chain(E, kSp, -40, 40);
  SigmaProfile sigma = build_sigma(chain);
  SmoothedProfile at(int L) const { return mollify(build_polygon(sigma, L), Mollifier(default_half_width(chain, L))); }
};

const StairSetup& stair() {
  static const StairSetup s;
  return s;
}

DerivProfile arctan_profile() {
  DerivProfile p;
  p.f = [](double x) { return std::atan(x); };
  p.df = [](double x) { return 1 / (1 + x * x); };
  p.d2f = [](double x) { return -2 * x / ((1 + x * x) * (1 + x * x)); };
  p.sup_df = 1;
  p.sup_d2f = 3 * std::sqrt(3.0) / 8;
  return p;
}

TEST(Sigma, AllPlateauIsOne) {
  const auto ch = segment_chain(fixtures::unit_multiplier(1000), kSp, -10, 10);
  const auto s = build_sigma(ch);
  for (double x = -10; x <= 10; x += 0.3) EXPECT_EQ(s(x), 1.0);
}

TEST(Sigma, StairReadsDepths) {
  const auto& s = stair();
  for (int k : {-30, -4, 4, 7, 25}) EXPECT_NEAR(s.sigma(k + 0.1), 1 / std::sqrt(1.0 + std::abs(k)), 1e-15) << k;
  EXPECT_EQ(s.sigma(0.0), 1.0);
}

TEST(Sigma, SingleShallowZero) {
  const HBModel one = HBModel::from_zeros({{0, -0.1}});
  const auto s = build_sigma(segment_chain(one, kSp, -5, 5));
  EXPECT_NEAR(s(0.0), 0.1, 1e-15);
  EXPECT_NEAR(s(3.0), 0.1, 1e-15);
}

TEST(Polygon, FlatSigmaGivesZero) {
  const auto s = build_sigma(segment_chain(fixtures::unit_multiplier(1000), kSp, -20, 20));
  const auto p = build_polygon(s, 4);
  for (double v : p.vy) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(p.max_abs_slope(), 0.0);
}

TEST(Polygon, StairSlopeIsDefinitional) {
  const auto p = build_polygon(stair().sigma, 8);
  const auto& s = stair().sigma;
  const double want = (0.5 * std::log(s(16)) - 0.5 * std::log(s(8))) / 8;
  auto it = std::find(p.vx.begin(), p.vx.end(), 8.0);
  ASSERT_NE(it, p.vx.end());
  EXPECT_NEAR(p.slopes[static_cast<size_t>(it - p.vx.begin())], want, 1e-15);
  EXPECT_NEAR(p(12.0), 0.5 * (0.5 * std::log(s(16)) + 0.5 * std::log(s(8))), 1e-15);
}

TEST(Polygon, SlopeBoundOnAxiomFixture) {
  for (int L : {4, 8, 16, 32}) {
    const auto p = build_polygon(stair().sigma, L);
    EXPECT_LE(p.max_abs_slope(), 2 * kSp.growth_constant * std::pow(L, -kSp.epsilon_growth)) << L;
  }
}

TEST(Mollifier, UnitMassSymmetryAndPrimitives) {
  const Mollifier m(0.5);
  EXPECT_NEAR(m.cdf(0), 0.5, 1e-12);
  EXPECT_NEAR(m.cdf(0.5), 1.0, 1e-12);
  EXPECT_NEAR(m.cdf(-0.5), 0.0, 1e-12);
  EXPECT_EQ(m.rho(0.6), 0.0);
  EXPECT_NEAR(m.rho(0.2), m.rho(-0.2), 1e-12);
  // mass by an independent midpoint sum
  double mass = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) mass += m.rho(-0.5 + (i + 0.5) / n) / n;
  EXPECT_NEAR(mass, 1.0, 1e-6);
  EXPECT_NEAR(m.sup(), m.rho(0), 0);
  // second primitive at +h equals int (h - t) rho = h
  EXPECT_NEAR(m.second_primitive(0.5), 0.5, 1e-10);
}

TEST(Mollify, ZeroAndAffineReproduction) {
  Polygon p;
  p.L = 1;
  for (int j = -10; j <= 10; ++j) {
    p.vx.push_back(j);
    p.vy.push_back(0.3 * j + 1);
  }
  for (int j = 0; j < 20; ++j) p.slopes.push_back(0.3);
  const auto f = mollify(p, Mollifier(0.3));
  for (double x = -9; x <= 9; x += 0.37) {
    EXPECT_NEAR(f.f(x), 0.3 * x + 1, 1e-12) << x;
    EXPECT_NEAR(f.df(x), 0.3, 1e-12);
    EXPECT_NEAR(f.d2f(x), 0.0, 1e-12);
  }
  Polygon z = p;
  std::fill(z.vy.begin(), z.vy.end(), 0.0);
  std::fill(z.slopes.begin(), z.slopes.end(), 0.0);
  const auto fz = mollify(z, Mollifier(0.3));
  for (double x = -12; x <= 12; x += 0.5) EXPECT_EQ(fz.f(x), 0.0);
}

TEST(Mollify, RejectsWideKernel) {
  const auto p = build_polygon(stair().sigma, 4);
  EXPECT_THROW(mollify(p, Mollifier(2.5)), Error);
}

TEST(Mollify, SecondDerivativeBoundStairL8) {
  const auto f = stair().at(8);
  const Mollifier rho(default_half_width(stair().chain, 8));
  double sup = 0;
  for (double x = -40; x <= 40; x += 0.01) sup = std::max(sup, std::abs(f.d2f(x)));
  EXPECT_LE(sup, f.sup_d2f() + 1e-12);
  EXPECT_LE(sup, 4 * rho.sup() * kSp.growth_constant * std::pow(8.0, -kSp.epsilon_growth));
}

TEST(Mollify, DerivativesMatchFiniteDifferences) {
  const auto f = stair().at(8);
  const double h = 1e-4;
  for (double x : {-17.3, 3.9, 8.05, 22.2}) {
    EXPECT_NEAR((f.f(x + h) - f.f(x - h)) / (2 * h), f.df(x), 1e-6) << x;
    EXPECT_NEAR((f.df(x + h) - f.df(x - h)) / (2 * h), f.d2f(x), 1e-4) << x;
  }
}

TEST(SmoothingConditions, FlatSigmaPassesTrivially) {
  const auto ch = segment_chain(fixtures::unit_multiplier(1000), kSp, -20, 20);
  const auto s = build_sigma(ch);
  const auto f = mollify(build_polygon(s, 4), Mollifier(default_half_width(ch, 4)));
  const auto r = verify_smoothing_conditions(f, s, kSp.growth_constant, kSp.epsilon_growth);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.approximation.value, 0.0);
}

TEST(SmoothingConditions, StairPassesAndDerivativeBoundShrinks) {
  double prev = INFINITY;
  for (int L : {4, 8, 16}) {
    const auto r = verify_smoothing_conditions(stair().at(L), stair().sigma, kSp.growth_constant, kSp.epsilon_growth);
    EXPECT_TRUE(r.all_pass()) << L;
    EXPECT_LT(r.first_derivative.bound, prev);
    prev = r.first_derivative.bound;
  }
}

TEST(SmoothingConditions, ApproximationConstantIndependentOfL) {
  for (int L : {8, 16, 32}) {
    const auto r = verify_smoothing_conditions(stair().at(L), stair().sigma, kSp.growth_constant, kSp.epsilon_growth);
    EXPECT_LT(r.approximation.value, 0.5) << L;
  }
}

TEST(SmoothingConditions, BadStairFailsDecay) {
  const HBModel B = fixtures::bad_stair();
  const auto ch = segment_chain(B, kSp, -40, 40);
  const auto s = build_sigma(ch);
  for (int L : {4, 8}) {
    const auto f = mollify(build_polygon(s, L), Mollifier(default_half_width(ch, L)));
    const auto r = verify_smoothing_conditions(f, s, kSp.growth_constant, kSp.epsilon_growth);
    EXPECT_FALSE(r.decay.pass) << L;
    EXPECT_GE(std::abs(r.decay.witness_x2 - r.decay.witness_x), 3.0 * L);
  }
}

TEST(Hilbert, ArctanPairOnWideGrid) {
  std::vector<double> xs;
  for (double x = -20; x <= 20; x += 0.25) xs.push_back(x);
  const auto h = hilbert_of_derivative(arctan_profile(), xs, 4, kPi / 2, 0.5);
  double err = 0;
  for (size_t i = 0; i < xs.size(); ++i) err = std::max(err, std::abs(h.H[i] - xs[i] / (1 + xs[i] * xs[i])));
  EXPECT_LT(err, 1e-3);
  EXPECT_NEAR(h.H[static_cast<size_t>((1.0 + 20) / 0.25)], 0.5, 1e-3);
  EXPECT_LE(h.sup, h.bound);
}

TEST(Hilbert, ZeroDerivative) {
  DerivProfile p;
  p.f = [](double) { return 2.0; };
  p.df = [](double) { return 0.0; };
  p.d2f = [](double) { return 0.0; };
  const auto h = hilbert_of_derivative(p, {-3, 0, 5}, 4, 1.0, 0.5);
  for (double v : h.H) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(h.bound, hilbert_bound(0, 0, 4, 1.0, 0.5), 0);
  EXPECT_NEAR(h.bound, 2 * 1.0 / std::pow(4.0, 0.5) * 3 / kPi, 1e-15);
}

TEST(Hilbert, LinearityInTheProfile) {
  const auto a = to_deriv_profile(stair().at(8));
  const auto b = arctan_profile();
  DerivProfile c;
  c.f = [&](double x) { return 2 * a.f(x) - 0.5 * b.f(x); };
  c.df = [&](double x) { return 2 * a.df(x) - 0.5 * b.df(x); };
  c.d2f = [&](double x) { return 2 * a.d2f(x) - 0.5 * b.d2f(x); };
  c.sup_df = 2 * a.sup_df + 0.5 * b.sup_df;
  c.sup_d2f = 2 * a.sup_d2f + 0.5 * b.sup_d2f;
  c.knots = a.knots;
  const std::vector<double> xs{-11.3, 0.2, 7.7};
  const auto ha = hilbert_of_derivative(a, xs, 24, 1.0, 0.3);
  const auto hb = hilbert_of_derivative(b, xs, 24, 1.0, 0.3);
  const auto hc = hilbert_of_derivative(c, xs, 24, 1.0, 0.3);
  for (size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(hc.H[i], 2 * ha.H[i] - 0.5 * hb.H[i], 1e-8);
}

TEST(Hilbert, StairBoundHoldsAndShrinks) {
  std::vector<double> xs;
  for (double x = -40; x <= 40; x += 0.25) xs.push_back(x);
  double prev = INFINITY;
  for (int L : {4, 8, 16, 32}) {
    const auto h = hilbert_of_derivative(to_deriv_profile(stair().at(L)), xs, 3.0 * L, 4 * kSp.growth_constant,
                                         kSp.epsilon_growth);
    EXPECT_LE(h.sup, h.bound) << L;
    EXPECT_LT(h.bound, prev) << L;
    prev = h.bound;
  }
}

TEST(Hilbert, RejectsSmallRadius) { EXPECT_THROW(hilbert_of_derivative(arctan_profile(), {0}, 0.5, 1, 0.5), Error); }

TEST(Representation, UnitMultiplierEasyBranch) {
  RepresentationConfig cfg;
  cfg.window_lo = -10;
  cfg.window_hi = 10;
  const auto r = build_majorant_representation(fixtures::unit_multiplier(1000), kSp, 4, cfg);
  EXPECT_EQ(r.rep.branch, "easy");
  EXPECT_TRUE(r.certificate.pass);
  EXPECT_GT(r.certificate.ratio_min, 0.95);
  EXPECT_LT(r.certificate.ratio_max, 1.05);
  // recovered weight phi'/pi is comparable to 1
  const auto c = certify_comparable([&](cplx z) { return r.rep.m(z.real()); }, [](cplx) { return 1.0; },
                                    Grid::line(-10, 10, 0.05), {0.9, 1.1});
  EXPECT_TRUE(c.pass);
  EXPECT_GT(r.battery_min, 0.9);
  EXPECT_LT(r.battery_max, 1.1);
}

TEST(Representation, SingleZeroCertifiesConstantMajorant) {
  const auto r = build_majorant_representation(fixtures::single_zero(), kSp, 4, {});
  EXPECT_EQ(r.rep.branch, "easy");
  EXPECT_TRUE(r.certificate.pass) << r.certificate.ratio_min << " " << r.certificate.ratio_max;
}

TEST(Representation, StairGeneralBranchL16) {
  const auto r = build_majorant_representation(fixtures::stair(), kSp, 16, {});
  EXPECT_EQ(r.rep.branch, "general");
  EXPECT_TRUE(r.certificate.pass) << r.certificate.ratio_min << " " << r.certificate.ratio_max;
  EXPECT_LE(r.rep.hilbert_sup, r.rep.hilbert_bound);
  ASSERT_FALSE(r.battery.empty());
  EXPECT_GT(r.battery_min, 0.1);
  EXPECT_LT(r.battery_max, 10);
  EXPECT_LT(r.battery_max / r.battery_min, 4);
  for (int i = 0; i < 5; ++i) EXPECT_GT(r.rep.m(-40 + 20.0 * i), 0);
}

TEST(Representation, BranchValidation) {
  RepresentationConfig cfg;
  cfg.branch = "sideways";
  EXPECT_THROW(build_majorant_representation(fixtures::single_zero(), kSp, 4, cfg), Error);
  cfg.branch = "general";
  cfg.window_lo = -5;
  cfg.window_hi = 5;
  EXPECT_THROW(build_majorant_representation(fixtures::unit_multiplier(100), kSp, 4, cfg), Error);
}

TEST(Representation, PositivityFailureRetriesWithLargerL) {
  // sparse zeros (spacing 3) keep inf psi' low while the depth profile is steep
  std::vector<cplx> zs;
  for (int k = -20; k <= 20; ++k) zs.emplace_back(3.0 * k, -std::min(1.0, std::exp(-0.5 * std::abs(k))));
  const HBModel E = HBModel::from_zeros(zs);
  RepresentationConfig cfg;
  cfg.battery = false;
  cfg.window_lo = -20;
  cfg.window_hi = 20;
  try {
    build_majorant_representation(E, kSp, 1, cfg);
    FAIL() << "expected positivity failure at L = 1";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::positivity_failure);
  }
  EXPECT_THROW(build_majorant_representation_auto(E, kSp, 1, 1, cfg), Error);
  const auto r = build_majorant_representation_auto(E, kSp, 1, 64, cfg);
  EXPECT_EQ(r.rep.L, 2);
  EXPECT_LT(r.rep.hilbert_sup, r.rep.hilbert_bound);
}

}  // namespace
