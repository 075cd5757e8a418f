#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fpslab/diagnostics.hpp"
#include "oracles.hpp"

using namespace fpslab;

namespace {

MagnitudeLedger ledger_from(int N, const std::function<double(int)>& log_mag) {
  std::vector<double> v(N + 1);
  for (int n = 0; n <= N; ++n) v[n] = log_mag(n);
  return MagnitudeLedger(v);
}

Series1 geometric(int order, double R, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mod(0.5, 1.0), ang(0.0, 2.0 * kPi);
  Series1 s(order);
  for (int n = 0; n <= order; ++n) s[n] = std::polar(mod(rng) * std::pow(R, -n), ang(rng));
  return s;
}

Series1 factorial_series(int order) {
  Series1 s(order);
  for (int n = 1; n <= order; ++n) s[n] = std::exp(std::lgamma(n + 1.0));
  return s;
}

cplx exp_sum(double x, double y) { return std::exp(x + y); }

cplx flat_fn(double x, double y) {
  const double r2 = x * x + y * y;
  return r2 == 0.0 ? 0.0 : std::exp(-1.0 / r2);
}

}  // namespace

TEST(Ledger, ReproducesMaxLogMagnitudes) {
  Series2 g(3);
  g.at(1, 1) = 2.0;
  g.at(2, 0) = cplx{0.0, -5.0};
  g.at(0, 3) = 0.5;
  const MagnitudeLedger l = MagnitudeLedger::of(g);
  EXPECT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], kNegInf);
  EXPECT_EQ(l[1], kNegInf);
  EXPECT_EQ(l[2], std::log(5.0));
  EXPECT_EQ(l[3], std::log(0.5));
  EXPECT_THROW(MagnitudeLedger({0.0, std::nan("")}), std::invalid_argument);
}

TEST(Classify, Geometric) {
  Series1 s(40);
  for (int n = 0; n <= 40; ++n) s[n] = std::pow(2.0, n);
  const GrowthReport r = classify_series(s, {});
  EXPECT_EQ(r.verdict, Verdict::convergent);
  EXPECT_NEAR(r.radius, 0.5, 0.05);
}

TEST(Classify, Factorial) {
  const GrowthReport r = classify_series(factorial_series(60), {});
  EXPECT_EQ(r.verdict, Verdict::divergent);
}

TEST(Classify, SuperlinearLedgerFromLogs) {
  // n log n growth far beyond double range, handled in log space
  const MagnitudeLedger l = ledger_from(400, [](int n) { return n < 2 ? 0.0 : n * std::log(n); });
  EXPECT_EQ(growth_classify(l).verdict, Verdict::divergent);
}

TEST(Classify, WindowRules) {
  const MagnitudeLedger l = ledger_from(30, [](int n) { return 0.1 * n; });
  EXPECT_THROW(growth_classify(l, DegreeWindow{10, 16}), precondition_error);
  EXPECT_THROW(growth_classify(l, DegreeWindow{20, 31}), precondition_error);
  const GrowthReport r = growth_classify(l, DegreeWindow{5, 30});
  EXPECT_EQ(r.window.lo, 5);
  EXPECT_EQ(r.window.hi, 30);
  EXPECT_EQ(r.verdict, Verdict::convergent);
  EXPECT_TRUE(std::isfinite(r.slope));
  EXPECT_GE(r.confidence, 0.0);
  EXPECT_LE(r.confidence, 1.0);
}

TEST(Classify, SlopeCap) {
  const MagnitudeLedger l = ledger_from(40, [](int n) { return 20.0 * n; });
  EXPECT_EQ(growth_classify(l).verdict, Verdict::divergent);
}

TEST(Classify, PolynomialIsConvergent) {
  Series1 p(40);
  p[1] = 3.0;
  p[2] = -1.0;
  const GrowthReport r = classify_series(p, {});
  EXPECT_EQ(r.verdict, Verdict::convergent);
}

TEST(Classify, ScaleEquivariance) {
  std::mt19937_64 rng(1);
  const Series1 s = geometric(48, 0.7, rng);
  const cplx c{3.0, -4.0};
  const MagnitudeLedger a = MagnitudeLedger::of(s), b = MagnitudeLedger::of(c * s);
  for (int n = 0; n <= 48; ++n) EXPECT_NEAR(b[n], a[n] + std::log(5.0), 1e-12);
  EXPECT_NEAR(growth_classify(a).slope, growth_classify(a.shifted(std::log(5.0))).slope, 1e-9);
  EXPECT_NEAR(growth_classify(a).slope, growth_classify(b).slope, 1e-9);
}

TEST(Classify, RadiusConsistency) {
  std::mt19937_64 rng(2);
  for (double R : {0.2, 0.5, 1.0, 3.0, 8.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const GrowthReport r = classify_series(geometric(60, R, rng), {});
      EXPECT_EQ(r.verdict, Verdict::convergent);
      EXPECT_GE(r.radius, 0.9 * R);
      EXPECT_LE(r.radius, 1.1 * R);
    }
  }
}

TEST(Sweep, ConvergentRandomSeries) {
  std::mt19937_64 rng(3);
  const Series2 g = oracle::random_series2(rng, 30);
  const SweepReport rep = restriction_sweep(g, Series1::monomial(30, 2), WeightPair(1, 1), segment_sample(1.0, 2.0, 31.0));
  EXPECT_EQ(rep.rows.size(), 32u);
  EXPECT_TRUE(rep.all_convergent);
  EXPECT_EQ(rep.g_report.verdict, Verdict::convergent);
  EXPECT_EQ(rep.h_report.verdict, Verdict::convergent);
}

TEST(Sweep, LedgersMatchIndependentSubstitution) {
  std::mt19937_64 rng(4);
  for (const WeightPair w : {WeightPair(1, 1), WeightPair(2, -1), WeightPair(0, -1)}) {
    const Series2 g = oracle::random_series2(rng, 24);
    const Series1 h = oracle::random_curve(rng, 24);
    const SampleSet E = finite_set({cplx{1.0, 0.5}, cplx{-0.8, 0.2}, 1.5, cplx{0.0, -1.2}});
    const SweepReport rep = restriction_sweep(g, h, w, E);
    for (std::size_t k = 0; k < E.size(); ++k) {
      const cplx s = E.points()[k];
      const auto want = oracle::substitute(g, oracle::to_poly(h), std::pow(s, w.sigma()), std::pow(s, w.tau()), 24);
      const auto scale = oracle::substitute_abs(g, oracle::to_poly(h), std::pow(std::abs(s), w.sigma()),
                                                std::pow(std::abs(s), w.tau()), 24);
      EXPECT_EQ(rep.rows[k].param, s);
      for (int n = 0; n <= 24; ++n) {
        const double got = std::exp(rep.rows[k].ledger[n]);
        EXPECT_LE(std::abs(got - std::abs(want[n])), 1e-9 * std::max(1.0, std::abs(scale[n])));
      }
    }
  }
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(5);
  const Series2 g = oracle::random_series2(rng, 30);
  const Series1 h = oracle::random_curve(rng, 30);
  DiagnosticConfig one, many;
  many.threads = 4;
  const SampleSet E = arc_sample(1.5, 0.0, 3.0, 8.0);
  const SweepReport a = restriction_sweep(g, h, WeightPair(1, 2), E, one);
  const SweepReport b = restriction_sweep(g, h, WeightPair(1, 2), E, many);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].param, b.rows[k].param);
    EXPECT_EQ(a.rows[k].ledger.levels(), b.rows[k].ledger.levels());
    EXPECT_EQ(a.rows[k].report.slope, b.rows[k].report.slope);
  }
}

TEST(Sweep, Preconditions) {
  EXPECT_THROW(restriction_sweep(Series2(10), Series1::monomial(10, 1), WeightPair(2, 2), unit_circle(8.0)),
               precondition_error);
  Series1 h = Series1::monomial(10, 1);
  h[0] = 1.0;
  EXPECT_THROW(restriction_sweep(Series2(10), h, WeightPair(1, 1), unit_circle(8.0)), precondition_error);
}

TEST(Certificate, SingleTermTable) {
  Series2 g(10);
  g.at(1, 1) = 1.0;
  const Series1 h = Series1::monomial(10, 2);
  const DTable d = d_table(g, h, WeightPair(1, 1));
  const BoundCertificate c = filtration_level(d, segment_sample(1.0, 2.0, 32.0), 10, &h);
  ASSERT_TRUE(c.filtration_found);
  // u_3(s) = s^2 <= 4, and 2^3 = 8 is the first integer cube above 4
  EXPECT_EQ(c.n_filter, 2);
  EXPECT_DOUBLE_EQ(c.M, 2.0);
  EXPECT_TRUE(c.valid);
  EXPECT_TRUE(std::isfinite(c.C));
  EXPECT_TRUE(std::isfinite(c.r));
  EXPECT_TRUE(std::isfinite(c.L));
  EXPECT_TRUE(std::isfinite(c.K));
}

TEST(Certificate, ZeroSeries) {
  const DTable d = d_table(Series2(8), Series1::monomial(8, 1), WeightPair(1, 2));
  const BoundCertificate c = filtration_level(d, segment_sample(1.0, 2.0, 16.0), 8);
  EXPECT_EQ(c.n_filter, 1);
  EXPECT_TRUE(c.valid);
}

TEST(Certificate, FiniteSetSkipsBernsteinStep) {
  Series2 g(8);
  g.at(1, 1) = 1.0;
  const DTable d = d_table(g, Series1::monomial(8, 2), WeightPair(1, 1));
  const BoundCertificate c = filtration_level(d, finite_set({1.0, 2.0}), 8);
  EXPECT_TRUE(c.filtration_found);
  EXPECT_FALSE(c.valid);
  EXPECT_NE(c.note.find("Bernstein"), std::string::npos);
}

TEST(Certificate, SoundnessRecheck) {
  std::mt19937_64 rng(6);
  const std::vector<WeightPair> weights{{1, 1}, {1, 2}, {2, -1}, {1, -1}, {0, -1}};
  const SampleSet E = segment_sample(1.0, 2.0, 15.0);
  int validated = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const WeightPair w = weights[trial % weights.size()];
    const Series2 g = oracle::random_series2(rng, 16);
    const Series1 h = oracle::random_curve(rng, 16);
    const DTable d = d_table(g, h, w);
    const BoundCertificate c = filtration_level(d, E, 16, &h);
    ASSERT_TRUE(c.filtration_found);
    const double n = static_cast<double>(c.n_filter);
    for (const cplx& s : E.points()) {
      const auto u = oracle::substitute(g, oracle::to_poly(h), std::pow(s, w.sigma()), std::pow(s, w.tau()), 16);
      for (int p = 1; p <= 16; ++p) EXPECT_LE(std::abs(u[p]), std::pow(n, p) * (1.0 + 1e-9));
    }
    if (!c.valid) continue;
    ++validated;
    for (int p = 1; p <= 16; ++p)
      for (int q = d.q_min(p); q <= d.q_max(p); ++q) EXPECT_LE(std::abs(d(p, q)), std::pow(c.C, p) * (1.0 + 1e-9));
  }
  EXPECT_GT(validated, 0);
}

TEST(Malgrange, IdentityInY) {
  Series2 g(30);
  g.at(0, 1) = 1.0;
  const MalgrangeReport r = malgrange_scenario(g, factorial_series(30));
  EXPECT_EQ(r.h.verdict, Verdict::divergent);
  EXPECT_EQ(r.composed.verdict, Verdict::divergent);
  EXPECT_TRUE(r.contrapositive_instance);
  EXPECT_TRUE(r.contrapositive_confirmed);
  EXPECT_TRUE(r.consistent);
}

TEST(Malgrange, GeometricTimesY) {
  Series2 g(30);
  for (int i = 0; i < 30; ++i) g.at(i, 1) = 1.0;
  Series1 h(30);
  for (int n = 1; n <= 30; ++n) h[n] = std::pow(static_cast<double>(n), n);
  const MalgrangeReport r = malgrange_scenario(g, h);
  EXPECT_EQ(r.g.verdict, Verdict::convergent);
  EXPECT_EQ(r.composed.verdict, Verdict::divergent);
  EXPECT_TRUE(r.contrapositive_confirmed);
}

TEST(Malgrange, ConvergentPair) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const MalgrangeReport r = malgrange_scenario(oracle::random_series2(rng, 30), oracle::random_curve(rng, 30));
    EXPECT_EQ(r.composed.verdict, Verdict::convergent);
    EXPECT_TRUE(r.premises_hold);
    EXPECT_TRUE(r.consistent);
  }
}

TEST(Malgrange, RequiresYDependence) {
  Series2 g(10);
  g.at(3, 0) = 1.0;
  EXPECT_THROW(malgrange_scenario(g, Series1::monomial(10, 1)), precondition_error);
}

TEST(Taylor, CentralWeights) {
  // second derivative on three nodes: 1, -2, 1
  const auto w = central_weights(2, 1);
  EXPECT_NEAR(w[0], 1.0, 1e-14);
  EXPECT_NEAR(w[1], -2.0, 1e-14);
  EXPECT_NEAR(w[2], 1.0, 1e-14);
}

TEST(Taylor, ZeroFunction) {
  const TaylorExtraction t = taylor_from_samples([](double, double) { return cplx{}; }, 6, 0.1);
  EXPECT_TRUE(t.series.is_zero());
  EXPECT_FALSE(t.flat);
}

TEST(Taylor, Exponential) {
  const TaylorExtraction t = taylor_from_samples(exp_sum, 6, 1e-2);
  double err = 0.0;
  for (int n = 0; n <= 6; ++n)
    for (int j = 0; j <= n; ++j)
      err = std::max(err, std::abs(t.series.at(n - j, j) - 1.0 / (std::tgamma(n - j + 1.0) * std::tgamma(j + 1.0))));
  EXPECT_LE(err, 1e-4);
  EXPECT_GT(t.error_estimate, 0.0);
  EXPECT_FALSE(t.flat);
}

TEST(Taylor, PolynomialsExact) {
  std::mt19937_64 rng(8);
  for (int order : {2, 5, 8, 10}) {
    const Series2 p = oracle::random_series2(rng, order);
    const TaylorExtraction t = taylor_from_samples([&](double x, double y) { return p.eval(x, y); }, order, 0.5);
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_LE(std::abs(t.series.raw()[k] - p.raw()[k]), 1e-8) << order;
  }
}

TEST(Taylor, FlatFunction) {
  const TaylorExtraction t = taylor_from_samples(flat_fn, 6, 1e-2);
  for (std::size_t k = 0; k < t.series.size(); ++k) EXPECT_LE(std::abs(t.series.raw()[k]), 1e-8);
  EXPECT_GT(std::abs(flat_fn(0.1, 0.0)), 0.0);
  EXPECT_TRUE(t.flat);
}

TEST(Taylor, Rejections) {
  EXPECT_THROW(taylor_from_samples(exp_sum, 11, 0.1), precondition_error);
  EXPECT_THROW(taylor_from_samples([](double x, double) { return cplx{1.0 / x}; }, 4, 0.1), precondition_error);
}

TEST(CurveFamily, EntireFunctionRotations) {
  std::vector<cplx> angles;
  for (int k = 0; k < 16; ++k) angles.push_back(2.0 * kPi * k / 16);
  const CurveFamilyReport r = curve_family_test(exp_sum, Series1::monomial(10, 2), CurveFamily::rotation,
                                                finite_set(angles), 10, 0.25);
  EXPECT_TRUE(r.sweep.all_convergent);
  EXPECT_EQ(r.sweep.g_report.verdict, Verdict::convergent);
  EXPECT_FALSE(r.flat);
  EXPECT_TRUE(r.analytic);
}

TEST(CurveFamily, FlatFunctionBlocksAnalyticVerdict) {
  std::vector<cplx> params{0.5, 1.0, 2.0, -1.0};
  const CurveFamilyReport r = curve_family_test(flat_fn, Series1::monomial(10, 2), CurveFamily::dilation,
                                                finite_set(params), 10, 0.02);
  EXPECT_TRUE(r.flat);
  EXPECT_FALSE(r.analytic);
}

TEST(CurveFamily, PolynomialDilations) {
  auto f = [](double x, double y) { return cplx{1.0 + x * y - 2.0 * y * y + x * x * x}; };
  Series1 gamma(10);
  gamma[1] = 1.0;
  gamma[2] = 0.5;
  const CurveFamilyReport r =
      curve_family_test(f, gamma, CurveFamily::dilation, finite_set({0.5, 1.0, 2.0, -1.5}), 10, 0.5);
  EXPECT_TRUE(r.sweep.all_convergent);
  EXPECT_TRUE(r.analytic);
}

TEST(CurveFamily, LinearCurveRejectedForDilations) {
  EXPECT_THROW(curve_family_test(exp_sum, Series1::monomial(10, 1), CurveFamily::dilation, finite_set({1.0, 2.0}), 10,
                                 0.25),
               precondition_error);
}
