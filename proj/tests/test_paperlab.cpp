#include <gtest/gtest.h>

#include <cmath>

#include "fpslab/paperlab.hpp"
#include "oracles.hpp"

using namespace fpslab;

namespace {

double relative_gap(const Series1& got, const Series1& want, const Series1& scale) {
  double worst = 0.0;
  for (int n = 0; n <= got.order(); ++n) {
    const cplx w = n <= want.order() ? want[n] : cplx{};
    worst = std::max(worst, std::abs(got[n] - w) / std::max(1.0, std::abs(scale[n])));
  }
  return worst;
}

Series1 poly(std::vector<cplx> c) { return Series1(std::move(c)); }

}  // namespace

TEST(FiniteSetGenerator, SinglePointBinomialRows) {
  Example31Spec spec;
  spec.E = {1.0};
  spec.order = 80;
  spec.safe_degree = 40;
  const ExampleInstance inst = gen_example31(spec);
  EXPECT_TRUE(inst.identities_hold());
  for (int n = 1; n <= 40; ++n) {
    const double nn = std::pow(static_cast<double>(n), n);
    // a_{0n} = delta_n^-n = n^n because P_n is monic
    EXPECT_NEAR(inst.g.at(0, n).real() / nn, 1.0, 1e-12);
    for (int k = 0; k <= n; ++k) {
      const double want = nn * oracle::binomial(n, k) * ((n - k) % 2 ? -1.0 : 1.0);
      EXPECT_LE(std::abs(inst.g.at(n - k, k) - want), 1e-12 * std::abs(want)) << n << "," << k;
    }
  }
  const Series1 r = directional_restrict(inst.g, 1.0, 1.0);
  EXPECT_EQ(r[0], cplx{1.0});
  for (int n = 1; n <= 40; ++n) {
    double scale = 0.0;
    for (int k = 0; k <= n; ++k) scale += std::abs(inst.g.at(n - k, k));
    EXPECT_LE(std::abs(r[n]), 1e-12 * scale);
  }
}

TEST(FiniteSetGenerator, TwoPointsBoundedRestrictionsDivergentLedger) {
  Example31Spec spec;
  spec.E = {1.0, -1.0};
  const ExampleInstance inst = gen_example31(spec);
  EXPECT_TRUE(inst.identities_hold());
  for (const cplx s : spec.E) {
    const Series1 r = directional_restrict(inst.g, 1.0, s);
    for (int n = 0; n <= inst.g.order(); ++n) {
      double scale = 0.0;
      for (int k = 0; k <= n; ++k) scale += std::abs(inst.g.at(n - k, k));
      EXPECT_LE(std::abs(r[n]), 1.0 + 1e-12 * scale);
    }
  }
  for (int n = 1; n <= 200; ++n) EXPECT_GE(inst.g_ledger[n], n * std::log(n) - 1e-9);
  EXPECT_EQ(growth_classify(inst.g_ledger).verdict, Verdict::divergent);
}

TEST(FiniteSetGenerator, AnyFiniteSetIsDivergent) {
  for (const std::vector<cplx>& E : {std::vector<cplx>{2.0}, std::vector<cplx>{cplx{0.0, 1.0}, 0.5, -3.0},
                                     std::vector<cplx>{1.0, 2.0, 3.0, 4.0, 5.0}}) {
    Example31Spec spec;
    spec.E = E;
    spec.delta = [](int n) { return 1.0 / std::sqrt(n + 1.0); };
    spec.delta_label = "1/sqrt(n+1)";
    const ExampleInstance inst = gen_example31(spec);
    EXPECT_EQ(growth_classify(inst.g_ledger).verdict, Verdict::divergent);
  }
}

TEST(FiniteSetGenerator, CertificateForRestrictions) {
  Example31Spec spec;
  spec.E = {1.0, -1.0};
  const ExampleInstance inst = gen_example31(spec);
  const SampleSet E = finite_set(spec.E);
  const DTable d = d_table(inst.g.truncated(12), inst.h.truncated(12), WeightPair(0, -1));
  // weights (0,1) normalize to (0,-1) with parameters inverted; E is closed under inversion
  const BoundCertificate c = filtration_level(d, E, 12);
  EXPECT_TRUE(c.filtration_found);
  EXPECT_EQ(c.n_filter, 1);
}

TEST(FiniteSetGenerator, Rejections) {
  EXPECT_THROW(gen_example31(Example31Spec{}), precondition_error);
}

TEST(MonomialCurveGenerator, LinearCaseVanishes) {
  const ExampleInstance inst = gen_example32(1, 1);
  EXPECT_TRUE(inst.identities_hold());
  for (const cplx s : {cplx{0.7}, cplx{1.0, 1.0}}) {
    const Series1 r = anisotropic_substitute(inst.g, inst.h, inst.weights, s);
    for (int n = 0; n <= r.order(); ++n) EXPECT_EQ(r[n], cplx{});
  }
}

TEST(MonomialCurveGenerator, SquareCaseAtTwo) {
  GeneratorOptions opt;
  opt.order = 40;
  const ExampleInstance inst = gen_example32(2, 1, DivergentFamily::power, opt);
  EXPECT_TRUE(inst.identities_hold());
  const Series1 r = anisotropic_substitute(inst.g, inst.h, inst.weights, 2.0);
  const Series1 scale = substitution_scale(inst.g, inst.h, inst.weights, 2.0);
  EXPECT_LE(relative_gap(r, Series1(40), scale), 1e-12);
  EXPECT_EQ(growth_classify(inst.g_ledger).verdict, Verdict::divergent);
  EXPECT_EQ(growth_classify(inst.phi_ledger).verdict, Verdict::divergent);
  const SweepReport rep = restriction_sweep(inst.g, inst.h, inst.weights, segment_sample(1.0, 2.0, 7.0));
  EXPECT_TRUE(rep.all_convergent);
}

TEST(MonomialCurveGenerator, FactorialFamily) {
  const ExampleInstance inst = gen_example32(3, 2, DivergentFamily::factorial);
  EXPECT_TRUE(inst.identities_hold());
  EXPECT_EQ(growth_classify(inst.g_ledger).verdict, Verdict::divergent);
}

TEST(NegativeWeightGenerator, ConvergentStandIn) {
  const ExampleInstance inst = gen_example33(WeightPair(1, -1), poly({0, 1, 1}));
  EXPECT_TRUE(inst.identities_hold());
  const Series1 h = inst.h.truncated(30);
  for (const cplx s : {cplx{1.0}, cplx{2.0}, cplx{0.0, 1.0}}) {
    const Series1 r = anisotropic_substitute(inst.g, h, inst.weights, s);
    const Series1 scale = substitution_scale(inst.g, h, inst.weights, s);
    EXPECT_LE(relative_gap(r, Series1::monomial(30, 2), scale), 1e-9);
  }
}

TEST(NegativeWeightGenerator, DivergentDefault) {
  const ExampleInstance inst = gen_example33(WeightPair(1, -1));
  EXPECT_TRUE(inst.identities_hold());
  EXPECT_EQ(growth_classify(inst.phi_ledger).verdict, Verdict::divergent);
  EXPECT_EQ(growth_classify(inst.h_ledger).verdict, Verdict::divergent);
  EXPECT_EQ(growth_classify(inst.g_ledger).verdict, Verdict::divergent);
}

TEST(NegativeWeightGenerator, DefiningRelationForSigmaTwo) {
  const ExampleInstance inst = gen_example33(WeightPair(2, -1));
  EXPECT_TRUE(inst.identities_hold());
  const Series1 h = inst.h.truncated(30);
  const Series1 lhs = shift_up(pow(h, 2), 1).truncated(30);
  const Series1 u = default_u(40);
  const Series1 rhs = compose1(u, Series1::monomial(40, 3)).truncated(30);
  const Series1 scale = shift_up(pow(abs_series(h), 2), 1).truncated(30);
  EXPECT_LE(relative_gap(lhs, rhs, scale), 1e-9);
}

TEST(NegativeWeightGenerator, GeneratorMatchesSeriesCoreExactly) {
  GeneratorOptions opt;
  const ExampleInstance inst = gen_example33(WeightPair(1, -1), std::nullopt, opt);
  const int S = std::max(opt.safe_degree, opt.order);
  const Series1 u = default_u(S + 2);
  const Series1 phi = reversion(u.truncated(S));
  const Series1 h = nth_root(shift_down(compose1(u, Series1::monomial(S + 1, 2)), 1), 1);
  ASSERT_TRUE(inst.phi.has_value());
  ASSERT_EQ(inst.phi->order(), phi.order());
  for (int n = 0; n <= phi.order(); ++n) EXPECT_EQ((*inst.phi)[n], phi[n]);
  ASSERT_EQ(inst.h.order(), h.order());
  for (int n = 0; n <= h.order(); ++n) EXPECT_EQ(inst.h[n], h[n]);
}

TEST(NegativeWeightGenerator, Rejections) {
  EXPECT_THROW(gen_example33(WeightPair(1, 1)), precondition_error);
  EXPECT_THROW(gen_example33(WeightPair(1, -1), poly({0, 2, 1})), precondition_error);
}

TEST(ZeroWeightGenerator, IdentityCurve) {
  const ExampleInstance inst = gen_example33b(Series1::monomial(1, 1));
  EXPECT_TRUE(inst.identities_hold());
  ASSERT_TRUE(inst.phi.has_value());
  EXPECT_EQ((*inst.phi)[1], cplx{1.0});
  for (int n = 2; n <= inst.phi->order(); ++n) EXPECT_EQ((*inst.phi)[n], cplx{});
  EXPECT_EQ(inst.g.at(1, 1), cplx{1.0});
}

TEST(ZeroWeightGenerator, DivergentDefault) {
  const ExampleInstance inst = gen_example33b();
  EXPECT_TRUE(inst.identities_hold());
  EXPECT_EQ(growth_classify(inst.phi_ledger).verdict, Verdict::divergent);
  EXPECT_EQ(growth_classify(inst.h_ledger).verdict, Verdict::divergent);
}

TEST(ZeroWeightGenerator, GeometricQuotient) {
  GeneratorOptions opt;
  opt.order = 40;
  const ExampleInstance inst = gen_example33b(poly({0, 1, 1}), opt);
  EXPECT_TRUE(inst.identities_hold());
  for (int n = 1; n <= 40; ++n) EXPECT_NEAR(std::abs((*inst.phi)[n] - cplx{n % 2 ? 1.0 : -1.0}), 0.0, 1e-10);
  EXPECT_THROW(gen_example33b(Series1::monomial(4, 2)), precondition_error);
}

TEST(Scenario, DilatedCurvesPositiveInstance) {
  ScenarioInputs in = convergent_fixture(ScenarioKind::cor15, 3);
  in.h = Series1::monomial(30, 2);
  const ScenarioReport r = run_scenario(ScenarioKind::cor15, in);
  EXPECT_TRUE(r.hypotheses_satisfied);
  EXPECT_TRUE(r.sweep.all_convergent);
  EXPECT_EQ(r.sweep.rows.size(), 16u);
  EXPECT_EQ(r.conclusion.verdict, Verdict::convergent);
  EXPECT_TRUE(r.consistent);
}

TEST(Scenario, MonomialCurveReportsHypothesisViolation) {
  const ExampleInstance inst = gen_example32(2, 1);
  ScenarioInputs in;
  in.g = inst.g;
  in.h = inst.h;
  in.weights = inst.weights;
  in.E = segment_sample(1.0, 2.0, 31.0);
  const ScenarioReport r = run_scenario(ScenarioKind::thm11, in);
  bool guard_fired = false;
  for (const auto& c : r.hypotheses)
    if (c.name == "monomial_exclusion") guard_fired = !c.satisfied;
  EXPECT_TRUE(guard_fired);
  EXPECT_FALSE(r.hypotheses_satisfied);
  EXPECT_TRUE(r.sweep.all_convergent);
  EXPECT_EQ(r.conclusion.verdict, Verdict::divergent);
  EXPECT_TRUE(r.consistent);
}

TEST(Scenario, RotationsOfBinomialSeries) {
  ScenarioInputs in = convergent_fixture(ScenarioKind::thm16, 1);
  in.g = Series2(30);
  for (int n = 0; n <= 30; ++n)
    for (int j = 0; j <= n; ++j) in.g.at(n - j, j) = oracle::binomial(n, j);
  in.h = Series1::monomial(30, 2);
  const ScenarioReport r = run_scenario(ScenarioKind::thm16, in);
  EXPECT_EQ(r.sweep.rows.size(), 12u);
  EXPECT_TRUE(r.sweep.all_convergent);
  EXPECT_EQ(r.conclusion.verdict, Verdict::convergent);
  EXPECT_LE(r.conjugation_discrepancy, 1e-9);
  EXPECT_TRUE(r.consistent);
}

TEST(Scenario, CompositionNeedsYDependence) {
  ScenarioInputs in;
  in.g = Series2(20);
  in.g.at(2, 0) = 1.0;
  in.h = Series1::monomial(20, 1);
  const ScenarioReport r = run_scenario(ScenarioKind::thm13, in);
  EXPECT_FALSE(r.hypotheses_satisfied);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Scenario, DilatedCurvesLinearGuard) {
  ScenarioInputs in = convergent_fixture(ScenarioKind::cor15, 2);
  in.h = Series1::monomial(30, 1);
  const ScenarioReport r = run_scenario(ScenarioKind::cor15, in);
  EXPECT_FALSE(r.hypotheses_satisfied);
  EXPECT_TRUE(r.consistent);
}

TEST(Scenario, WeightedSweepNeedsPositiveProduct) {
  ScenarioInputs in = convergent_fixture(ScenarioKind::thm12, 4);
  in.weights = WeightPair(1, -1);
  const ScenarioReport r = run_scenario(ScenarioKind::thm12, in);
  EXPECT_FALSE(r.hypotheses_satisfied);
}

TEST(Scenario, FiniteParameterSetFailsCapacityGuard) {
  ScenarioInputs in = convergent_fixture(ScenarioKind::thm11, 5);
  in.E = finite_set({1.0, 2.0});
  const ScenarioReport r = run_scenario(ScenarioKind::thm11, in);
  EXPECT_FALSE(r.hypotheses_satisfied);
}

TEST(Scenario, ParseNames) {
  for (const ScenarioKind k :
       {ScenarioKind::thm11, ScenarioKind::thm12, ScenarioKind::thm13, ScenarioKind::cor15, ScenarioKind::thm16})
    EXPECT_EQ(parse_scenario(to_string(k)), k);
  EXPECT_THROW(parse_scenario("thm99"), std::invalid_argument);
}

TEST(Scenario, ConsistencyOverFiftySeeds) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    for (const ScenarioKind k :
         {ScenarioKind::thm11, ScenarioKind::thm12, ScenarioKind::thm13, ScenarioKind::cor15, ScenarioKind::thm16}) {
      const ScenarioReport r = run_scenario(k, convergent_fixture(k, seed));
      EXPECT_TRUE(r.hypotheses_satisfied) << to_string(k) << " seed " << seed;
      EXPECT_TRUE(r.consistent) << to_string(k) << " seed " << seed;
      EXPECT_NE(r.conclusion.verdict, Verdict::divergent) << to_string(k) << " seed " << seed;
    }
  }
}
