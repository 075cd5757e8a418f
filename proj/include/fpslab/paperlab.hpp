#ifndef FPSLAB_PAPERLAB_HPP
#define FPSLAB_PAPERLAB_HPP

// Counterexample generators showing the hypotheses of the restriction
// theorems cannot be dropped, and scenario runners that sweep the hypotheses
// of each theorem and compare with its conclusion.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fpslab/common.hpp"
#include "fpslab/diagnostics.hpp"
#include "fpslab/potential.hpp"
#include "fpslab/series.hpp"

namespace fpslab {

struct IdentityCheck {
  std::string name;
  bool passed = true;
  double max_error = 0.0;
  std::string detail;
};

struct ExampleInstance {
  std::string example;
  std::map<std::string, std::string> params;
  WeightPair weights{0, 1};
  /// Two-variable series on the double-precision window, ledger to full order.
  Series2 g;
  MagnitudeLedger g_ledger;
  Series1 h;
  MagnitudeLedger h_ledger;
  /// One-variable building block (phi) when the construction has one.
  std::optional<Series1> phi;
  MagnitudeLedger phi_ledger;
  std::vector<IdentityCheck> checks;

  bool identities_hold() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

enum class DivergentFamily { power, factorial };

/// log|phi_n| for phi = sum n^n x^n or sum n! x^n (n >= 1).
inline double divergent_log_coefficient(DivergentFamily fam, int n) {
  if (n < 1) return kNegInf;
  return fam == DivergentFamily::power ? n * std::log(static_cast<double>(n)) : std::lgamma(n + 1.0);
}

inline Series1 divergent_series(DivergentFamily fam, int order) {
  Series1 out(order);
  for (int n = 1; n <= order; ++n) out[n] = std::exp(divergent_log_coefficient(fam, n));
  return out;
}

inline const char* to_string(DivergentFamily fam) { return fam == DivergentFamily::power ? "n^n" : "n!"; }

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string format_cplx(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Parameters for construction checks: |s| in [0.5, 2], uniform angle.
inline std::vector<cplx> random_parameters(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mod(0.5, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::vector<cplx> out;
  for (int k = 0; k < count; ++k) {
    const double r = mod(rng);
    out.push_back(std::polar(r, ang(rng)));
  }
  return out;
}

/// max_n |got_n - want_n| / max(1, scale_n) over the coefficients.
inline double scaled_error(const Series1& got, const Series1& want, const Series1& scale) {
  double worst = 0.0;
  for (int n = 0; n <= got.order(); ++n) {
    const cplx w = n <= want.order() ? want[n] : cplx{};
    const double sc = n <= scale.order() ? std::max(1.0, scale[n].real()) : 1.0;
    worst = std::max(worst, std::abs(got[n] - w) / sc);
  }
  return worst;
}

/// Polynomial with coefficients stored as coeffs * exp(log_scale), max |coeffs| = 1.
struct ScaledPoly {
  std::vector<cplx> coeffs{1.0};  // coeffs[k] multiplies x^k
  double log_scale = 0.0;

  void multiply_linear(cplx root) {
    std::vector<cplx> next(coeffs.size() + 1, cplx{});
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k + 1] += coeffs[k];
      next[k] -= root * coeffs[k];
    }
    double big = 0.0;
    for (const cplx& c : next) big = std::max(big, std::abs(c));
    for (cplx& c : next) c /= big;
    log_scale += std::log(big);
    coeffs = std::move(next);
  }

  double log_max() const {
    double big = 0.0;
    for (const cplx& c : coeffs) big = std::max(big, std::abs(c));
    return std::log(big) + log_scale;
  }
};

}  // namespace detail

inline constexpr double kIdentityTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Finite parameter set: every restriction bounded, g divergent
// ---------------------------------------------------------------------------

struct Example31Spec {
  std::vector<cplx> E;
  /// Positive, decreasing to 0; delta(n) for n >= 1.
  std::function<double(int)> delta = [](int n) { return 1.0 / n; };
  std::string delta_label = "1/n";
  int order = 200;
  int safe_degree = 60;
};

/// g = sum delta_n^-n P_n(x, y) with P_n monic of small sup on E, so that
/// g(x, s x) = sum delta_n^-n P_n(s) x^n has coefficients of modulus <= 1 for s in E.
///
/// P_n = prod (x - e) over the points of E cycled to degree n once n >= |E|,
/// vanishing on E. Below |E| the generator uses (x - c)^n with c the centroid
/// of E; the bound check reports any degree where that exceeds delta_n^n.
inline ExampleInstance gen_example31(const Example31Spec& spec) {
  if (spec.E.empty()) throw precondition_error("finite-set generator needs a nonempty finite E");
  for (const cplx& e : spec.E)
    if (!is_finite(e)) throw precondition_error("finite-set generator needs finite points in E");
  if (spec.order < 1 || spec.safe_degree < 0) throw precondition_error("finite-set generator needs order >= 1");
  const int N = spec.order;
  const int safe = std::min(spec.safe_degree, N);
  const std::size_t m = spec.E.size();
  std::vector<double> logdelta(N + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    const double d = spec.delta(n);
    if (!(d > 0.0) || !std::isfinite(d)) throw precondition_error("delta_n must be positive and finite");
    if (n > 1 && d > spec.delta(n - 1)) throw precondition_error("delta_n must be non-increasing");
    logdelta[n] = std::log(d);
  }
  cplx centroid{};
  for (const cplx& e : spec.E) centroid += e;
  centroid /= static_cast<double>(m);

  ExampleInstance inst;
  inst.example = "example31";
  inst.weights = WeightPair(0, 1);
  {
    std::string pts;
    for (const cplx& e : spec.E) pts += (pts.empty() ? "" : ",") + detail::format_cplx(e);
    inst.params = {{"E", pts},
                   {"delta", spec.delta_label},
                   {"order", std::to_string(N)},
                   {"safe_degree", std::to_string(safe)},
                   {"small_degree_center", detail::format_cplx(centroid)}};
  }
  // Coefficient of x^k in P_n is b_{n, n-k}.
  std::vector<double> ledger(N + 1, kNegInf);
  inst.g = Series2(safe);
  detail::ScaledPoly cyc;
  detail::ScaledPoly centered;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) {
      const cplx r = spec.E[(n - 1) % m];
      cyc.multiply_linear(r);
      centered.multiply_linear(centroid);
    }
    const bool vanishing = static_cast<std::size_t>(n) >= m;
    const detail::ScaledPoly& P = vanishing ? cyc : centered;
    ledger[n] = -n * logdelta[n] + P.log_max();
    if (n <= safe) {
      const double factor = std::exp(-n * logdelta[n] + P.log_scale);
      for (int k = 0; k <= n; ++k) inst.g.at(n - k, k) = factor * P.coeffs[k];
    }
  }
  inst.g_ledger = MagnitudeLedger(ledger);
  inst.h = Series1::monomial(safe, 1);
  inst.h_ledger = MagnitudeLedger::of(inst.h);

  // |delta_n^-n P_n(s)| <= 1 on E, in log-product form over all degrees.
  IdentityCheck bound{"restrictions bounded by 1 on E", true, 0.0, ""};
  std::string violations;
  for (const cplx& s : spec.E) {
    double logp = 0.0;
    for (int n = 0; n <= N; ++n) {
      if (static_cast<std::size_t>(n) >= m) {
        logp = kNegInf;  // P_n has every point of E as a root
      } else {
        logp = n * safe_log_abs(s - centroid);
      }
      const double v = logp == kNegInf ? kNegInf : -n * logdelta[n] + logp;
      if (v > 1e-12) {
        bound.passed = false;
        violations += (violations.empty() ? "" : ";") + std::to_string(n) + "@" + detail::format_cplx(s);
      }
      if (v != kNegInf) bound.max_error = std::max(bound.max_error, std::exp(v) - 1.0);
    }
  }
  bound.max_error = std::max(0.0, bound.max_error);
  bound.detail = violations.empty() ? "vanishing for n >= |E|" : "exceeds 1 at degree@s " + violations;
  inst.checks.push_back(bound);

  // P_n is monic, so a_{0n} = delta_n^-n: compare the column entry of the
  // ledger against an independent product rebuild.
  IdentityCheck column{"column i=0 ledger equals -n log delta_n", true, 0.0, ""};
  {
    detail::ScaledPoly cyc2;
    detail::ScaledPoly cen2;
    for (int n = 0; n <= N; ++n) {
      if (n > 0) {
        cyc2.multiply_linear(spec.E[(n - 1) % m]);
        cen2.multiply_linear(centroid);
      }
      const detail::ScaledPoly& P = static_cast<std::size_t>(n) >= m ? cyc2 : cen2;
      const double lead = std::log(std::abs(P.coeffs[n])) + P.log_scale;
      column.max_error = std::max(column.max_error, std::abs(lead));
    }
    column.passed = column.max_error <= 1e-9;
  }
  inst.checks.push_back(column);

  // Double-precision cross-check on the safe window: g(x, s x) against the product form.
  IdentityCheck cross{"g(x, s x) = sum delta_n^-n P_n(s) x^n on the safe window", true, 0.0, ""};
  for (const cplx& s : spec.E) {
    const Series1 r = directional_restrict(inst.g, 1.0, s);
    for (int n = 0; n <= safe; ++n) {
      cplx want{};
      if (static_cast<std::size_t>(n) < m) want = std::exp(-n * logdelta[n]) * ipow(s - centroid, n);
      double scale = 0.0;
      for (int k = 0; k <= n; ++k) scale += std::abs(inst.g.at(n - k, k)) * std::pow(std::abs(s), k);
      cross.max_error = std::max(cross.max_error, std::abs(r[n] - want) / std::max(1.0, scale));
    }
  }
  cross.passed = cross.max_error <= kIdentityTolerance;
  inst.checks.push_back(cross);
  return inst;
}

// ---------------------------------------------------------------------------
// Monomial curve: every restriction vanishes, g divergent
// ---------------------------------------------------------------------------

struct GeneratorOptions {
  int order = 30;
  int ledger_order = 200;
  int safe_degree = 60;
  std::uint64_t seed = 1;
  int check_count = 5;
};

/// g = phi(x^k) - phi(y), h = x^k, weights (sigma, sigma k).
inline ExampleInstance gen_example32(int k, int sigma, DivergentFamily fam = DivergentFamily::power,
                                     const GeneratorOptions& opt = {}) {
  if (k < 1 || sigma < 1) throw precondition_error("monomial-curve generator needs positive k and sigma");
  if (opt.order < 1 || opt.order > opt.safe_degree)
    throw precondition_error("monomial-curve generator order must lie in [1, safe_degree]");
  ExampleInstance inst;
  inst.example = "example32";
  inst.weights = WeightPair(sigma, sigma * k);
  inst.params = {{"k", std::to_string(k)},
                 {"sigma", std::to_string(sigma)},
                 {"phi", to_string(fam)},
                 {"order", std::to_string(opt.order)},
                 {"ledger_order", std::to_string(opt.ledger_order)},
                 {"seed", std::to_string(opt.seed)}};
  const int N = opt.order;
  inst.g = Series2(N);
  for (int n = 1; n <= N; ++n) {
    const double c = std::exp(divergent_log_coefficient(fam, n));
    inst.g.at(0, n) -= c;
    if (k * n <= N) inst.g.at(k * n, 0) += c;
  }
  std::vector<double> ledger(opt.ledger_order + 1, kNegInf);
  for (int n = 1; n <= opt.ledger_order; ++n) {
    ledger[n] = divergent_log_coefficient(fam, n);
    if (n % k == 0) ledger[n] = std::max(ledger[n], divergent_log_coefficient(fam, n / k));
  }
  inst.g_ledger = MagnitudeLedger(ledger);
  inst.h = Series1::monomial(N, k);
  inst.h_ledger = MagnitudeLedger::of(inst.h);
  inst.phi = divergent_series(fam, opt.safe_degree);
  std::vector<double> pl(opt.ledger_order + 1, kNegInf);
  for (int n = 1; n <= opt.ledger_order; ++n) pl[n] = divergent_log_coefficient(fam, n);
  inst.phi_ledger = MagnitudeLedger(pl);

  IdentityCheck zero{"g(s^sigma x, s^(sigma k) h(x)) = 0", true, 0.0, ""};
  for (const cplx& s : detail::random_parameters(opt.seed, opt.check_count)) {
    const Series1 r = anisotropic_substitute(inst.g, inst.h, inst.weights, s);
    const Series1 scale = substitution_scale(inst.g, inst.h, inst.weights, s);
    zero.max_error = std::max(zero.max_error, detail::scaled_error(r, Series1(N), scale));
  }
  zero.passed = zero.max_error <= kIdentityTolerance;
  inst.checks.push_back(zero);
  return inst;
}

// ---------------------------------------------------------------------------
// Negative weight: restriction is a fixed monomial, components divergent
// ---------------------------------------------------------------------------

/// u = x + sum_{n>=2} n! x^n.
inline Series1 default_u(int order) {
  Series1 u = divergent_series(DivergentFamily::factorial, order);
  return u;
}

/// phi = reversion of u, x^|tau| h^sigma = u(x^(sigma+|tau|)), f = phi(x^|tau| y^sigma);
/// then f(s^sigma x, s^tau h(x)) = x^(sigma+|tau|) for every s != 0.
/// A supplied u shorter than needed is read as a polynomial.
inline ExampleInstance gen_example33(const WeightPair& w, std::optional<Series1> u_in = std::nullopt,
                                     const GeneratorOptions& opt = {}) {
  const int sigma = w.sigma();
  const int tau = w.tau();
  if (!(tau <= 0 && sigma > 0)) throw precondition_error("negative-weight generator needs tau <= 0 < sigma");
  const int m = sigma + std::abs(tau);
  const int N = opt.order;
  const int S = std::max(opt.safe_degree, N);
  if (N < 1) throw precondition_error("negative-weight generator needs order >= 1");
  const int u_order = S + m;
  Series1 u = u_in ? u_in->truncated(std::max(u_in->order(), u_order)).truncated(u_order) : default_u(u_order);
  if (u[0] != cplx{}) throw precondition_error("negative-weight generator needs u(0) = 0");
  if (u[1] != cplx{1.0}) throw precondition_error("negative-weight generator needs u'(0) = 1");

  ExampleInstance inst;
  inst.example = "example33";
  inst.weights = w;
  inst.params = {{"sigma", std::to_string(sigma)},
                 {"tau", std::to_string(tau)},
                 {"u", u_in ? "supplied" : "x+sum n! x^n"},
                 {"order", std::to_string(N)},
                 {"safe_degree", std::to_string(S)},
                 {"seed", std::to_string(opt.seed)}};
  const Series1 phi = reversion(u.truncated(S));
  const Series1 um = compose1(u, Series1::monomial(S + m - 1, m));
  const Series1 h = nth_root(shift_down(um, std::abs(tau)), sigma);
  inst.phi = phi;
  inst.phi_ledger = MagnitudeLedger::of(phi);
  inst.h = h;
  inst.h_ledger = MagnitudeLedger::of(h);
  inst.g = Series2(N);
  for (int k = 1; k * m <= N; ++k) inst.g.at(k * std::abs(tau), k * sigma) = phi[k];
  {
    const Series2 big = [&] {
      Series2 f(S);
      for (int k = 1; k * m <= S; ++k) f.at(k * std::abs(tau), k * sigma) = phi[k];
      return f;
    }();
    inst.g_ledger = MagnitudeLedger::of(big);
  }

  const Series1 hN = h.truncated(N);
  IdentityCheck ident{"f(s^sigma x, s^tau h(x)) = x^(sigma+|tau|)", true, 0.0, ""};
  for (const cplx& s : detail::random_parameters(opt.seed, opt.check_count)) {
    const Series1 r = anisotropic_substitute(inst.g, hN, w, s);
    const Series1 scale = substitution_scale(inst.g, hN, w, s);
    ident.max_error = std::max(ident.max_error, detail::scaled_error(r, Series1::monomial(N, m), scale));
  }
  ident.passed = ident.max_error <= kIdentityTolerance;
  inst.checks.push_back(ident);

  IdentityCheck rel{"x^|tau| h^sigma = u(x^(sigma+|tau|))", true, 0.0, ""};
  {
    const Series1 lhs = shift_up(pow(hN, sigma), std::abs(tau)).truncated(N);
    const Series1 rhs = um.truncated(N);
    const Series1 ah = abs_series(hN);
    const Series1 sc = shift_up(pow(ah, sigma), std::abs(tau)).truncated(N);
    rel.max_error = detail::scaled_error(lhs, rhs, sc);
  }
  rel.passed = rel.max_error <= kIdentityTolerance;
  inst.checks.push_back(rel);

  IdentityCheck inv{"phi(u(x)) = x", true, 0.0, ""};
  {
    const Series1 uN = u.truncated(N);
    const Series1 back = compose1(phi.truncated(N), uN);
    const Series1 scale = compose1(abs_series(phi.truncated(N)), abs_series(uN));
    inv.max_error = detail::scaled_error(back, Series1::monomial(N, 1), scale);
  }
  inv.passed = inv.max_error <= kIdentityTolerance;
  inst.checks.push_back(inv);
  return inst;
}

/// Weights (0, 1): phi = x^2 / h, f = phi(x) y, f(x, s h(x)) = s x^2.
inline ExampleInstance gen_example33b(std::optional<Series1> h_in = std::nullopt, const GeneratorOptions& opt = {}) {
  const int N = opt.order;
  const int S = std::max(opt.safe_degree, N);
  if (N < 2) throw precondition_error("zero-weight generator needs order >= 2");
  Series1 h = h_in ? h_in->truncated(std::max(h_in->order(), S + 1)) : default_u(S + 1);
  if (h[0] != cplx{}) throw precondition_error("zero-weight generator needs h(0) = 0");
  if (h[1] == cplx{}) throw precondition_error("zero-weight generator needs h'(0) != 0 (x^2 / h must be a power series)");
  ExampleInstance inst;
  inst.example = "example33b";
  inst.weights = WeightPair(0, 1);
  inst.params = {{"h", h_in ? "supplied" : "x+sum n! x^n"},
                 {"order", std::to_string(N)},
                 {"safe_degree", std::to_string(S)},
                 {"seed", std::to_string(opt.seed)}};
  const Series1 phi = divide(Series1::monomial(h.order(), 2), h);
  inst.phi = phi;
  inst.phi_ledger = MagnitudeLedger::of(phi);
  inst.h = h.truncated(S);
  inst.h_ledger = MagnitudeLedger::of(inst.h);
  inst.g = Series2(N);
  for (int i = 0; i + 1 <= N && i <= phi.order(); ++i) inst.g.at(i, 1) = phi[i];
  {
    Series2 big(S);
    for (int i = 0; i + 1 <= S && i <= phi.order(); ++i) big.at(i, 1) = phi[i];
    inst.g_ledger = MagnitudeLedger::of(big);
  }
  const Series1 hN = h.truncated(N);
  IdentityCheck ident{"f(x, s h(x)) = s x^2", true, 0.0, ""};
  for (const cplx& s : detail::random_parameters(opt.seed, opt.check_count)) {
    const Series1 r = anisotropic_substitute(inst.g, hN, inst.weights, s);
    const Series1 scale = substitution_scale(inst.g, hN, inst.weights, s);
    ident.max_error = std::max(ident.max_error, detail::scaled_error(r, Series1::monomial(N, 2, s), scale));
  }
  ident.passed = ident.max_error <= kIdentityTolerance;
  inst.checks.push_back(ident);
  return inst;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

enum class ScenarioKind { thm11, thm12, thm13, cor15, thm16 };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::thm11: return "thm11";
    case ScenarioKind::thm12: return "thm12";
    case ScenarioKind::thm13: return "thm13";
    case ScenarioKind::cor15: return "cor15";
    default: return "thm16";
  }
}

inline ScenarioKind parse_scenario(const std::string& name) {
  for (ScenarioKind k : {ScenarioKind::thm11, ScenarioKind::thm12, ScenarioKind::thm13, ScenarioKind::cor15,
                         ScenarioKind::thm16})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

struct ScenarioInputs {
  /// g (f for the rotation scenario).
  Series2 g;
  /// The curve h.
  Series1 h;
  std::optional<WeightPair> weights;
  /// Dilation parameters, reals for the curve-dilation scenario, angles for rotations.
  std::optional<SampleSet> E;
  /// Rows of the d-table used for the bound certificate.
  int certificate_rows = 12;
};

struct ScenarioReport {
  ScenarioKind kind = ScenarioKind::thm11;
  std::vector<HypothesisCheck> hypotheses;
  std::optional<WeightPair> weights;
  std::string e_map = "identity";
  SweepReport sweep;
  /// "g" or "h".
  std::string conclusion_target = "g";
  GrowthReport conclusion;
  bool hypotheses_satisfied = true;
  /// False when the hypotheses hold, every restriction is convergent and
  /// the conclusion still classifies divergent.
  bool consistent = true;
  std::optional<BoundCertificate> certificate;
  std::optional<MalgrangeReport> malgrange;
  /// Rotation scenario: max difference between rotate2 and the conjugated scaling.
  double conjugation_discrepancy = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline HypothesisCheck check(const std::string& name, bool ok, const std::string& msg) {
  return {name, ok, ok ? "" : msg};
}

inline HypothesisCheck capacity_guard(const SampleSet& E) {
  if (E.is_finite_set()) return check("cap(E) > 0", false, "E is a finite set: capacity 0");
  if (E.size() < 4) return check("cap(E) > 0", false, "too few samples to estimate capacity");
  const double cap = transfinite_diameter(E, std::min<std::size_t>(24, E.size())).capacity;
  return check("cap(E) > 0", cap > 1e-6, "capacity estimate " + format_double(cap) + " is not positive");
}

inline HypothesisCheck convergence_guard(const std::string& name, const GrowthReport& r) {
  return check(name, r.verdict == Verdict::convergent, std::string("classified ") + to_string(r.verdict));
}

inline const SampleSet& require_E(const ScenarioInputs& in, ScenarioKind k) {
  if (!in.E) throw precondition_error(std::string(to_string(k)) + " needs a parameter set E");
  return *in.E;
}

/// {e^(+-d) : e in E} with duplicates removed, in input order.
inline SampleSet mapped_parameters(const SampleSet& E, const EMapDescriptor& map) {
  if (map.is_identity()) return E;
  std::vector<cplx> pts;
  std::set<std::pair<double, double>> seen;
  for (const cplx& e : E.points()) {
    const cplx t = map.image(e);
    if (seen.emplace(t.real(), t.imag()).second) pts.push_back(t);
  }
  if (E.is_finite_set()) return finite_set(pts, E.label() + " mapped");
  return SampleSet(pts, E.label() + " mapped");
}

}  // namespace detail

/// Seeded inputs satisfying every hypothesis of the scenario: g with random
/// coefficients in the unit disk, h = x^2 + random terms of size <= 2^-k,
/// and the parameter set the theorem asks for.
inline ScenarioInputs convergent_fixture(ScenarioKind kind, std::uint64_t seed, int order = 30) {
  if (order < 8) throw precondition_error("fixtures need order >= 8");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto disk_value = [&] {
    for (;;) {
      const cplx z{unit(rng), unit(rng)};
      if (std::abs(z) <= 1.0) return z;
    }
  };
  ScenarioInputs in;
  in.g = Series2(order);
  for (int n = 0; n <= order; ++n)
    for (int j = 0; j <= n; ++j) in.g.at(n - j, j) = disk_value();
  in.h = Series1(order);
  in.h[2] = 1.0;
  for (int k = 3; k <= order; ++k) in.h[k] = disk_value() * std::ldexp(1.0, -k);
  switch (kind) {
    case ScenarioKind::thm11: {
      static const int choices[][2] = {{1, 1}, {1, 2}, {2, 1}, {1, -1}, {2, -1}};
      const auto& c = choices[rng() % 5];
      in.weights = WeightPair(c[0], c[1]);
      in.E = segment_sample(1.0, 2.0, 31.0);
      break;
    }
    case ScenarioKind::thm12: {
      static const int choices[][2] = {{1, 1}, {1, 2}, {2, 1}};
      const auto& c = choices[rng() % 3];
      in.weights = WeightPair(c[0], c[1]);
      in.E = segment_sample(1.0, 2.0, 31.0);
      break;
    }
    case ScenarioKind::thm13:
      break;
    case ScenarioKind::cor15: {
      std::vector<cplx> pts;
      for (int k = 0; k < 16; ++k) pts.push_back(1.0 + k / 15.0);
      in.E = SampleSet(pts, "16 reals in [1, 2]");
      break;
    }
    case ScenarioKind::thm16: {
      std::vector<cplx> pts;
      for (int k = 0; k < 12; ++k) pts.push_back(2.0 * kPi * k / 12.0);
      in.E = SampleSet(pts, "12 angles");
      break;
    }
  }
  return in;
}

/// Runs one theorem's hypothesis sweep and compares the outcome with its
/// conclusion. Failed guards are reported and the sweep still runs.
inline ScenarioReport run_scenario(ScenarioKind kind, const ScenarioInputs& in, const DiagnosticConfig& cfg = {}) {
  ScenarioReport rep;
  rep.kind = kind;
  const Series2& g = in.g;
  const Series1& h = in.h;
  if (h[0] != cplx{}) throw precondition_error("h(0) != 0: the curve must pass through the origin");
  auto& hyp = rep.hypotheses;

  switch (kind) {
    case ScenarioKind::thm11:
    case ScenarioKind::thm12: {
      if (!in.weights) throw precondition_error(std::string(to_string(kind)) + " needs weights (sigma, tau)");
      const SampleSet& E = detail::require_E(in, kind);
      const auto [w, map] = normalize_weights(*in.weights);
      rep.weights = w;
      rep.e_map = map.describe();
      hyp.push_back(detail::check("h != 0", !h.is_zero(), "h vanishes up to the truncation order"));
      bool zero_free = true;
      for (const cplx& e : E.points()) zero_free = zero_free && e != cplx{};
      hyp.push_back(detail::check("0 not in E", zero_free, "E contains 0"));
      hyp.push_back(detail::capacity_guard(E));
      if (kind == ScenarioKind::thm11) {
        hyp.push_back(detail::convergence_guard("h convergent", classify_series(h, cfg)));
        hyp.push_back(check_monomial_exclusion(h, w));
      } else {
        hyp.push_back(detail::check("dg/dy != 0", g.depends_on_y(),
                                    "hypothesis not verifiable: dg/dy vanishes up to the truncation order"));
        const long long st = static_cast<long long>(in.weights->sigma()) * in.weights->tau();
        hyp.push_back(detail::check("sigma tau > 0", st > 0, "sigma tau <= 0"));
      }
      if (!zero_free && w.sigma() * w.tau() < 0)
        throw precondition_error("E contains 0 while a weight is negative: restrictions undefined");
      const SampleSet Et = detail::mapped_parameters(E, map);
      rep.sweep = restriction_sweep(g, h, w, Et, cfg);
      rep.conclusion_target = kind == ScenarioKind::thm11 ? "g" : "h";
      rep.conclusion = kind == ScenarioKind::thm11 ? rep.sweep.g_report : rep.sweep.h_report;
      if (zero_free) {
        try {
          const int rows = std::min(in.certificate_rows, std::min(g.order(), h.order()));
          if (rows >= 1) {
            const DTable d = d_table(g.truncated(rows), h.truncated(rows), w);
            rep.certificate = filtration_level(d, Et, rows, &h, cfg);
          }
        } catch (const std::exception& e) {
          rep.warnings.push_back(std::string("certificate unavailable: ") + e.what());
        }
      }
      break;
    }
    case ScenarioKind::thm13: {
      hyp.push_back(detail::check("dg/dy != 0", g.depends_on_y(),
                                  "hypothesis not verifiable: dg/dy vanishes up to the truncation order"));
      if (!g.depends_on_y()) {
        rep.warnings.push_back("scenario inapplicable at this truncation order");
        rep.conclusion_target = "h";
        rep.conclusion = classify_series(h, cfg);
        break;
      }
      const MalgrangeReport mr = malgrange_scenario(g, h, cfg);
      hyp.push_back(detail::convergence_guard("g convergent", mr.g));
      hyp.push_back(detail::convergence_guard("g(x, h(x)) convergent", mr.composed));
      rep.malgrange = mr;
      rep.conclusion_target = "h";
      rep.conclusion = mr.h;
      rep.sweep.g_report = mr.g;
      rep.sweep.h_report = mr.h;
      rep.sweep.all_convergent = mr.composed.verdict == Verdict::convergent;
      break;
    }
    case ScenarioKind::cor15: {
      const SampleSet& E = detail::require_E(in, kind);
      bool nonlinear = false;
      for (int k = 2; k <= h.order(); ++k) nonlinear = nonlinear || h[k] != cplx{};
      hyp.push_back(detail::check("h != 0", !h.is_zero(), "h vanishes up to the truncation order"));
      hyp.push_back(detail::check("h non-linear", nonlinear, "h is linear: dilations of a line are the line itself"));
      bool real_nonzero = true;
      for (const cplx& s : E.points()) real_nonzero = real_nonzero && s.imag() == 0.0 && s != cplx{};
      hyp.push_back(detail::check("E in R \\ {0}", real_nonzero, "E must consist of nonzero reals"));
      hyp.push_back(detail::capacity_guard(E));
      for (const cplx& s : E.points())
        if (s == cplx{}) throw precondition_error("dilation parameter 0 is undefined");
      rep.sweep = sweep_restrictions(
          E.points(), [&](cplx s) { return compose(g, dilate_curve(h, s)); }, cfg);
      rep.sweep.g_report = classify_series(g, cfg);
      rep.sweep.h_report = classify_series(h, cfg);
      rep.conclusion = rep.sweep.g_report;
      break;
    }
    case ScenarioKind::thm16: {
      const SampleSet& E = detail::require_E(in, kind);
      hyp.push_back(detail::convergence_guard("h convergent", classify_series(h, cfg)));
      bool in_range = true;
      for (const cplx& t : E.points())
        in_range = in_range && t.imag() == 0.0 && t.real() >= 0.0 && t.real() <= 2.0 * kPi;
      hyp.push_back(detail::check("E in [0, 2 pi]", in_range, "angles must be reals in [0, 2 pi]"));
      hyp.push_back(detail::capacity_guard(E));
      const Series2 pm = to_pm(g);
      std::vector<double> disc = parallel_map<double>(E.size(), cfg.threads, [&](std::size_t k) {
        const double th = E.points()[k].real();
        const Series2 a = rotate2(g, th);
        const Series2 b = from_pm(scale_vars(pm, std::polar(1.0, th), std::polar(1.0, -th)));
        // Each level is measured against the rotation of |g| on that level,
        // which bounds the cancellation in both routes.
        const double spread = std::abs(std::cos(th)) + std::abs(std::sin(th));
        double worst = 0.0;
        for (int n = 0; n <= g.order(); ++n) {
          double level = 0.0;
          for (int j = 0; j <= n; ++j) level += std::abs(g.at(n - j, j));
          const double sc = std::max(1.0, level * std::pow(spread, n));
          for (int j = 0; j <= n; ++j) worst = std::max(worst, std::abs(a.at(n - j, j) - b.at(n - j, j)) / sc);
        }
        return worst;
      });
      for (double d : disc) rep.conjugation_discrepancy = std::max(rep.conjugation_discrepancy, d);
      if (rep.conjugation_discrepancy > 1e-9) rep.warnings.push_back("rotation and conjugated scaling disagree");
      rep.sweep = sweep_restrictions(
          E.points(), [&](cplx t) { return compose(rotate2(g, t.real()), h); }, cfg);
      rep.sweep.g_report = classify_series(g, cfg);
      rep.sweep.h_report = classify_series(h, cfg);
      rep.conclusion = rep.sweep.g_report;
      break;
    }
  }
  for (const auto& c : hyp) {
    if (!c.satisfied) {
      rep.hypotheses_satisfied = false;
      rep.warnings.push_back("hypothesis failed: " + c.name + " (" + c.message + ")");
    }
  }
  rep.consistent = !(rep.hypotheses_satisfied && rep.sweep.all_convergent &&
                     rep.conclusion.verdict == Verdict::divergent);
  return rep;
}

}  // namespace fpslab

#endif  // FPSLAB_PAPERLAB_HPP
