#ifndef FPSLAB_DIAGNOSTICS_HPP
#define FPSLAB_DIAGNOSTICS_HPP

// Finite-order convergence diagnostics: magnitude ledgers, growth
// classification, restriction sweeps, bound certificates for the
// coefficient estimates, and Taylor extraction from sampled functions.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fpslab/common.hpp"
#include "fpslab/potential.hpp"
#include "fpslab/series.hpp"

namespace fpslab {

/// Every heuristic constant of the convergence verdicts, in one place. The
/// record is echoed into every report.
struct DiagnosticConfig {
  /// Largest admissible fitted growth rate, log C_max with C_max = 1e6.
  double slope_cap = std::log(1e6);
  /// Coefficient of n log n in the fitted log-magnitude model at or above
  /// which growth counts as superexponential.
  double divergence_index = 0.25;
  /// At or below this the tail counts as geometric.
  double convergence_index = 0.12;
  /// The n log n term is ignored unless the bend it implies across the window
  /// exceeds this multiple of the fit residual.
  double curvature_noise_ratio = 2.0;
  int min_window = 8;
  int window_length = 24;
  /// Flat-function probe: residual must exceed flat_ratio * (tail + flat_floor).
  double probe_radius = 0.5;
  double flat_ratio = 1e3;
  double flat_floor = 1e-8;
  /// Filtration search cap for the E_n level.
  double filtration_cap = 1e6;
  /// Execution only; results do not depend on it.
  int threads = 1;
};

// ---------------------------------------------------------------------------
// Ledgers and growth classification
// ---------------------------------------------------------------------------

/// L_n = max over total degree n of log|a|, -inf for vanishing levels.
class MagnitudeLedger {
 public:
  MagnitudeLedger() = default;

  explicit MagnitudeLedger(std::vector<double> levels) : levels_(std::move(levels)) {
    for (double v : levels_)
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
        throw std::invalid_argument("ledger entries must be finite or -inf");
  }

  static MagnitudeLedger of(const Series1& s) {
    std::vector<double> out(s.order() + 1);
    for (int n = 0; n <= s.order(); ++n) out[n] = safe_log_abs(s[n]);
    return MagnitudeLedger(std::move(out));
  }

  static MagnitudeLedger of(const Series2& s) {
    std::vector<double> out(s.order() + 1, kNegInf);
    for (int n = 0; n <= s.order(); ++n)
      for (int j = 0; j <= n; ++j) out[n] = std::max(out[n], safe_log_abs(s.at(n - j, j)));
    return MagnitudeLedger(std::move(out));
  }

  int max_degree() const { return static_cast<int>(levels_.size()) - 1; }
  std::size_t size() const { return levels_.size(); }
  double operator[](int n) const { return levels_[n]; }
  const std::vector<double>& levels() const { return levels_; }

  /// Ledger of c * series.
  MagnitudeLedger shifted(double log_factor) const {
    std::vector<double> out = levels_;
    for (double& v : out) v += log_factor;
    return MagnitudeLedger(std::move(out));
  }

 private:
  std::vector<double> levels_;
};

enum class Verdict { convergent, divergent, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    default: return "inconclusive";
  }
}

struct DegreeWindow {
  int lo = 1;
  int hi = 0;
  int length() const { return hi - lo + 1; }
};

struct GrowthReport {
  Verdict verdict = Verdict::inconclusive;
  /// Upper-envelope growth rate of L_n in n (limsup of L_n / n).
  double slope = kNegInf;
  /// exp(-slope); +inf for terminating series.
  double radius = std::numeric_limits<double>::infinity();
  DegreeWindow window;
  double confidence = 0.0;
  /// Fitted coefficient of n log n; about 1 for factorial growth, 0 for geometric.
  double growth_index = 0.0;
};

/// The last max(window_length, N/2) degrees, or [1, N] for shorter ledgers.
/// Long ledgers get the wider window so that slow curvature stands out of
/// periodic ripple.
inline DegreeWindow default_window(int max_degree, const DiagnosticConfig& cfg = {}) {
  const int lo = std::max(1, max_degree - std::max(cfg.window_length, max_degree / 2) + 1);
  return {lo, max_degree};
}

namespace detail {

struct Fit {
  std::vector<double> coef;
  double rms = 0.0;
};

inline Fit fit_rows(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  Fit f;
  f.coef = least_squares(rows, y);
  double ss = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double pred = 0.0;
    for (std::size_t k = 0; k < f.coef.size(); ++k) pred += f.coef[k] * rows[r][k];
    ss += (y[r] - pred) * (y[r] - pred);
  }
  f.rms = std::sqrt(ss / rows.size());
  return f;
}

/// Least squares, then a refit on the points on or above the first fit so
/// that sparse or alternating magnitudes are measured by their envelope.
inline Fit upper_fit(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  Fit first = fit_rows(rows, y);
  std::vector<std::vector<double>> up_rows;
  std::vector<double> up_y;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double pred = 0.0;
    for (std::size_t k = 0; k < first.coef.size(); ++k) pred += first.coef[k] * rows[r][k];
    if (y[r] >= pred) {
      up_rows.push_back(rows[r]);
      up_y.push_back(y[r]);
    }
  }
  if (up_rows.size() < rows.front().size() + 1) return first;
  try {
    return fit_rows(up_rows, up_y);
  } catch (const std::runtime_error&) {
    return first;
  }
}

}  // namespace detail

/// Finite-order stand-in for the Cauchy-Hadamard dichotomy: |a| <= C^n with
/// moderate C is "convergent", log-magnitudes with an n log n component are
/// "divergent".
inline GrowthReport growth_classify(const MagnitudeLedger& ledger, DegreeWindow window,
                                    const DiagnosticConfig& cfg = {}) {
  if (window.lo < 0 || window.hi > ledger.max_degree() || window.lo > window.hi)
    throw precondition_error("classification window outside the ledger");
  if (window.length() < cfg.min_window)
    throw precondition_error("classification window shorter than " + std::to_string(cfg.min_window) + " degrees");
  GrowthReport rep;
  rep.window = window;
  std::vector<std::vector<double>> lin_rows, log_rows;
  std::vector<double> y;
  double best_ratio = kNegInf;
  for (int n = std::max(1, window.lo); n <= window.hi; ++n) {
    const double v = ledger[n];
    if (v == kNegInf) continue;
    const double dn = n;
    lin_rows.push_back({1.0, dn});
    log_rows.push_back({1.0, dn, dn * std::log(dn)});
    y.push_back(v);
    best_ratio = std::max(best_ratio, v / dn);
  }
  if (y.size() < 4) {
    // Eventually vanishing at this order: polynomial-like.
    rep.verdict = Verdict::convergent;
    rep.slope = best_ratio;
    rep.radius = best_ratio == kNegInf ? std::numeric_limits<double>::infinity() : std::exp(-best_ratio);
    rep.confidence = y.empty() ? 1.0 : 0.5;
    return rep;
  }
  const detail::Fit lin = detail::upper_fit(lin_rows, y);
  rep.slope = lin.coef[1];
  rep.radius = std::exp(-rep.slope);
  // The n log n coefficient only counts when the curvature it implies across
  // the window stands out from the scatter of the ledger.
  double index = 0.0;
  bool significant = false;
  try {
    const detail::Fit all = detail::fit_rows(log_rows, y);
    index = detail::upper_fit(log_rows, y).coef[2];
    const double first = log_rows.front()[1];
    const double last = log_rows.back()[1];
    const double bend = std::abs(index) * (last - first) * (last - first) / (8.0 * 0.5 * (first + last));
    significant = bend > cfg.curvature_noise_ratio * all.rms;
  } catch (const std::runtime_error&) {
    index = 0.0;
  }
  rep.growth_index = index;
  if (!significant) index = std::min(index, cfg.convergence_index);
  if (index >= cfg.divergence_index || rep.slope > cfg.slope_cap)
    rep.verdict = Verdict::divergent;
  else if (index <= cfg.convergence_index)
    rep.verdict = Verdict::convergent;
  else
    rep.verdict = Verdict::inconclusive;
  const double mid = 0.5 * (cfg.divergence_index + cfg.convergence_index);
  const double gap = cfg.divergence_index - cfg.convergence_index;
  const double margin = std::min(1.0, std::abs(index - mid) / gap);
  rep.confidence = rep.verdict == Verdict::inconclusive ? 0.0 : margin / (1.0 + lin.rms);
  return rep;
}

inline GrowthReport growth_classify(const MagnitudeLedger& ledger, const DiagnosticConfig& cfg = {}) {
  return growth_classify(ledger, default_window(ledger.max_degree(), cfg), cfg);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Runs fn(k) for k in [0, count) on up to `threads` workers. Each index writes
/// its own slot, so the result is independent of the worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int threads, Fn&& fn) {
  std::vector<std::optional<T>> slots(count);
  const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1,
                                                      std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) slots[k].emplace(fn(k));
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < count; k += workers) slots[k].emplace(fn(k));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct ParamVerdict {
  cplx param;
  MagnitudeLedger ledger;
  GrowthReport report;
};

struct SweepReport {
  std::vector<ParamVerdict> rows;
  bool all_convergent = true;
  GrowthReport g_report;
  GrowthReport h_report;
};

inline GrowthReport classify_series(const Series1& s, const DiagnosticConfig& cfg) {
  return growth_classify(MagnitudeLedger::of(s), cfg);
}

inline GrowthReport classify_series(const Series2& s, const DiagnosticConfig& cfg) {
  return growth_classify(MagnitudeLedger::of(s), cfg);
}

/// Classifies restriction(param) for each parameter, in input order.
inline SweepReport sweep_restrictions(const std::vector<cplx>& params,
                                      const std::function<Series1(cplx)>& restriction,
                                      const DiagnosticConfig& cfg) {
  SweepReport rep;
  rep.rows = parallel_map<ParamVerdict>(params.size(), cfg.threads, [&](std::size_t k) {
    const Series1 r = restriction(params[k]);
    MagnitudeLedger ledger = MagnitudeLedger::of(r);
    GrowthReport g = growth_classify(ledger, cfg);
    return ParamVerdict{params[k], std::move(ledger), g};
  });
  for (const auto& row : rep.rows)
    if (row.report.verdict != Verdict::convergent) rep.all_convergent = false;
  return rep;
}

/// Classifies g(s^sigma x, s^tau h(x)) for every s in E, plus g and h.
inline SweepReport restriction_sweep(const Series2& g, const Series1& h, const WeightPair& w, const SampleSet& E,
                                     const DiagnosticConfig& cfg = {}) {
  if (h[0] != cplx{}) throw precondition_error("restriction sweep requires h(0) = 0");
  if (!w.is_canonical()) throw precondition_error("restriction sweep requires canonical weights");
  SweepReport rep = sweep_restrictions(
      E.points(), [&](cplx s) { return anisotropic_substitute(g, h, w, s); }, cfg);
  rep.g_report = classify_series(g, cfg);
  rep.h_report = classify_series(h, cfg);
  return rep;
}

// ---------------------------------------------------------------------------
// Bound certificates
// ---------------------------------------------------------------------------

/// Constants of the coefficient estimate |d_pq| <= C^p and of the follow-up
/// bounds on a_ij. Fields that could not be determined are NaN with a note.
struct BoundCertificate {
  bool filtration_found = false;
  /// |d_pq| <= C^p verified on every stored entry with 1 <= p <= pmax.
  bool valid = false;
  std::string note;
  int pmax = 0;
  long long n_filter = 0;
  double C_E = std::numeric_limits<double>::quiet_NaN();
  double R = std::numeric_limits<double>::quiet_NaN();
  double M = 0.0;
  double C = std::numeric_limits<double>::quiet_NaN();
  /// max over entries of log|d_pq| - p log C (<= 0 when valid).
  double worst_log_excess = kNegInf;
  double r = std::numeric_limits<double>::quiet_NaN();
  double m = std::numeric_limits<double>::quiet_NaN();
  double L = std::numeric_limits<double>::quiet_NaN();
  double K = std::numeric_limits<double>::quiet_NaN();
  double C_F = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

/// Winding number of h around 0 along |x| = r.
inline int winding_number(const Series1& h, double r, int samples = 2048) {
  double total = 0.0;
  cplx prev = h.eval(cplx{r, 0.0});
  for (int k = 1; k <= samples; ++k) {
    const cplx cur = h.eval(std::polar(r, 2.0 * kPi * k / samples));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

inline double min_modulus_on_circle(const Series1& h, double r, int samples = 2048) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) m = std::min(m, std::abs(h.eval(std::polar(r, 2.0 * kPi * k / samples))));
  return m;
}

/// Proof constants r, m, L, K for a convergent h.
inline void fill_ball_constants(BoundCertificate& cert, const Series1& h, const WeightPair& w,
                                const DiagnosticConfig& cfg) {
  if (h.is_zero()) {
    cert.note += "; h is zero: ball constants undefined";
    return;
  }
  const int v = h.valuation();
  double r = std::isfinite(cert.C) ? 0.5 / cert.C : 0.5;
  if (h.order() >= cfg.min_window) {
    const GrowthReport hr = classify_series(h, cfg);
    if (std::isfinite(hr.radius)) r = std::min(r, 0.5 * hr.radius);
  }
  r = std::min(r, 0.5);
  double m = 0.0;
  for (int it = 0; it < 40; ++it) {
    m = min_modulus_on_circle(h, r);
    if (m > 0.0 && winding_number(h, r) == v) break;
    r *= 0.5;
  }
  cert.r = r;
  cert.m = m;
  const double denom = 1.0 - cert.C * r;
  const int sigma = w.sigma();
  const int tau = w.tau();
  if (sigma > 0 && tau > 0) {
    cert.L = (1.0 + 1.0 / r + 1.0 / m) / denom;
    // F = u(S), u(x) = x^-tau h(x)^sigma on |x| = r.
    std::vector<cplx> pts;
    std::set<std::pair<double, double>> seen;
    for (int k = 0; k < 512; ++k) {
      const cplx x = std::polar(r, 2.0 * kPi * k / 512);
      const cplx z = ipow(x, -tau) * ipow(h.eval(x), sigma);
      if (seen.emplace(z.real(), z.imag()).second) pts.push_back(z);
    }
    if (pts.size() < 3) {
      cert.note += "; u(x) = x^-tau h^sigma is constant on |x| = r: C_F undefined";
      return;
    }
    const SampleSet F(pts, "u(S)");
    try {
      cert.C_F = bernstein_constant(F, 2.0 * std::max(1.0, F.max_modulus())).C;
      cert.K = std::pow(cert.L + cert.C_F, 2.0 * (sigma + tau));
    } catch (const std::exception& e) {
      cert.note += std::string("; C_F unavailable: ") + e.what();
    }
  } else {
    // x^|tau| h^sigma = beta^nu with beta univalent near 0; delta = min |beta| on |x| = r.
    const Series1 xw = shift_up(pow(h, sigma), std::abs(tau));
    const int nu = xw.valuation();
    if (nu > xw.order()) {
      cert.note += "; x^|tau| h^sigma vanishes at this order";
      return;
    }
    const Series1 beta = nth_root(xw.truncated(std::max(nu, xw.order())), nu);
    cert.delta = min_modulus_on_circle(beta, r);
    cert.L = (1.0 + 1.0 / r + 1.0 / m) / denom;
    cert.K = (1.0 + 1.0 / r + 1.0 / m + std::pow(cert.delta, -nu)) / denom;
  }
}

}  // namespace detail

/// Least n with |u_p(s)| <= n^p on E for 1 <= p <= pmax, the constant
/// C = C_E^(sigma+|tau|) M^(tau^-) n, and a check of |d_pq| <= C^p.
/// With h supplied, the ball constants r, m, L, K are filled in as well.
inline BoundCertificate filtration_level(const DTable& d, const SampleSet& E, int pmax,
                                         const Series1* h = nullptr, const DiagnosticConfig& cfg = {}) {
  if (pmax > d.rows()) throw precondition_error("filtration level needs table rows >= pmax");
  BoundCertificate cert;
  cert.pmax = pmax;
  const WeightPair& w = d.weights();
  double need = 1.0;
  for (const cplx& s : E.points())
    for (int p = 1; p <= pmax; ++p) {
      const double a = std::abs(d.u(p, s));
      if (a > 0.0) need = std::max(need, std::exp(std::log(a) / p));
    }
  if (!(need <= cfg.filtration_cap)) {
    cert.note = "no filtration level up to the cap";
    return cert;
  }
  long long n = static_cast<long long>(std::ceil(need * (1.0 - 1e-13)));
  n = std::max(1LL, n);
  for (const cplx& s : E.points())
    for (int p = 1; p <= pmax; ++p)
      while (std::log(std::abs(d.u(p, s))) > p * std::log(static_cast<double>(n)) + 1e-12) ++n;
  cert.filtration_found = true;
  cert.n_filter = n;
  cert.M = E.max_modulus();
  cert.R = std::max(2.0, 2.0 * cert.M);
  try {
    if (E.is_finite_set()) throw precondition_error("finite set has capacity 0: no Green's function");
    cert.C_E = bernstein_constant(E, cert.R).C;
  } catch (const std::exception& e) {
    cert.note = std::string("Bernstein step unavailable: ") + e.what();
    return cert;
  }
  cert.C = std::pow(cert.C_E, w.sigma() + std::abs(w.tau())) * std::pow(cert.M, w.tau_minus()) * static_cast<double>(n);
  const double logC = std::log(cert.C);
  for (int p = 1; p <= pmax; ++p)
    for (int q = d.q_min(p); q <= d.q_max(p); ++q) {
      const double a = safe_log_abs(d(p, q));
      if (a != kNegInf) cert.worst_log_excess = std::max(cert.worst_log_excess, a - p * logC);
    }
  cert.valid = cert.worst_log_excess <= 1e-12;
  if (!cert.valid) cert.note = "coefficient bound |d_pq| <= C^p fails on the table";
  if (h != nullptr) detail::fill_ball_constants(cert, *h, w, cfg);
  return cert;
}

// ---------------------------------------------------------------------------
// Malgrange-type scenario
// ---------------------------------------------------------------------------

struct MalgrangeReport {
  GrowthReport g;
  GrowthReport h;
  GrowthReport composed;
  /// g and g(x, h(x)) convergent, so h is expected convergent.
  bool premises_hold = false;
  /// premises_hold implies h classified convergent.
  bool consistent = true;
  /// g convergent and h divergent; the composition is then expected divergent.
  bool contrapositive_instance = false;
  bool contrapositive_confirmed = false;
};

inline MalgrangeReport malgrange_scenario(const Series2& g, const Series1& h, const DiagnosticConfig& cfg = {}) {
  if (!g.depends_on_y()) throw precondition_error("scenario inapplicable: dg/dy vanishes up to the truncation order");
  if (h[0] != cplx{}) throw precondition_error("scenario requires h(0) = 0");
  MalgrangeReport rep;
  rep.g = classify_series(g, cfg);
  rep.h = classify_series(h, cfg);
  rep.composed = classify_series(compose(g, h), cfg);
  rep.premises_hold = rep.g.verdict == Verdict::convergent && rep.composed.verdict == Verdict::convergent;
  rep.consistent = !(rep.premises_hold && rep.h.verdict == Verdict::divergent);
  rep.contrapositive_instance = rep.g.verdict == Verdict::convergent && rep.h.verdict == Verdict::divergent;
  rep.contrapositive_confirmed = rep.contrapositive_instance && rep.composed.verdict == Verdict::divergent;
  return rep;
}

// ---------------------------------------------------------------------------
// Taylor extraction from samples
// ---------------------------------------------------------------------------

using Sampled2 = std::function<cplx(double, double)>;

/// Finite-difference weights for the derivative of order `deriv` at 0 on the
/// nodes -M..M (unit spacing), by Fornberg's recursion.
inline std::vector<double> central_weights(int deriv, int M) {
  const int count = 2 * M + 1;
  std::vector<double> x(count);
  for (int k = 0; k < count; ++k) x[k] = k - M;
  // c[j][m]: weight of node j for derivative m.
  std::vector<std::vector<double>> c(count, std::vector<double>(deriv + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < count; ++i) {
    const int mn = std::min(i, deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m) c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = c[k][deriv];
  return out;
}

struct TaylorExtraction {
  Series2 series;
  /// max |a_ij(step) - a_ij(step/2)|.
  double error_estimate = 0.0;
  /// Function does not match its extracted series away from the origin.
  bool flat = false;
  double probe_residual = 0.0;
  double tail_estimate = 0.0;
};

namespace detail {

inline Series2 finite_difference_series(const Sampled2& f, int order, double step) {
  const int M = (order + 1) / 2;
  const int width = 2 * M + 1;
  std::vector<cplx> grid(static_cast<std::size_t>(width) * width);
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b) {
      const cplx v = f(a * step, b * step);
      if (!is_finite(v)) throw precondition_error("non-finite sample of f at the stencil grid");
      grid[static_cast<std::size_t>(a + M) * width + (b + M)] = v;
    }
  std::vector<std::vector<double>> w(order + 1);
  for (int d = 0; d <= order; ++d) w[d] = central_weights(d, M);
  std::vector<double> fact(order + 1, 1.0);
  for (int k = 1; k <= order; ++k) fact[k] = fact[k - 1] * k;
  Series2 out(order);
  for (int n = 0; n <= order; ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      cplx acc{};
      for (int a = 0; a < width; ++a) {
        if (w[i][a] == 0.0) continue;
        cplx inner{};
        for (int b = 0; b < width; ++b) inner += w[j][b] * grid[static_cast<std::size_t>(a) * width + b];
        acc += w[i][a] * inner;
      }
      out.at(i, j) = acc / (fact[i] * fact[j] * std::pow(step, n));
    }
  return out;
}

}  // namespace detail

/// Central finite-difference Taylor coefficients a_ij = d^(i+j) f / (i! j!) at
/// the origin on a (2M+1)^2 grid, M = ceil(order/2); exact for polynomials of
/// degree <= order up to rounding.
inline TaylorExtraction taylor_from_samples(const Sampled2& f, int order, double step,
                                            const DiagnosticConfig& cfg = {}) {
  if (order < 0 || order > 10) throw precondition_error("Taylor extraction supports orders 0..10");
  if (!(step > 0.0)) throw precondition_error("Taylor extraction needs a positive step");
  TaylorExtraction out;
  out.series = detail::finite_difference_series(f, order, step);
  const Series2 half = detail::finite_difference_series(f, order, 0.5 * step);
  for (std::size_t k = 0; k < half.size(); ++k)
    out.error_estimate = std::max(out.error_estimate, std::abs(out.series.raw()[k] - half.raw()[k]));
  const double rho = cfg.probe_radius;
  for (int n = std::max(0, order - 1); n <= order; ++n)
    for (int j = 0; j <= n; ++j) out.tail_estimate += std::abs(out.series.at(n - j, j)) * std::pow(rho, n);
  for (int k = 0; k < 8; ++k) {
    const double t = 2.0 * kPi * k / 8;
    const double x = rho * std::cos(t);
    const double y = rho * std::sin(t);
    const cplx v = f(x, y);
    if (!is_finite(v)) continue;
    out.probe_residual = std::max(out.probe_residual, std::abs(v - out.series.eval(x, y)));
  }
  out.flat = out.probe_residual > cfg.flat_ratio * (out.tail_estimate + cfg.flat_floor);
  return out;
}

// ---------------------------------------------------------------------------
// Curve families
// ---------------------------------------------------------------------------

enum class CurveFamily { dilation, rotation };

struct CurveFamilyReport {
  CurveFamily family = CurveFamily::dilation;
  TaylorExtraction taylor;
  SweepReport sweep;
  bool flat = false;
  /// All restrictions convergent, the extracted series convergent, not flat.
  bool analytic = false;
};

/// Extracts the Taylor series g of f and classifies its restrictions to the
/// dilated curves (x, gamma_{1/s}(x)) or to the rotated curves of y = gamma(x).
inline CurveFamilyReport curve_family_test(const Sampled2& f, const Series1& gamma, CurveFamily family,
                                           const SampleSet& E, int order, double step,
                                           const DiagnosticConfig& cfg = {}) {
  if (gamma[0] != cplx{}) throw precondition_error("curve must pass through the origin: gamma(0) = 0");
  if (family == CurveFamily::dilation) {
    bool nonlinear = false;
    for (int k = 2; k <= gamma.order(); ++k) nonlinear = nonlinear || gamma[k] != cplx{};
    if (!nonlinear) throw precondition_error("dilation family requires a non-linear analytic curve");
    for (const cplx& s : E.points())
      if (s.imag() != 0.0 || s == cplx{}) throw precondition_error("dilation parameters must be nonzero reals");
  }
  CurveFamilyReport rep;
  rep.family = family;
  rep.taylor = taylor_from_samples(f, order, step, cfg);
  const Series2& g = rep.taylor.series;
  const Series1 curve = gamma.truncated(order);
  if (family == CurveFamily::dilation) {
    rep.sweep = sweep_restrictions(
        E.points(), [&](cplx s) { return compose(g, dilate_curve(curve, cplx{1.0} / s)); }, cfg);
  } else {
    // The rotated curve Gamma_theta pulls f back through the rotation by -theta.
    rep.sweep = sweep_restrictions(
        E.points(), [&](cplx theta) { return compose(rotate2(g, -theta.real()), curve); }, cfg);
  }
  rep.sweep.g_report = classify_series(g, cfg);
  rep.sweep.h_report = classify_series(curve, cfg);
  rep.flat = rep.taylor.flat;
  rep.analytic = rep.sweep.all_convergent && rep.sweep.g_report.verdict == Verdict::convergent && !rep.flat;
  return rep;
}

}  // namespace fpslab

#endif  // FPSLAB_DIAGNOSTICS_HPP
