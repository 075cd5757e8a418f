#ifndef FPSLAB_POTENTIAL_HPP
#define FPSLAB_POTENTIAL_HPP

// Numerical logarithmic potential theory on finite samples of planar sets:
// Leja sequences, transfinite-diameter capacity estimates, Green's functions
// with pole at infinity, and the Bernstein coefficient inequality.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "fpslab/common.hpp"

namespace fpslab {

/// Closed-form description of the set a sample stands for.
struct DiskShape {
  cplx center;
  double radius;
};
struct IntervalShape {
  cplx a;
  cplx b;
};
/// The set is exactly the sample (a genuinely finite set, capacity 0).
struct FiniteShape {};

using SetShape = std::variant<std::monostate, DiskShape, IntervalShape, FiniteShape>;

/// Default sampling density, points per unit of boundary length.
inline constexpr double kDefaultDensity = 512.0;

/// Finite point cloud standing in for a closed set E.
class SampleSet {
 public:
  SampleSet(std::vector<cplx> points, std::string label = {},
            std::optional<std::pair<double, double>> window = std::nullopt, SetShape shape = {})
      : points_(std::move(points)), label_(std::move(label)), shape_(shape) {
    if (points_.empty()) throw precondition_error("sample set must be nonempty");
    double lo = std::abs(points_.front());
    double hi = lo;
    for (const cplx& z : points_) {
      if (!is_finite(z)) throw precondition_error("sample points must be finite");
      lo = std::min(lo, std::abs(z));
      hi = std::max(hi, std::abs(z));
    }
    window_ = window.value_or(std::pair{lo, hi});
    if (window_.first > window_.second) throw precondition_error("sample window must satisfy r0 <= r1");
    const double slack = 1e-12 * std::max(1.0, window_.second);
    for (const cplx& z : points_) {
      const double r = std::abs(z);
      if (r < window_.first - slack || r > window_.second + slack)
        throw precondition_error("sample point outside the declared window");
    }
    std::vector<std::pair<double, double>> keys;
    keys.reserve(points_.size());
    for (const cplx& z : points_) keys.emplace_back(z.real(), z.imag());
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw precondition_error("sample points must be distinct");
  }

  const std::vector<cplx>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const std::string& label() const { return label_; }
  const std::pair<double, double>& window() const { return window_; }
  const SetShape& shape() const { return shape_; }
  bool is_finite_set() const { return std::holds_alternative<FiniteShape>(shape_); }

  double max_modulus() const {
    double m = 0.0;
    for (const cplx& z : points_) m = std::max(m, std::abs(z));
    return m;
  }

  /// Bounding-box diagonal; used only as a length scale.
  double diameter() const {
    double xmin = points_[0].real(), xmax = xmin, ymin = points_[0].imag(), ymax = ymin;
    for (const cplx& z : points_) {
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
    return std::hypot(xmax - xmin, ymax - ymin);
  }

 private:
  std::vector<cplx> points_;
  std::string label_;
  std::pair<double, double> window_;
  SetShape shape_;
};

// ---------------------------------------------------------------------------
// Sample constructors
// ---------------------------------------------------------------------------

inline std::size_t count_for_length(double length, double density) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(length * density)));
}

/// Boundary samples of the closed disk |z - center| <= radius. The disk and its
/// boundary circle share capacity, Green's function and polynomial sup norms.
inline SampleSet disk_sample(cplx center, double radius, double density = kDefaultDensity) {
  const std::size_t count = std::max<std::size_t>(3, count_for_length(2.0 * kPi * radius, density));
  std::vector<cplx> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) pts.push_back(center + std::polar(radius, 2.0 * kPi * k / count));
  return SampleSet(std::move(pts), "disk", std::nullopt, DiskShape{center, radius});
}

inline SampleSet unit_circle(double density = kDefaultDensity) {
  SampleSet s = disk_sample(0.0, 1.0, density);
  return SampleSet(s.points(), "unit_circle", s.window(), s.shape());
}

/// Equispaced samples of the segment [a, b], endpoints included.
inline SampleSet segment_sample(cplx a, cplx b, double density = kDefaultDensity) {
  const std::size_t count = std::max<std::size_t>(2, count_for_length(std::abs(b - a), density) + 1);
  std::vector<cplx> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) pts.push_back(a + (b - a) * (static_cast<double>(k) / (count - 1)));
  return SampleSet(std::move(pts), "segment", std::nullopt, IntervalShape{a, b});
}

/// Points of the arc radius*e^{it}, t0 <= t <= t1, on a fixed angular grid so
/// that arcs with a common start are nested.
inline SampleSet arc_sample(double radius, double t0, double t1, double density = kDefaultDensity) {
  const double step = 1.0 / (density * radius);
  std::vector<cplx> pts;
  for (long long k = 0;; ++k) {
    const double t = t0 + k * step;
    if (t > t1 + 1e-15) break;
    pts.push_back(std::polar(radius, t));
  }
  return SampleSet(std::move(pts), "arc");
}

inline SampleSet finite_set(std::vector<cplx> points, std::string label = "finite") {
  return SampleSet(std::move(points), std::move(label), std::nullopt, FiniteShape{});
}

/// Points of E with r0 <= |s| <= r1.
inline SampleSet window_restrict(const SampleSet& E, double r0, double r1) {
  std::vector<cplx> pts;
  for (const cplx& z : E.points())
    if (std::abs(z) >= r0 && std::abs(z) <= r1) pts.push_back(z);
  if (pts.empty()) throw precondition_error("window contains no sample points");
  const SetShape shape = E.is_finite_set() ? SetShape{FiniteShape{}} : SetShape{};
  return SampleSet(std::move(pts), E.label() + "|window", std::pair{r0, r1}, shape);
}

/// Image of E under z -> factor * z.
inline SampleSet scaled(const SampleSet& E, cplx factor) {
  std::vector<cplx> pts;
  pts.reserve(E.size());
  for (const cplx& z : E.points()) pts.push_back(factor * z);
  const double r = std::abs(factor);
  SetShape shape = std::visit(
      [&](const auto& s) -> SetShape {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskShape>)
          return DiskShape{factor * s.center, r * s.radius};
        else if constexpr (std::is_same_v<T, IntervalShape>)
          return IntervalShape{factor * s.a, factor * s.b};
        else
          return s;
      },
      E.shape());
  return SampleSet(std::move(pts), E.label(), std::pair{r * E.window().first, r * E.window().second}, shape);
}

// ---------------------------------------------------------------------------
// Leja sequences and transfinite diameter
// ---------------------------------------------------------------------------

struct LejaSequence {
  std::vector<cplx> points;
  std::vector<std::size_t> indices;
  /// logprods[k] = log prod_{j<k} |z_k - z_j|; logprods[0] = 0.
  std::vector<double> logprods;
};

/// Relative gap below which two candidates count as tied, so that rounding in
/// symmetric samples cannot override the lowest-index rule.
inline constexpr double kTieTolerance = 1e-12;

/// Greedy maximization of the distance product over the candidate set. The
/// default start is the candidate of largest modulus; an explicit start
/// selects the nearest candidate. Ties go to the lowest candidate index.
inline LejaSequence leja_points(const SampleSet& E, std::size_t n, std::optional<cplx> start = std::nullopt) {
  const auto& cand = E.points();
  if (n > cand.size())
    throw precondition_error("requested " + std::to_string(n) + " Leja points from " + std::to_string(cand.size()) +
                             " candidates");
  LejaSequence seq;
  if (n == 0) return seq;
  std::size_t first = 0;
  if (start) {
    double best = std::abs(cand[0] - *start);
    for (std::size_t k = 1; k < cand.size(); ++k)
      if (const double d = std::abs(cand[k] - *start); d < best) {
        best = d;
        first = k;
      }
  } else {
    double best = std::abs(cand[0]);
    for (std::size_t k = 1; k < cand.size(); ++k)
      if (const double r = std::abs(cand[k]); r > best * (1.0 + kTieTolerance)) {
        best = r;
        first = k;
      }
  }
  std::vector<double> score(cand.size(), 0.0);
  std::vector<char> taken(cand.size(), 0);
  auto take = [&](std::size_t idx, double logprod) {
    seq.points.push_back(cand[idx]);
    seq.indices.push_back(idx);
    seq.logprods.push_back(logprod);
    taken[idx] = 1;
    for (std::size_t k = 0; k < cand.size(); ++k)
      if (!taken[k]) score[k] += std::log(std::abs(cand[k] - cand[idx]));
  };
  take(first, 0.0);
  while (seq.points.size() < n) {
    std::size_t best = cand.size();
    for (std::size_t k = 0; k < cand.size(); ++k)
      if (!taken[k] && (best == cand.size() || score[k] > score[best] + kTieTolerance * std::max(1.0, std::abs(score[best]))))
        best = k;
    take(best, score[best]);
  }
  return seq;
}

struct DiameterReport {
  /// d_k for k = 2..n, from the first k Leja points.
  std::vector<double> sequence;
  double d_n = 0.0;
  /// Limit estimate from fitting log d_k = c0 + c1 log(k)/(k-1) + c2/(k-1).
  double extrapolated = 0.0;
  /// Capacity verdict: 0 for finite sets, the extrapolated value otherwise.
  double capacity = 0.0;
  bool finite_set = false;
  LejaSequence leja;
};

namespace detail {

/// Least squares for small dense systems via normal equations (3x3 at most).
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  const std::size_t m = rows.front().size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[i][j] += rows[r][i] * rows[r][j];
      a[i][m] += rows[r][i] * y[r];
    }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular least-squares system");
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = a[i][m] / a[i][i];
  return x;
}

}  // namespace detail

inline DiameterReport transfinite_diameter(const SampleSet& E, std::size_t n) {
  if (n < 2) throw precondition_error("transfinite diameter needs n >= 2");
  DiameterReport rep;
  rep.leja = leja_points(E, n);
  double sum = rep.leja.logprods[0];
  std::vector<double> logd;
  for (std::size_t k = 2; k <= n; ++k) {
    sum += rep.leja.logprods[k - 1];
    const double v = 2.0 * sum / (static_cast<double>(k) * (k - 1));
    logd.push_back(v);
    rep.sequence.push_back(std::exp(v));
  }
  rep.d_n = rep.sequence.back();
  if (n >= 4) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 2; k <= n; ++k) {
      const double km1 = static_cast<double>(k - 1);
      rows.push_back({1.0, std::log(static_cast<double>(k)) / km1, 1.0 / km1});
    }
    rep.extrapolated = std::exp(detail::least_squares(rows, logd)[0]);
  } else {
    rep.extrapolated = rep.d_n;
  }
  rep.finite_set = E.is_finite_set();
  rep.capacity = rep.finite_set ? 0.0 : rep.extrapolated;
  return rep;
}

/// Capacity estimates along an increasing family of samples.
inline std::vector<double> capacity_window_sweep(const std::vector<SampleSet>& family, std::size_t n) {
  std::vector<double> out;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (k > 0) {
      std::set<std::pair<double, double>> next;
      for (const cplx& z : family[k].points()) next.emplace(z.real(), z.imag());
      for (const cplx& z : family[k - 1].points())
        if (!next.count({z.real(), z.imag()}))
          throw precondition_error("window sweep requires nested sample sets");
    }
    out.push_back(transfinite_diameter(family[k], std::min(n, family[k].size())).capacity);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Green's functions with pole at infinity
// ---------------------------------------------------------------------------

struct EmpiricalGreen {
  std::vector<cplx> points;
  double d_n;
};

/// u(z) = log|z| - log(alpha) + o(1) at infinity.
class GreenModel {
 public:
  static GreenModel disk(cplx center, double radius) { return GreenModel(DiskShape{center, radius}, radius); }
  static GreenModel interval(cplx a, cplx b) { return GreenModel(IntervalShape{a, b}, std::abs(b - a) / 4.0); }
  static GreenModel empirical(const LejaSequence& seq) {
    if (seq.points.size() < 2) throw precondition_error("empirical Green model needs at least two Leja points");
    double sum = 0.0;
    for (double v : seq.logprods) sum += v;
    const double n = static_cast<double>(seq.points.size());
    const double d = std::exp(2.0 * sum / (n * (n - 1)));
    return GreenModel(EmpiricalGreen{seq.points, d}, d);
  }

  /// Closed form for disk and interval shapes, Leja-empirical otherwise.
  static GreenModel for_set(const SampleSet& E, std::size_t leja_count = 128) {
    if (const auto* d = std::get_if<DiskShape>(&E.shape())) return disk(d->center, d->radius);
    if (const auto* i = std::get_if<IntervalShape>(&E.shape())) return interval(i->a, i->b);
    return empirical(leja_points(E, std::min(leja_count, E.size())));
  }

  double alpha() const { return alpha_; }
  bool closed_form() const { return !std::holds_alternative<EmpiricalGreen>(kind_); }

  std::string kind_name() const {
    if (std::holds_alternative<DiskShape>(kind_)) return "disk";
    if (std::holds_alternative<IntervalShape>(kind_)) return "interval";
    return "leja-empirical";
  }

  double operator()(cplx z) const {
    if (const auto* d = std::get_if<DiskShape>(&kind_)) {
      const double r = std::abs(z - d->center);
      if (r < d->radius * (1.0 - 1e-14)) throw std::domain_error("Green function evaluated inside the disk");
      return std::max(0.0, std::log(r / d->radius));
    }
    if (const auto* iv = std::get_if<IntervalShape>(&kind_)) {
      // Map [a, b] to [-1, 1]; u = log|w + sqrt(w^2 - 1)| on the branch with modulus >= 1.
      const cplx w = (2.0 * z - (iv->a + iv->b)) / (iv->b - iv->a);
      if (std::abs(w.imag()) < 1e-14 && std::abs(w.real()) < 1.0 - 1e-14)
        throw std::domain_error("Green function evaluated on the interval");
      const cplx root = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
      const double m = std::max(std::abs(w + root), std::abs(w - root));
      return std::max(0.0, std::log(m));
    }
    const auto& e = std::get<EmpiricalGreen>(kind_);
    double acc = 0.0;
    for (const cplx& p : e.points) acc += std::log(std::abs(z - p));
    return acc / e.points.size() - std::log(e.d_n);
  }

 private:
  using Kind = std::variant<DiskShape, IntervalShape, EmpiricalGreen>;
  GreenModel(Kind k, double alpha) : kind_(std::move(k)), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

inline double green_eval(const GreenModel& m, cplx z) { return m(z); }

// ---------------------------------------------------------------------------
// Bernstein inequality
// ---------------------------------------------------------------------------

struct BernsteinConstant {
  double C;
  double R;
  cplx argmax;
  std::string model;
};

/// C = max over |z| = R of exp(u(z)), u the Green's function of E.
inline BernsteinConstant bernstein_constant(const SampleSet& E, double R, std::size_t circle_samples = 4096) {
  if (!(R > 1.0)) throw precondition_error("Bernstein constant needs R > 1");
  if (E.max_modulus() >= R) throw precondition_error("sample set is not inside the circle |z| = R");
  const GreenModel u = GreenModel::for_set(E);
  double best = kNegInf;
  double best_t = 0.0;
  for (std::size_t k = 0; k < circle_samples; ++k) {
    const double t = 2.0 * kPi * k / circle_samples;
    if (const double v = u(std::polar(R, t)); v > best) {
      best = v;
      best_t = t;
    }
  }
  // Golden-section refinement inside the bracketing cell.
  double lo = best_t - 2.0 * kPi / circle_samples;
  double hi = best_t + 2.0 * kPi / circle_samples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (u(std::polar(R, a)) > u(std::polar(R, b)))
      hi = b;
    else
      lo = a;
  }
  const double t = 0.5 * (lo + hi);
  if (const double v = u(std::polar(R, t)); v > best) {
    best = v;
    best_t = t;
  }
  return {std::exp(best), R, std::polar(R, best_t), u.kind_name()};
}

struct BernsteinMargin {
  int degree = 0;
  double max_coeff = 0.0;
  double sup_on_samples = 0.0;
  /// max_k |a_k| / (C^n sup_E |P|); <= 1 when the inequality holds.
  double margin = 0.0;
  bool holds = true;
};

inline double sup_on(const std::vector<cplx>& coeffs, const SampleSet& E) {
  double sup = 0.0;
  for (const cplx& z : E.points()) {
    cplx acc{};
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    sup = std::max(sup, std::abs(acc));
  }
  return sup;
}

/// coeffs[k] is the coefficient of z^k; the degree is the last nonzero index.
inline BernsteinMargin bernstein_check(const std::vector<cplx>& coeffs, const SampleSet& E, double C) {
  BernsteinMargin out;
  int n = static_cast<int>(coeffs.size()) - 1;
  while (n > 0 && coeffs[n] == cplx{}) --n;
  out.degree = std::max(n, 0);
  for (const cplx& a : coeffs) out.max_coeff = std::max(out.max_coeff, std::abs(a));
  out.sup_on_samples = sup_on(coeffs, E);
  const double bound = std::pow(C, out.degree) * out.sup_on_samples;
  out.margin = out.max_coeff == 0.0 ? 0.0 : (bound > 0.0 ? out.max_coeff / bound : std::numeric_limits<double>::infinity());
  out.holds = out.margin <= 1.0;
  return out;
}

struct MonicPolynomial {
  std::vector<cplx> roots;
  /// coeffs[k] multiplies z^k; coeffs.back() = 1.
  std::vector<cplx> coeffs;
  /// max over the samples of |P|, evaluated in product form.
  double sup = 0.0;
};

/// Monic polynomial from a root list; coefficients of z^0..z^n.
inline std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};
  for (const cplx& r : roots) {
    std::vector<cplx> next(c.size() + 1, cplx{});
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

/// Monic degree-n polynomial with roots at the first n Leja points of E; when
/// n exceeds the sample count the roots cycle through the Leja order.
inline MonicPolynomial small_sup_monic(const SampleSet& E, std::size_t n) {
  if (n < 1) throw precondition_error("small_sup_monic needs n >= 1");
  const LejaSequence seq = leja_points(E, std::min(n, E.size()));
  MonicPolynomial out;
  for (std::size_t k = 0; k < n; ++k) out.roots.push_back(seq.points[k % seq.points.size()]);
  out.coeffs = poly_from_roots(out.roots);
  double sup = 0.0;
  for (const cplx& z : E.points()) {
    double v = 1.0;
    for (const cplx& r : out.roots) v *= std::abs(z - r);
    sup = std::max(sup, v);
  }
  out.sup = sup;
  return out;
}

}  // namespace fpslab

#endif  // FPSLAB_POTENTIAL_HPP
