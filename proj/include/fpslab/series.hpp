#ifndef FPSLAB_SERIES_HPP
#define FPSLAB_SERIES_HPP

// Truncated formal power series in one and two complex variables, and the
// transforms applied to them: composition, inhomogeneous dilation, weighted
// slicing, reversion, roots, rotations.
//
// Truncation convention: a series of order N carries the coefficients of
// degree 0..N and says nothing about higher degrees. Every operation returns
// the largest order at which its output is fully determined by its inputs.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fpslab/common.hpp"

namespace fpslab {

// ---------------------------------------------------------------------------
// Series1
// ---------------------------------------------------------------------------

class Series1 {
 public:
  Series1() : coeffs_(1, cplx{}) {}

  explicit Series1(int order) : coeffs_(checked_size(order), cplx{}) {}

  explicit Series1(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("Series1 needs at least one coefficient");
    for (const cplx& c : coeffs_)
      if (!is_finite(c)) throw std::invalid_argument("Series1 coefficients must be finite");
  }

  static Series1 monomial(int order, int k, cplx c = 1.0) {
    Series1 s(order);
    if (k <= order) s.coeffs_[k] = c;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }

  cplx operator[](int n) const { return coeffs_[n]; }
  cplx& operator[](int n) { return coeffs_[n]; }

  cplx at(int n) const {
    if (n < 0 || n > order()) throw std::out_of_range("Series1 coefficient beyond truncation order");
    return coeffs_[n];
  }

  std::span<const cplx> coeffs() const { return coeffs_; }

  /// Index of the first nonzero coefficient; order()+1 for the zero series.
  int valuation() const {
    for (int n = 0; n <= order(); ++n)
      if (coeffs_[n] != cplx{}) return n;
    return order() + 1;
  }

  bool is_zero() const { return valuation() > order(); }

  /// Number of nonzero coefficients.
  int term_count() const {
    return static_cast<int>(std::count_if(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c != cplx{}; }));
  }

  Series1 truncated(int new_order) const {
    Series1 out(new_order);
    for (int n = 0; n <= std::min(new_order, order()); ++n) out.coeffs_[n] = coeffs_[n];
    return out;
  }

  cplx eval(cplx x) const {
    cplx acc{};
    for (int n = order(); n >= 0; --n) acc = acc * x + coeffs_[n];
    return acc;
  }

  friend Series1 operator+(const Series1& a, const Series1& b) {
    Series1 out(std::min(a.order(), b.order()));
    for (int n = 0; n <= out.order(); ++n) out.coeffs_[n] = a.coeffs_[n] + b.coeffs_[n];
    return out;
  }
  friend Series1 operator-(const Series1& a, const Series1& b) { return a + (-b); }
  friend Series1 operator-(const Series1& a) { return cplx{-1.0} * a; }
  friend Series1 operator*(cplx k, const Series1& a) {
    Series1 out = a;
    for (cplx& c : out.coeffs_) c *= k;
    return out;
  }

  friend bool operator==(const Series1&, const Series1&) = default;

 private:
  static std::size_t checked_size(int order) {
    if (order < 0) throw std::invalid_argument("series order must be nonnegative");
    return static_cast<std::size_t>(order) + 1;
  }

  std::vector<cplx> coeffs_;
};

/// Product. The result order is min(a.order + val(b), b.order + val(a)),
/// the highest degree fixed by the known coefficients of both factors.
inline Series1 mul(const Series1& a, const Series1& b) {
  const int order = std::min(a.order() + b.valuation(), b.order() + a.valuation());
  Series1 out(order);
  for (int i = 0; i <= std::min(a.order(), order); ++i) {
    if (a[i] == cplx{}) continue;
    for (int j = 0; j <= std::min(b.order(), order - i); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Product truncated to a fixed order (callers guarantee validity).
inline Series1 mul_to(const Series1& a, const Series1& b, int order) {
  Series1 out(order);
  for (int i = 0; i <= std::min(a.order(), order); ++i) {
    if (a[i] == cplx{}) continue;
    for (int j = 0; j <= std::min(b.order(), order - i); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

inline Series1 pow(const Series1& a, int k) {
  if (k < 0) throw precondition_error("negative power of a series");
  if (k == 0) return Series1::monomial(a.order(), 0, 1.0);
  Series1 result = a;
  for (int e = 1; e < k; ++e) result = mul(result, a);
  return result;
}

/// Multiplication by x^k; the order grows by k.
inline Series1 shift_up(const Series1& a, int k) {
  Series1 out(a.order() + k);
  for (int n = 0; n <= a.order(); ++n) out[n + k] = a[n];
  return out;
}

/// Division by x^k; requires the first k coefficients to vanish.
inline Series1 shift_down(const Series1& a, int k) {
  if (a.valuation() < k) throw precondition_error("series is not divisible by x^" + std::to_string(k));
  if (k > a.order()) return Series1(0);
  Series1 out(a.order() - k);
  for (int n = 0; n <= out.order(); ++n) out[n] = a[n + k];
  return out;
}

/// Multiplicative inverse of a series with nonzero constant term.
inline Series1 inverse(const Series1& a) {
  if (a[0] == cplx{}) throw precondition_error("series inverse requires a(0) != 0");
  Series1 out(a.order());
  out[0] = cplx{1.0} / a[0];
  for (int n = 1; n <= a.order(); ++n) {
    cplx acc{};
    for (int k = 1; k <= n; ++k) acc += a[k] * out[n - k];
    out[n] = -acc * out[0];
  }
  return out;
}

/// num / den where den may vanish at 0; the x-power of den must divide num.
inline Series1 divide(const Series1& num, const Series1& den) {
  const int v = den.valuation();
  if (v > den.order()) throw precondition_error("division by the zero series");
  const Series1 reduced_num = shift_down(num, v);
  const Series1 reduced_den = shift_down(den, v);
  return mul_to(reduced_num, inverse(reduced_den), std::min(reduced_num.order(), reduced_den.order()));
}

/// outer(inner(x)) for inner(0) = 0.
inline Series1 compose1(const Series1& outer, const Series1& inner) {
  if (inner[0] != cplx{}) throw precondition_error("composition requires inner(0) = 0");
  const int order = std::min(outer.order(), inner.order());
  Series1 out(order);
  // Horner in the outer variable keeps this O(N^3).
  for (int k = outer.order(); k >= 0; --k) {
    out = mul_to(out, inner, order);
    out[0] += outer[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Series2
// ---------------------------------------------------------------------------

/// Bivariate series with dense triangular storage; a_ij lives at
/// (i+j)(i+j+1)/2 + j.
class Series2 {
 public:
  Series2() : Series2(0) {}

  explicit Series2(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("series order must be nonnegative");
    coeffs_.assign(index(0, order) + 1, cplx{});
  }

  int order() const { return order_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx at(int i, int j) const { return coeffs_[checked_index(i, j)]; }
  cplx& at(int i, int j) { return coeffs_[checked_index(i, j)]; }
  cplx operator()(int i, int j) const { return at(i, j); }

  std::span<const cplx> raw() const { return coeffs_; }

  /// True when some a_ij with j >= 1 is nonzero, i.e. the y-derivative is
  /// nonzero at this truncation order.
  bool depends_on_y() const {
    for (int n = 1; n <= order_; ++n)
      for (int j = 1; j <= n; ++j)
        if (at(n - j, j) != cplx{}) return true;
    return false;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
  }

  /// Coefficient-wise partial derivative in y.
  Series2 derivative_y() const {
    Series2 out(std::max(0, order_ - 1));
    for (int n = 1; n <= order_; ++n)
      for (int j = 1; j <= n; ++j) out.at(n - j, j - 1) = static_cast<double>(j) * at(n - j, j);
    return out;
  }

  Series2 truncated(int new_order) const {
    Series2 out(new_order);
    for (int n = 0; n <= std::min(order_, new_order); ++n)
      for (int j = 0; j <= n; ++j) out.at(n - j, j) = at(n - j, j);
    return out;
  }

  cplx eval(cplx x, cplx y) const {
    cplx acc{};
    for (int n = 0; n <= order_; ++n)
      for (int j = 0; j <= n; ++j) acc += at(n - j, j) * ipow(x, n - j) * ipow(y, j);
    return acc;
  }

  friend Series2 operator+(const Series2& a, const Series2& b) {
    Series2 out(std::min(a.order_, b.order_));
    for (std::size_t k = 0; k < out.coeffs_.size(); ++k) out.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
    return out;
  }
  friend Series2 operator-(const Series2& a, const Series2& b) { return a + (cplx{-1.0} * b); }
  friend Series2 operator*(cplx k, const Series2& a) {
    Series2 out = a;
    for (cplx& c : out.coeffs_) c *= k;
    return out;
  }

  friend bool operator==(const Series2&, const Series2&) = default;

  static std::size_t index(int i, int j) {
    const std::size_t n = static_cast<std::size_t>(i + j);
    return n * (n + 1) / 2 + static_cast<std::size_t>(j);
  }

 private:
  std::size_t checked_index(int i, int j) const {
    if (i < 0 || j < 0) throw std::out_of_range("negative exponent in Series2 query");
    if (i + j > order_) throw std::out_of_range("Series2 coefficient beyond truncation order");
    return index(i, j);
  }

  int order_;
  std::vector<cplx> coeffs_;
};

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Exponents (sigma, tau) of the dilation (x, y) -> (s^sigma x, s^tau y).
class WeightPair {
 public:
  WeightPair(int sigma, int tau) : sigma_(sigma), tau_(tau) {
    if (sigma == 0 && tau == 0) throw precondition_error("weights (0,0) are excluded: (sigma,tau) must be nonzero");
  }

  int sigma() const { return sigma_; }
  int tau() const { return tau_; }
  int tau_plus() const { return std::max(0, tau_); }
  int tau_minus() const { return -std::min(0, tau_); }

  /// gcd 1, sigma >= 0, and sigma = 0 only with tau = -1.
  bool is_canonical() const {
    return gcd_ll(sigma_, tau_) == 1 && sigma_ >= 0 && (sigma_ != 0 || tau_ == -1);
  }

  int weight(int i, int j) const { return sigma_ * i + tau_ * j; }

  friend bool operator==(const WeightPair&, const WeightPair&) = default;

 private:
  int sigma_;
  int tau_;
};

/// Transform of the parameter set induced by normalizing the weights: the
/// new set is {s : s^(sign*root_degree) in E}.
struct EMapDescriptor {
  int root_degree = 1;
  bool invert = false;

  bool is_identity() const { return root_degree == 1 && !invert; }

  /// All s with s^(+-d) = e.
  std::vector<cplx> preimage(cplx e) const {
    if (e == cplx{}) throw precondition_error("parameter 0 has no preimage under the weight normalization map");
    const cplx target = invert ? cplx{1.0} / e : e;
    std::vector<cplx> out;
    out.reserve(root_degree);
    const cplx principal = root_degree == 1 ? target : std::pow(target, 1.0 / root_degree);
    for (int k = 0; k < root_degree; ++k) out.push_back(principal * std::polar(1.0, 2.0 * kPi * k / root_degree));
    return out;
  }

  /// e^(+-d): the parameter under which the normalized weights reproduce the
  /// original restriction, g(e^sigma x, e^tau h) = g(t^sigma' x, t^tau' h).
  cplx image(cplx e) const {
    if (invert && e == cplx{}) throw precondition_error("parameter 0 cannot be inverted");
    return ipow(e, invert ? -root_degree : root_degree);
  }

  std::string describe() const {
    if (is_identity()) return "identity";
    std::string out;
    if (root_degree > 1) out = "root(d=" + std::to_string(root_degree) + ")";
    if (invert) out += out.empty() ? "inversion" : "+inversion";
    return out;
  }
};

/// Divides out gcd(|sigma|,|tau|) and flips signs so that sigma >= 0 and
/// (0, 1) becomes (0, -1).
inline std::pair<WeightPair, EMapDescriptor> normalize_weights(const WeightPair& w) {
  const int d = static_cast<int>(gcd_ll(w.sigma(), w.tau()));
  int sigma = w.sigma() / d;
  int tau = w.tau() / d;
  EMapDescriptor map{d, false};
  if (sigma < 0 || (sigma == 0 && tau == 1)) {
    sigma = -sigma;
    tau = -tau;
    map.invert = true;
  }
  return {WeightPair(sigma, tau), map};
}

// ---------------------------------------------------------------------------
// Substitution machinery
// ---------------------------------------------------------------------------

/// Rows c_jk = [x^k] base^j for 0 <= j <= maxj, 0 <= k <= order.
class PowerTable {
 public:
  PowerTable(const Series1& base, int maxj) : base_(base), maxj_(maxj) {
    if (base[0] != cplx{}) throw precondition_error("power table requires h(0) = 0");
    if (maxj < 0) throw std::invalid_argument("power table needs maxj >= 0");
    const int order = base.order();
    rows_.reserve(maxj + 1);
    rows_.push_back(Series1::monomial(order, 0, 1.0));
    for (int j = 1; j <= maxj; ++j) rows_.push_back(mul_to(rows_.back(), base, order));
  }

  int maxj() const { return maxj_; }
  int order() const { return base_.order(); }
  const Series1& base() const { return base_; }
  const Series1& row(int j) const { return rows_.at(j); }

  cplx operator()(int j, int k) const {
    if (k < 0 || k > order() || j < 0 || j > maxj_) return cplx{};
    return rows_[j][k];
  }

 private:
  Series1 base_;
  int maxj_;
  std::vector<Series1> rows_;
};

inline PowerTable power_table(const Series1& h, int maxj) { return PowerTable(h, maxj); }

/// g(x, h(x)). The output order is min(g.order, h.order).
inline Series1 compose(const Series2& g, const Series1& h) {
  if (h[0] != cplx{}) throw precondition_error("composition requires h(0) = 0");
  const int order = std::min(g.order(), h.order());
  const PowerTable table(h.truncated(order), order);
  Series1 out(order);
  for (int n = 0; n <= order; ++n) {
    cplx acc{};
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n - i; ++j) {
        const cplx a = g.at(i, j);
        if (a != cplx{}) acc += a * table(j, n - i);
      }
    out[n] = acc;
  }
  return out;
}

/// a_ij -> s^(sigma i + tau j) a_ij.
inline Series2 dilate(const Series2& g, const WeightPair& w, cplx s) {
  Series2 out(g.order());
  for (int n = 0; n <= g.order(); ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      const cplx a = g.at(i, j);
      if (a == cplx{}) continue;
      const int e = w.weight(i, j);
      if (s == cplx{} && e < 0) throw std::domain_error("s = 0 with a negative dilation exponent");
      out.at(i, j) = a * ipow(s, e);
    }
  return out;
}

/// g(s^sigma x, s^tau h(x)).
inline Series1 anisotropic_substitute(const Series2& g, const Series1& h, const WeightPair& w, cplx s) {
  if (s == cplx{} && (w.sigma() < 0 || w.tau() < 0))
    throw std::domain_error("s = 0 is not allowed with a negative weight");
  if (h[0] != cplx{}) throw precondition_error("substitution requires h(0) = 0");
  return compose(dilate(g, w, s), h);
}

/// Coefficient-wise moduli; used to measure the magnitude scale of a
/// computation so that identity checks can be stated relative to it.
inline Series1 abs_series(const Series1& a) {
  Series1 out(a.order());
  for (int n = 0; n <= a.order(); ++n) out[n] = std::abs(a[n]);
  return out;
}

inline Series2 abs_series(const Series2& a) {
  Series2 out(a.order());
  for (int n = 0; n <= a.order(); ++n)
    for (int j = 0; j <= n; ++j) out.at(n - j, j) = std::abs(a.at(n - j, j));
  return out;
}

/// Per-degree sum of the moduli of all terms entering g(s^sigma x, s^tau h(x)).
inline Series1 substitution_scale(const Series2& g, const Series1& h, const WeightPair& w, cplx s) {
  return anisotropic_substitute(abs_series(g), abs_series(h), w, std::abs(s));
}

/// Table of d_pq = sum over sigma i + tau j = q of a_ij c_{j,p-i}.
/// Row p carries the coefficients of u_p(s) = sum_q d_pq s^q; row 0 holds the
/// constant term a_00.
class DTable {
 public:
  DTable(WeightPair w, int rows)
      : w_(w), rows_(rows), qlo_(-w.tau_minus() * rows), qhi_((w.sigma() + w.tau_plus()) * rows) {
    data_.assign(static_cast<std::size_t>(rows + 1) * width(), cplx{});
  }

  const WeightPair& weights() const { return w_; }
  int rows() const { return rows_; }
  int q_lo() const { return qlo_; }
  int q_hi() const { return qhi_; }
  int q_min(int p) const { return -w_.tau_minus() * p; }
  int q_max(int p) const { return (w_.sigma() + w_.tau_plus()) * p; }

  cplx operator()(int p, int q) const {
    if (p < 0 || p > rows_ || q < qlo_ || q > qhi_) return cplx{};
    return data_[slot(p, q)];
  }
  cplx& ref(int p, int q) { return data_.at(slot(p, q)); }

  /// u_p(s) = sum_q d_pq s^q.
  cplx u(int p, cplx s) const {
    cplx acc{};
    for (int q = q_min(p); q <= q_max(p); ++q) {
      const cplx d = (*this)(p, q);
      if (d != cplx{}) acc += d * ipow(s, q);
    }
    return acc;
  }

  /// sum_p d_pq x^p.
  Series1 column(int q) const {
    Series1 out(rows_);
    for (int p = 0; p <= rows_; ++p) out[p] = (*this)(p, q);
    return out;
  }

  /// Coefficients of s^(tau^- p) u_p(s) as an ordinary polynomial in s.
  std::vector<cplx> shifted_row(int p) const {
    std::vector<cplx> out;
    for (int q = q_min(p); q <= q_max(p); ++q) out.push_back((*this)(p, q));
    return out;
  }

 private:
  std::size_t width() const { return static_cast<std::size_t>(qhi_ - qlo_ + 1); }
  std::size_t slot(int p, int q) const { return static_cast<std::size_t>(p) * width() + static_cast<std::size_t>(q - qlo_); }

  WeightPair w_;
  int rows_;
  int qlo_;
  int qhi_;
  std::vector<cplx> data_;
};

inline DTable d_table(const Series2& g, const Series1& h, const WeightPair& w) {
  if (h[0] != cplx{}) throw precondition_error("d-table requires h(0) = 0");
  if (!w.is_canonical()) throw precondition_error("d-table requires canonical weights");
  const int rows = std::min(g.order(), h.order());
  const PowerTable c(h.truncated(rows), rows);
  DTable table(w, rows);
  // Only c_{j,p-i} with j <= p - i is nonzero, so i + j <= p.
  for (int p = 0; p <= rows; ++p)
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p - i; ++j) {
        const cplx a = g.at(i, j);
        if (a == cplx{}) continue;
        table.ref(p, w.weight(i, j)) += a * c(j, p - i);
      }
  return table;
}

// ---------------------------------------------------------------------------
// Weighted slices
// ---------------------------------------------------------------------------

/// The part of g on the weight line sigma i + tau j = q, with the lattice
/// anchor (lambda, mu) and the one-variable series psi_q read along it.
///
/// For sigma, tau > 0 the lattice points are (lambda - k tau, mu + k sigma),
/// k = 0..omega-1, and g_q = x^lambda y^mu psi_q(x^-tau y^sigma). Otherwise
/// they are (lambda + k|tau|, mu + k sigma), k >= 0, and
/// g_q = x^lambda y^mu psi_q(x^|tau| y^sigma). The anchor is the lattice
/// point with the least mu, independent of which coefficients vanish.
struct Slice {
  int q = 0;
  Series2 part;
  /// Lattice points of the weight line inside the truncation, in k order.
  std::vector<std::pair<int, int>> support;
  /// Number of lattice points on the full (untruncated) line; -1 if infinite.
  int lattice_size = 0;
  int lambda = 0;
  int mu = 0;
  Series1 psi;
  /// Every lattice point of the line lies inside the truncation.
  bool complete = true;

  int omega() const { return static_cast<int>(support.size()); }
  bool empty() const { return support.empty(); }

  /// Anchor and psi after dropping leading zero coefficients of psi, i.e. the
  /// least-mu point among the nonzero terms of g_q.
  struct Reduced {
    int lambda;
    int mu;
    Series1 psi;
  };
};

namespace detail {

/// Least-mu lattice point of sigma i + tau j = q with i, j >= 0.
inline std::optional<std::pair<int, int>> lattice_anchor(const WeightPair& w, int q) {
  const int sigma = w.sigma();
  const int tau = w.tau();
  if (sigma == 0) {  // canonical: tau = -1
    if (q > 0) return std::nullopt;
    return std::pair{0, -q};
  }
  int jmax = 0;
  if (tau > 0) {
    if (q < 0) return std::nullopt;
    jmax = q / tau;
  } else if (tau < 0) {
    const int need = q < 0 ? (-q + (-tau) - 1) / (-tau) : 0;
    jmax = need + sigma;
  } else {
    jmax = 0;
  }
  for (int j = 0; j <= jmax; ++j) {
    const int rest = q - tau * j;
    if (rest >= 0 && rest % sigma == 0) return std::pair{rest / sigma, j};
  }
  return std::nullopt;
}

inline Slice make_slice(const Series2& g, const WeightPair& w, int q) {
  Slice s;
  s.q = q;
  s.part = Series2(g.order());
  s.psi = Series1(0);
  const auto anchor = lattice_anchor(w, q);
  if (!anchor) {
    s.lattice_size = 0;
    return s;
  }
  s.lambda = anchor->first;
  s.mu = anchor->second;
  const int order = g.order();
  const bool finite_case = w.sigma() > 0 && w.tau() > 0;
  std::vector<cplx> psi;
  if (finite_case) {
    const int count = s.lambda / w.tau() + 1;
    s.lattice_size = count;
    for (int k = 0; k < count; ++k) {
      const int i = s.lambda - k * w.tau();
      const int j = s.mu + k * w.sigma();
      if (i + j <= order) {
        s.support.emplace_back(i, j);
        psi.push_back(g.at(i, j));
        s.part.at(i, j) = g.at(i, j);
      } else {
        psi.push_back(cplx{});
        s.complete = false;
      }
    }
  } else {
    s.lattice_size = -1;
    s.complete = false;
    for (int k = 0;; ++k) {
      const int i = s.lambda + k * std::abs(w.tau());
      const int j = s.mu + k * w.sigma();
      if (i + j > order) break;
      s.support.emplace_back(i, j);
      psi.push_back(g.at(i, j));
      s.part.at(i, j) = g.at(i, j);
    }
  }
  if (!psi.empty()) s.psi = Series1(std::move(psi));
  return s;
}

}  // namespace detail

inline Slice::Reduced reduced(const Slice& s, const WeightPair& w) {
  int k0 = 0;
  while (k0 <= s.psi.order() && s.psi[k0] == cplx{}) ++k0;
  if (k0 > s.psi.order()) return {s.lambda, s.mu, Series1(0)};
  std::vector<cplx> rest(s.psi.coeffs().begin() + k0, s.psi.coeffs().end());
  const bool finite_case = w.sigma() > 0 && w.tau() > 0;
  const int lambda = finite_case ? s.lambda - k0 * w.tau() : s.lambda + k0 * std::abs(w.tau());
  return {lambda, s.mu + k0 * w.sigma(), Series1(std::move(rest))};
}

class SliceDecomposition {
 public:
  SliceDecomposition(WeightPair w, int order, std::vector<Slice> slices)
      : w_(w), order_(order), slices_(std::move(slices)) {}

  const WeightPair& weights() const { return w_; }
  const std::vector<Slice>& slices() const { return slices_; }

  /// The slice for q; an empty slice when no lattice point of weight q lies
  /// inside the truncation.
  Slice slice(int q) const {
    for (const Slice& s : slices_)
      if (s.q == q) return s;
    Slice empty;
    empty.q = q;
    empty.part = Series2(order_);
    empty.psi = Series1(0);
    return empty;
  }

  Series2 reassemble() const {
    Series2 out(order_);
    for (const Slice& s : slices_)
      for (const auto& [i, j] : s.support) out.at(i, j) += s.part.at(i, j);
    return out;
  }

 private:
  WeightPair w_;
  int order_;
  std::vector<Slice> slices_;
};

inline SliceDecomposition slices(const Series2& g, const WeightPair& w) {
  if (!w.is_canonical()) throw precondition_error("slicing requires canonical weights");
  std::map<int, bool> seen;
  for (int n = 0; n <= g.order(); ++n)
    for (int j = 0; j <= n; ++j) seen[w.weight(n - j, j)] = true;
  std::vector<Slice> out;
  out.reserve(seen.size());
  for (const auto& [q, _] : seen) out.push_back(detail::make_slice(g, w, q));
  return SliceDecomposition(w, g.order(), std::move(out));
}

/// g_q: the terms of g with sigma i + tau j = q.
inline Series2 weighted_part(const Series2& g, const WeightPair& w, int q) {
  Series2 out(g.order());
  for (int n = 0; n <= g.order(); ++n)
    for (int j = 0; j <= n; ++j)
      if (w.weight(n - j, j) == q) out.at(n - j, j) = g.at(n - j, j);
  return out;
}

/// phi_q(x) = g_q(x, h(x)).
inline Series1 phi_q(const Series2& g, const Series1& h, const WeightPair& w, int q) {
  return compose(weighted_part(g, w, q), h);
}

// ---------------------------------------------------------------------------
// Reversion and roots
// ---------------------------------------------------------------------------

/// Compositional inverse: phi(u(x)) = x = u(phi(x)).
inline Series1 reversion(const Series1& u) {
  if (u[0] != cplx{}) throw precondition_error("reversion requires u(0) = 0");
  if (u.order() < 1 || u[1] == cplx{}) throw precondition_error("reversion requires u'(0) != 0");
  const int order = u.order();
  const PowerTable c(u, order);
  Series1 phi(order);
  phi[1] = cplx{1.0} / u[1];
  cplx lead = u[1];  // u1^n
  for (int n = 2; n <= order; ++n) {
    lead *= u[1];
    cplx acc{};
    for (int k = 1; k < n; ++k) acc += phi[k] * c(k, n);
    phi[n] = -acc / lead;
  }
  return phi;
}

/// beta with beta^nu = w, for w = c x^nu (1 + ...), principal branch of
/// c^(1/nu). The result has order w.order - nu + 1.
inline Series1 nth_root(const Series1& w, int nu) {
  if (nu < 1) throw precondition_error("root degree must be positive");
  if (w.valuation() != nu)
    throw precondition_error("nth_root requires vanishing order exactly nu = " + std::to_string(nu));
  const cplx lead = w[nu];
  const int m = w.order() - nu;
  std::vector<cplx> v(m + 1);
  for (int k = 0; k <= m; ++k) v[k] = w[nu + k] / lead;
  // (1 + v)^(1/nu) by the power recurrence n a_n = sum ((alpha+1)k - n) v_k a_{n-k}.
  const double alpha = 1.0 / nu;
  std::vector<cplx> a(m + 1);
  a[0] = 1.0;
  for (int n = 1; n <= m; ++n) {
    cplx acc{};
    for (int k = 1; k <= n; ++k) acc += ((alpha + 1.0) * k - n) * v[k] * a[n - k];
    a[n] = acc / static_cast<double>(n);
  }
  const cplx root_lead = nu == 1 ? lead : std::pow(lead, alpha);
  Series1 beta(m + 1);
  for (int n = 0; n <= m; ++n) beta[n + 1] = root_lead * a[n];
  return beta;
}

// ---------------------------------------------------------------------------
// Linear changes of variables
// ---------------------------------------------------------------------------

/// f(m00 x + m01 y, m10 x + m11 y). Degree levels are mapped to themselves.
inline Series2 linear_change(const Series2& f, cplx m00, cplx m01, cplx m10, cplx m11) {
  const int order = f.order();
  // Homogeneous polynomials in (x, y) of degree d as vectors indexed by the y-exponent.
  using Homog = std::vector<cplx>;
  const auto multiply = [](const Homog& a, const Homog& b) {
    Homog out(a.size() + b.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };
  std::vector<Homog> xp{Homog{1.0}}, yp{Homog{1.0}};
  const Homog lx{m00, m01};
  const Homog ly{m10, m11};
  for (int d = 1; d <= order; ++d) {
    xp.push_back(multiply(xp.back(), lx));
    yp.push_back(multiply(yp.back(), ly));
  }
  Series2 out(order);
  for (int n = 0; n <= order; ++n) {
    Homog level(n + 1, cplx{});
    for (int j = 0; j <= n; ++j) {
      const cplx a = f.at(n - j, j);
      if (a == cplx{}) continue;
      const Homog term = multiply(xp[n - j], yp[j]);
      for (int k = 0; k <= n; ++k) level[k] += a * term[k];
    }
    for (int k = 0; k <= n; ++k) out.at(n - k, k) = level[k];
  }
  return out;
}

/// f_theta(x, y) = f(x cos - y sin, x sin + y cos).
inline Series2 rotate2(const Series2& f, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return linear_change(f, c, -s, s, c);
}

/// g(x, y) = f((x + y)/2, -i (x - y)/2).
inline Series2 to_pm(const Series2& f) {
  const cplx i{0.0, 1.0};
  return linear_change(f, 0.5, 0.5, -0.5 * i, 0.5 * i);
}

/// f(x, y) = g(x + i y, x - i y).
inline Series2 from_pm(const Series2& g) {
  const cplx i{0.0, 1.0};
  return linear_change(g, 1.0, i, 1.0, -i);
}

/// a_ij -> alpha^i beta^j a_ij.
inline Series2 scale_vars(const Series2& f, cplx alpha, cplx beta) {
  Series2 out(f.order());
  for (int n = 0; n <= f.order(); ++n)
    for (int j = 0; j <= n; ++j) out.at(n - j, j) = f.at(n - j, j) * ipow(alpha, n - j) * ipow(beta, j);
  return out;
}

/// h_s(x) = s^-1 h(s x).
inline Series1 dilate_curve(const Series1& h, cplx s) {
  if (s == cplx{}) throw std::domain_error("curve dilation requires s != 0");
  if (h[0] != cplx{}) throw precondition_error("curve dilation requires h(0) = 0");
  Series1 out(h.order());
  for (int i = 1; i <= h.order(); ++i) out[i] = h[i] * ipow(s, i - 1);
  return out;
}

/// g_s(t) = g(s1 t, s2 t).
inline Series1 directional_restrict(const Series2& g, cplx s1, cplx s2) {
  Series1 out(g.order());
  for (int n = 0; n <= g.order(); ++n) {
    cplx acc{};
    for (int j = 0; j <= n; ++j) {
      const cplx a = g.at(n - j, j);
      if (a != cplx{}) acc += a * ipow(s1, n - j) * ipow(s2, j);
    }
    out[n] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis guards
// ---------------------------------------------------------------------------

/// For sigma tau > 0, h must not be a monomial b_k x^k with sigma k = tau.
inline HypothesisCheck check_monomial_exclusion(const Series1& h, const WeightPair& w) {
  HypothesisCheck out{"monomial_exclusion", true, "h is not an excluded monomial"};
  if (static_cast<long long>(w.sigma()) * w.tau() <= 0) {
    out.message = "not applicable: sigma*tau <= 0";
    return out;
  }
  if (h.term_count() != 1) return out;
  const int k = h.valuation();
  if (w.sigma() * k - w.tau() == 0) {
    out.satisfied = false;
    out.message = "h is a monomial b_k x^k with sigma*k - tau = 0 (k = " + std::to_string(k) + ")";
  }
  return out;
}

}  // namespace fpslab

#endif  // FPSLAB_SERIES_HPP
