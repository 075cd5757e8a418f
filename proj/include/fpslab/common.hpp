#ifndef FPSLAB_COMMON_HPP
#define FPSLAB_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace fpslab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Raised when an input violates a stated hypothesis of an operation
/// (h(0) != 0, vanishing linear term, (sigma,tau) = (0,0), ...).
/// The message names the violated hypothesis.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Outcome of a hypothesis guard. A failed guard is reported, not thrown.
struct HypothesisCheck {
  std::string name;
  bool satisfied = true;
  std::string message;
};

/// z^e by repeated squaring. Negative exponents require z != 0.
inline cplx ipow(cplx z, long long e) {
  if (e < 0) {
    if (z == cplx{}) throw std::domain_error("zero raised to a negative power");
    return cplx{1.0} / ipow(z, -e);
  }
  cplx result{1.0};
  cplx base = z;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline double safe_log_abs(cplx z) {
  const double a = std::abs(z);
  return a > 0.0 ? std::log(a) : kNegInf;
}

inline long long gcd_ll(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Parses "2", "-1.5", "2+0i", "0.5-3i", "i", "-2i".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  const auto bad = [&] { return std::invalid_argument("malformed complex literal '" + text + "'"); };
  const auto parse_real = [&](const std::string& part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != part.size()) throw bad();
    return v;
  };
  if (s.back() != 'i') return {parse_real(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(s)};
  return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

}  // namespace fpslab

#endif  // FPSLAB_COMMON_HPP
