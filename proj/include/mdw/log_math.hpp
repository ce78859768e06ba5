#ifndef MDW_LOG_MATH_HPP
#define MDW_LOG_MATH_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

namespace mdw {

__extension__ typedef __int128 int128;

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// ln(1 - exp(-d)) for d > 0, accurate for both tiny and large d.
inline double log1mexp(double d) {
  if (d <= 0.0) return neg_inf;
  return d < M_LN2 ? std::log(-std::expm1(-d)) : std::log1p(-std::exp(-d));
}

/// ln(exp(-x) - exp(-y)) for y >= x.
inline double log_diff_exp_neg(double x, double y) {
  return -x + log1mexp(y - x);
}

/// hi^alpha - lo^alpha without cancellation when hi and lo are close.
inline double pow_gap(double lo, double hi, double alpha) {
  if (lo <= 0.0) return std::pow(hi, alpha);
  return std::pow(lo, alpha) * std::expm1(alpha * std::log1p((hi - lo) / lo));
}

inline double log_add_exp(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Running log-domain sum; exact zero is represented as -inf.
class LogSum {
 public:
  void add(double log_term) { value_ = log_add_exp(value_, log_term); }
  double value() const { return value_; }

 private:
  double value_ = neg_inf;
};

std::uint64_t isqrt(std::uint64_t x);
int128 isqrt(int128 x);

/// Base-10 string of a 128-bit integer.
std::string to_string(int128 x);

}  // namespace mdw

#endif  // MDW_LOG_MATH_HPP
