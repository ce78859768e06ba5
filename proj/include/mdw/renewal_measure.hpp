#ifndef MDW_RENEWAL_MEASURE_HPP
#define MDW_RENEWAL_MEASURE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "mdw/params.hpp"

namespace mdw {

/// ln(1 - 1/e): the stationary mass of the origin, for every alpha.
inline const double log_mu0 = std::log(-std::expm1(-1.0));

/// ln mu_n. Defined for n = 0 and n >= 2; n = 1 (and negative n) throws DomainError.
double log_mu(const Params& params, std::int64_t n);

/// Same closed form evaluated at a real-valued interval length c >= 2.
/// Used by certificates whose interval lengths exceed the 64-bit range.
double log_mu_real(const Params& params, double c);

/// ln P[A + B > k] = -k^alpha under the stationary law, k >= 1.
double log_interval_tail(const Params& params, double k);

/// E tau = 1 / mu_0 = e / (e - 1).
double mean_tau(const Params& params);

/// A truncated series value together with a rigorous bound on its absolute error.
struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;
  std::int64_t blocks = 0;
};

/// Nonnegative weight w(tau) = coef(tau) * tau^{-decay} / (tau - 1) over tau >= 2.
/// coef must be nondecreasing and bounded by tau^growth, with growth - decay <= 1.
struct SizeBiasedWeight {
  std::function<double(std::int64_t)> coef;
  double decay = 0.0;
  double growth = 0.0;
};

/// Sum over tau >= start of (tau - 1) mu_tau w(tau) = sum of (e^{-(tau-1)^a} - e^{-tau^a}) w(tau).
///
/// Terms are summed one by one while they matter and then in blocks, each block
/// enclosed between the extreme weights times its exact closed-form mass; the
/// neglected tail is bounded by sup w times exp(-E^alpha). Throws
/// UnreachablePrecision if the certified error cannot be pushed below abs_tol.
SeriesValue size_biased_series(const Params& params, const SizeBiasedWeight& weight,
                               std::int64_t start, double abs_tol);

/// sum_{k > n} p_k, the survival function of the renewal interval law, n >= 1.
SeriesValue interval_survival(const Params& params, std::int64_t n, double rel_tol = 1e-6);

/// ln p_n. For n >= 2 this is ln mu_n - ln mu_0; p_1 = 1 - sum_{k>=2} p_k is summed
/// with a certified remainder below tol.
double log_p(const Params& params, std::int64_t n, double tol = 1e-10);

/// Number of nonzero rewards in an excursion of length tau: min(floor(sqrt tau), tau - 1).
std::int64_t reward_count(std::int64_t tau);

/// E X^2 for the per-excursion reward X = +-reward_count(tau) tau^{-beta}, tau ~ p.
/// Absolute error < tol is certified; throws UnreachablePrecision otherwise.
double second_moment_jump(const Params& params, double tol);

struct ProcessStats {
  double mean_tau;
  double second_moment_jump;
  double sigma;
};

/// sigma = sqrt(E X^2 / E tau).
ProcessStats sigma(const Params& params, double tol);

/// Tabulated log_mu for n in {0} U {2..N}; entry 1 is NaN.
class MeasureTable {
 public:
  MeasureTable(const Params& params, std::int64_t truncation_n);

  const Params& params() const { return params_; }
  std::int64_t truncation_n() const { return truncation_n_; }
  const Eigen::ArrayXd& log_mu() const { return log_mu_; }
  double mu(std::int64_t n) const;
  /// ln of the neglected size-biased mass sum_{k>N} (k-1) mu_k = -N^alpha.
  double tail_bound() const { return tail_bound_; }

 private:
  Params params_;
  std::int64_t truncation_n_;
  Eigen::ArrayXd log_mu_;
  double tail_bound_;
};

}  // namespace mdw

#endif  // MDW_RENEWAL_MEASURE_HPP
