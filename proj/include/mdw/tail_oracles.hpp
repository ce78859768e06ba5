#ifndef MDW_TAIL_ORACLES_HPP
#define MDW_TAIL_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdw/log_math.hpp"
#include "mdw/params.hpp"
#include "mdw/renewal_measure.hpp"

namespace mdw {

/// The event {S_n / sqrt(n) > c n^gamma}.
struct RateQuery {
  std::int64_t n;
  double gamma;
  double c;

  /// Threshold in sum units, c n^{gamma + 1/2}.
  double threshold() const;
};

struct TailEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::int64_t reps = 0;
  std::int64_t hits = 0;
};

/// Two-sided Wilson score interval; zero hits use the exact upper limit
/// 1 - (1 - confidence)^{1/reps} (rule of three at 95%).
TailEstimate wilson_interval(std::int64_t hits, std::int64_t reps, double confidence);

enum class TailTarget { total, tilde, boundary, double_prime };
enum class TailSide { upper, lower };

std::string to_string(TailTarget target);
TailTarget parse_tail_target(const std::string& name);

/// Independent streams (seed, 0..shards-1) each simulating its share of reps.
struct McPlan {
  std::int64_t reps = 1;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  int shards = 1;
};

/// Monte Carlo estimates of P[target > x] (or P[target < -x]) for every x in
/// thresholds, sharing one set of simulated paths. Deterministic in (seed, shards).
std::vector<TailEstimate> mc_tail_grid(const Params& params, std::int64_t n,
                                       const std::vector<double>& thresholds, TailTarget target,
                                       const McPlan& plan, TailSide side = TailSide::upper);

/// Exceedance of query.threshold() by the chosen component.
TailEstimate mc_tail(const Params& params, const RateQuery& query, TailTarget target,
                     const McPlan& plan, TailSide side = TailSide::upper);

/// ln P[S''_n > x] for x > 0, by enumerating end states (A_n, B_n).
///
/// Exactly -inf when x >= n^{1-2beta}. The enumeration stops once the certified
/// remainder is below rel_share of the accumulated value; throws
/// UnreachablePrecision if that cannot be reached within the work cap.
double boundary_tail_exact(const Params& params, std::int64_t n, double x,
                           double rel_share = 1e-9);

/// Deterministic bounds: |S'_n|, |S''_n| <= n^{1-2beta} each, and since the two
/// boundary excursions occupy disjoint time slots, |S'_n + S''_n| <= 2 (n/2)^{1-2beta}.
double boundary_term_bound(const Params& params, std::int64_t n);
double boundary_sum_bound(const Params& params, std::int64_t n);

enum class CertificateKind { case1_upper, case2_lower };

struct RateCertificate {
  CertificateKind kind;
  std::int64_t n = 0;
  double gamma = 0.0;
  double c = 0.0;
  // case-2 construction; zero for case 1
  int128 c_n = 0;
  int128 a_n = 0;
  int128 b_n = 0;
  double magnitude = 0.0;  // certified |S''_n| (case 2)
  double threshold = 0.0;
  double log_prob = 0.0;
  double rate = 0.0;
};

/// Lower bound ln(1/4) + ln mu_{c_n} for gamma in (u, v), with c_n at the
/// log-midpoint of the admissible bracket. Throws DomainError outside (u, v) and
/// BracketEmpty (carrying the smallest valid horizon found) when the
/// construction does not validate at query.n.
RateCertificate case2_certificate(const Params& params, const RateQuery& query);

/// Upper bound ln 2 - floor(x^{1/(1/2-beta)})^alpha with x = c n^{gamma+1/2} / 2,
/// for gamma in (0, u). Throws DomainError otherwise.
RateCertificate case1_upper(const Params& params, const RateQuery& query);

/// log_p / n^{2 gamma}.
double rate_transform(double log_p, std::int64_t n, double gamma);

/// The normal moderate-deviation rate -c^2/2.
double gaussian_reference(double c);

/// r(k) = E X_t X_{t+k} = sum_tau mu_tau tau^{-2beta} #{a >= 1 : a + k <= tau - 1, (a+k)^2 <= tau}.
SeriesValue autocovariance_exact(const Params& params, std::int64_t k, double tol);

/// r(k) <= exp(-((k+1)^2 - 1)^alpha) for k >= 1.
double autocovariance_dominance_bound(const Params& params, std::int64_t k);

/// 0 inside a window, -c^2/2 elsewhere in (0, 1/2). Throws DomainError on
/// window endpoints and outside (0, 1/2).
double predicted_rate(const WindowSet& windows, double gamma, double c);

}  // namespace mdw

#endif  // MDW_TAIL_ORACLES_HPP
