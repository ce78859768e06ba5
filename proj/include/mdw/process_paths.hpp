#ifndef MDW_PROCESS_PATHS_HPP
#define MDW_PROCESS_PATHS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <vector>

#include "mdw/chain_sampler.hpp"
#include "mdw/params.hpp"
#include "mdw/rng.hpp"

namespace mdw {

/// phi(k, l) = (k + l)^{-beta} if k^2 <= k + l, else 0. Requires k, l >= 1.
double phi(const Params& params, std::int64_t k, std::int64_t l);

/// phi at an arbitrary state, 0 at the origin.
double phi(const Params& params, const ChainState& state);

/// |reward| of a full excursion of length tau: reward_count(tau) * tau^{-beta}; 0 for tau = 1.
double excursion_reward_magnitude(const Params& params, std::int64_t tau);

struct SignedPath {
  std::vector<ChainState> states;      // times 1..n
  std::map<std::int64_t, int> signs;  // excursion start time t - A_t -> +-1
  Eigen::VectorXd x;                   // X_t
};

/// Stationary path of X_t = sign(t - A_t) phi(A_t, B_t) on times 1..n.
SignedPath generate_path(ChainSampler& sampler, std::int64_t n, RngStream& rng);

/// S_n = S'_n + S~_n + S''_n, split at the first and last renewal in [1, n].
struct SumDecomposition {
  double s_prime = 0.0;
  double s_tilde = 0.0;
  double s_double_prime = 0.0;
  double s_total = 0.0;
  bool interior_renewal = false;
  ChainState first;  // (A_1, B_1)
  ChainState last;   // (A_n, B_n)
};

SumDecomposition decompose(const SignedPath& path);

/// Nonzero rewards among times 1..1+b when (A_1, B_1) = (a, b) and 1 + b <= n; else 0.
std::int64_t s_prime_count(std::int64_t a, std::int64_t b, std::int64_t n);

/// Nonzero rewards among times max(1, n-a+1)..n when (A_n, B_n) = (a, b).
std::int64_t s_double_prime_count(std::int64_t a, std::int64_t b, std::int64_t n);

/// Same decomposition as decompose(generate_path(...)) drawn excursion by excursion,
/// consuming the random stream in the same order, so integer fields agree exactly
/// and sums agree up to summation order.
SumDecomposition sample_sums(ChainSampler& sampler, std::int64_t n, RngStream& rng);

/// Boundary terms only.
struct BoundaryDraw {
  double s_prime = 0.0;
  double s_double_prime = 0.0;
  bool interior_renewal = false;
  ChainState first;
  ChainState last;
};

/// Exact sampler of (S'_n, S''_n) that skips the interior of the path.
///
/// Given the first renewal r, the last-renewal age satisfies
/// P[A_n = a] = u(n - r - a) P[tau > a], with u the renewal mass function; a is
/// drawn by proposing from P[tau > a] and accepting with probability u(.).
class BoundarySampler {
 public:
  BoundarySampler(const Params& params, std::int64_t n);

  std::int64_t horizon() const { return n_; }
  /// Probability of a renewal j steps after a renewal, 0 <= j <= n.
  double renewal_mass(std::int64_t j) const { return renewal_(j); }

  BoundaryDraw draw(RngStream& rng);

 private:
  ChainSampler sampler_;
  std::int64_t n_;
  Eigen::ArrayXd renewal_;    // u(0..n)
  Eigen::ArrayXd cum_tail_;   // sum_{a<=j} P[tau > a]
};

}  // namespace mdw

#endif  // MDW_PROCESS_PATHS_HPP
