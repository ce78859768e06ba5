#include "mdw/process_paths.hpp"

#include <algorithm>
#include <cmath>

#include "mdw/errors.hpp"
#include "mdw/log_math.hpp"
#include "mdw/renewal_measure.hpp"

namespace mdw {

namespace {

double damping(const Params& params, std::int64_t tau) {
  return std::pow(static_cast<double>(tau), -params.beta());
}

std::int64_t floor_sqrt(std::int64_t x) {
  return static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(x)));
}

}  // namespace

double phi(const Params& params, std::int64_t k, std::int64_t l) {
  if (k < 1 || l < 1) throw DomainError("phi(k, l) requires k, l >= 1");
  // k^2 <= k + l without forming k^2
  if (k > floor_sqrt(k + l)) return 0.0;
  return damping(params, k + l);
}

double phi(const Params& params, const ChainState& state) {
  if (state.is_origin()) return 0.0;
  return phi(params, state.age, state.residual);
}

double excursion_reward_magnitude(const Params& params, std::int64_t tau) {
  if (tau < 1) throw DomainError("excursion length must be >= 1");
  if (tau == 1) return 0.0;
  return static_cast<double>(reward_count(tau)) * damping(params, tau);
}

SignedPath generate_path(ChainSampler& sampler, std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("generate_path requires n >= 1");
  const Params& params = sampler.params();
  SignedPath path;
  path.states.reserve(static_cast<std::size_t>(n));
  path.x.resize(n);

  ChainState state = sampler.sample_stationary_state(rng);
  int sign = 0;
  for (std::int64_t t = 1; t <= n; ++t) {
    if (t > 1) state = sampler.step(state, rng);
    // a new sign for the excursion straddling time 1 and for each fresh excursion
    if (!state.is_origin() && (t == 1 || state.age == 1)) {
      sign = rng.sign();
      path.signs.emplace(t - state.age, sign);
    }
    path.states.push_back(state);
    path.x(t - 1) = state.is_origin() ? 0.0 : sign * phi(params, state);
  }
  return path;
}

SumDecomposition decompose(const SignedPath& path) {
  const auto n = static_cast<std::int64_t>(path.states.size());
  if (n == 0) throw DomainError("decompose requires a nonempty path");
  SumDecomposition d;
  d.first = path.states.front();
  d.last = path.states.back();
  d.s_total = path.x.sum();

  std::int64_t first_renewal = -1;
  std::int64_t last_renewal = -1;
  for (std::int64_t i = 0; i < n; ++i) {
    if (path.states[static_cast<std::size_t>(i)].is_origin()) {
      if (first_renewal < 0) first_renewal = i;
      last_renewal = i;
    }
  }
  if (first_renewal < 0) {
    d.s_double_prime = d.s_total;
    return d;
  }
  d.interior_renewal = true;
  d.s_prime = path.x.head(first_renewal + 1).sum();
  d.s_tilde = path.x.segment(first_renewal, last_renewal - first_renewal + 1).sum();
  d.s_double_prime = path.x.tail(n - last_renewal).sum();
  return d;
}

std::int64_t s_prime_count(std::int64_t a, std::int64_t b, std::int64_t n) {
  if (a < 1 || b < 1) throw DomainError("s_prime_count requires a, b >= 1");
  if (1 + b > n) return 0;
  return std::max<std::int64_t>(0, reward_count(a + b) - a + 1);
}

std::int64_t s_double_prime_count(std::int64_t a, std::int64_t b, std::int64_t n) {
  if (a < 1 || b < 1) throw DomainError("s_double_prime_count requires a, b >= 1");
  const std::int64_t hi = std::min(a, floor_sqrt(a + b));
  const std::int64_t lo = std::max<std::int64_t>(1, a - n + 1);
  return std::max<std::int64_t>(0, hi - lo + 1);
}

SumDecomposition sample_sums(ChainSampler& sampler, std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("sample_sums requires n >= 1");
  const Params& params = sampler.params();
  SumDecomposition d;
  d.first = sampler.sample_stationary_state(rng);

  std::int64_t t = 1;
  if (!d.first.is_origin()) {
    const int sign = rng.sign();
    const std::int64_t tau = d.first.interval();
    t = 1 + d.first.residual;
    if (t > n) {
      d.last = {d.first.age + n - 1, d.first.residual - n + 1};
      d.s_double_prime =
          sign * static_cast<double>(s_double_prime_count(d.last.age, d.last.residual, n)) *
          damping(params, tau);
      d.s_total = d.s_double_prime;
      return d;
    }
    d.s_prime = sign * static_cast<double>(s_prime_count(d.first.age, d.first.residual, n)) *
                damping(params, tau);
  }
  d.interior_renewal = true;
  while (t < n) {
    const std::int64_t tau = sampler.sample_p_interval(rng);
    if (tau == 1) {
      ++t;
      continue;
    }
    const int sign = rng.sign();
    if (t + tau <= n) {
      d.s_tilde += sign * excursion_reward_magnitude(params, tau);
      t += tau;
    } else {
      d.last = {n - t, t + tau - n};
      d.s_double_prime =
          sign * static_cast<double>(s_double_prime_count(d.last.age, d.last.residual, n)) *
          damping(params, tau);
      t = n + 1;
    }
  }
  d.s_total = d.s_prime + d.s_tilde + d.s_double_prime;
  return d;
}

BoundarySampler::BoundarySampler(const Params& params, std::int64_t n)
    : sampler_(params), n_(n) {
  if (n < 1) throw DomainError("BoundarySampler requires n >= 1");
  IntervalLaw& law = sampler_.law();
  Eigen::ArrayXd p(n + 1);
  p(0) = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) p(k) = law.survival_at(k - 1) - law.survival_at(k);
  for (std::int64_t k = 2; k <= n; ++k) p(k) = std::exp(log_mu(params, k) - log_mu0);

  renewal_.resize(n + 1);
  renewal_(0) = 1.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    // u(j) = sum_k p_k u(j - k)
    renewal_(j) = (p.segment(1, j) * renewal_.head(j).reverse()).sum();
  }
  cum_tail_.resize(n + 1);
  double acc = 0.0;
  for (std::int64_t a = 0; a <= n; ++a) {
    acc += law.survival_at(a);
    cum_tail_(a) = acc;
  }
}

BoundaryDraw BoundarySampler::draw(RngStream& rng) {
  const Params& params = sampler_.params();
  BoundaryDraw d;
  d.first = sampler_.sample_stationary_state(rng);

  std::int64_t r = 1;
  if (!d.first.is_origin()) {
    const int sign = rng.sign();
    const std::int64_t tau = d.first.interval();
    r = 1 + d.first.residual;
    if (r > n_) {
      d.last = {d.first.age + n_ - 1, d.first.residual - n_ + 1};
      d.s_double_prime =
          sign * static_cast<double>(s_double_prime_count(d.last.age, d.last.residual, n_)) *
          damping(params, tau);
      return d;
    }
    d.s_prime = sign * static_cast<double>(s_prime_count(d.first.age, d.first.residual, n_)) *
                damping(params, tau);
  }
  d.interior_renewal = true;

  const std::int64_t m = n_ - r;
  std::int64_t age;
  while (true) {
    const double level = rng.uniform() * cum_tail_(m);
    const auto* begin = cum_tail_.data();
    age = std::upper_bound(begin, begin + m + 1, level) - begin;
    age = std::min(age, m);
    if (rng.uniform() < renewal_(m - age)) break;
  }
  if (age == 0) {
    d.last = ChainState::origin();
    return d;
  }
  const std::int64_t tau = sampler_.law().sample_above(age, rng);
  const int sign = rng.sign();
  d.last = {age, tau - age};
  d.s_double_prime = sign *
                     static_cast<double>(s_double_prime_count(d.last.age, d.last.residual, n_)) *
                     damping(params, tau);
  return d;
}

}  // namespace mdw
