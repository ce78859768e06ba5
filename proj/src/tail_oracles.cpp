#include "mdw/tail_oracles.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "mdw/errors.hpp"
#include "mdw/process_paths.hpp"

namespace mdw {

namespace {

// Above this horizon the O(n^2) renewal table of BoundarySampler is not worth it.
constexpr std::int64_t kBoundarySkipMaxN = std::int64_t{1} << 14;

double component(TailTarget target, double s_prime, double s_tilde, double s_dprime) {
  switch (target) {
    case TailTarget::total: return s_prime + s_tilde + s_dprime;
    case TailTarget::tilde: return s_tilde;
    case TailTarget::boundary: return s_prime + s_dprime;
    case TailTarget::double_prime: return s_dprime;
  }
  return 0.0;
}

void run_shard(const Params& params, std::int64_t n, const std::vector<double>& thresholds,
               TailTarget target, TailSide side, std::uint64_t seed, std::uint64_t stream,
               std::int64_t reps, std::vector<std::int64_t>& hits) {
  RngStream rng(seed, stream);
  auto tally = [&](double value) {
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      const bool hit = side == TailSide::upper ? value > thresholds[j] : value < -thresholds[j];
      if (hit) ++hits[j];
    }
  };
  const bool boundary_only = target == TailTarget::boundary || target == TailTarget::double_prime;
  if (boundary_only && n <= kBoundarySkipMaxN) {
    BoundarySampler sampler(params, n);
    for (std::int64_t i = 0; i < reps; ++i) {
      const BoundaryDraw d = sampler.draw(rng);
      tally(component(target, d.s_prime, 0.0, d.s_double_prime));
    }
    return;
  }
  ChainSampler sampler(params);
  for (std::int64_t i = 0; i < reps; ++i) {
    const SumDecomposition d = sample_sums(sampler, n, rng);
    tally(component(target, d.s_prime, d.s_tilde, d.s_double_prime));
  }
}

// Number of nonzero-reward end ages a in [1, tau-1] with |S''_n| > x, for an
// end-state interval of length tau: the count is min(a, s) - max(1, a-n+1) + 1
// with s = floor(sqrt tau), and it must reach K = floor(x tau^beta) + 1.
std::int64_t exceeding_end_ages(std::int64_t tau, std::int64_t n, double x, double beta) {
  const double need = x * std::pow(static_cast<double>(tau), beta);
  if (need >= static_cast<double>(n)) return 0;
  const auto k = static_cast<std::int64_t>(std::floor(need)) + 1;
  const std::int64_t s = reward_count(tau);
  if (s < k || n < k) return 0;
  return std::max<std::int64_t>(0, std::min(tau - 1, s + n - k) - k + 1);
}

int128 ceil_sqrt(int128 c) {
  const int128 r = isqrt(c);
  return r * r < c ? r + 1 : r;
}

struct Case2Attempt {
  RateCertificate cert;
  bool valid = false;
};

Case2Attempt try_case2(const Params& params, const RateQuery& q) {
  const double a = params.alpha();
  const double b = params.beta();
  const double lo_exp = (q.gamma + 0.5) / (0.5 - b);
  const double hi_exp = q.gamma <= a ? 2.0 * q.gamma / a : 2.0;
  const double mid_exp = 0.5 * (lo_exp + hi_exp);

  Case2Attempt out;
  RateCertificate& cert = out.cert;
  cert.kind = CertificateKind::case2_lower;
  cert.n = q.n;
  cert.gamma = q.gamma;
  cert.c = q.c;
  cert.threshold = q.threshold();

  const long double cn_real = std::floor(std::pow(static_cast<long double>(q.n), mid_exp) + 0.5L);
  if (!(cn_real < 1e36L)) return out;
  cert.c_n = static_cast<int128>(cn_real);
  if (cert.c_n < 3) return out;
  cert.a_n = ceil_sqrt(cert.c_n) + 1;
  cert.b_n = cert.c_n - cert.a_n;
  if (cert.b_n < 1 || !(cert.a_n < static_cast<int128>(q.n))) return out;
  // sqrt(a + b) < a holds by construction; the end window is ages 1..a since a < n
  const int128 hi = std::min(cert.a_n, isqrt(cert.c_n));
  const int128 lo = std::max<int128>(1, cert.a_n - q.n + 1);
  const int128 count = hi >= lo ? hi - lo + 1 : 0;
  const auto c_dbl = static_cast<double>(cert.c_n);
  cert.magnitude = static_cast<double>(count) * std::pow(c_dbl, -b);
  cert.log_prob = std::log(0.25) + log_mu_real(params, c_dbl);
  cert.rate = rate_transform(cert.log_prob, q.n, q.gamma);
  out.valid = cert.magnitude > cert.threshold;
  return out;
}

}  // namespace

double RateQuery::threshold() const {
  return c * std::pow(static_cast<double>(n), gamma + 0.5);
}

TailEstimate wilson_interval(std::int64_t hits, std::int64_t reps, double confidence) {
  if (reps < 1 || hits < 0 || hits > reps) throw DomainError("wilson_interval: need 0 <= hits <= reps, reps >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0, 1)");
  TailEstimate e;
  e.reps = reps;
  e.hits = hits;
  const auto nn = static_cast<double>(reps);
  e.p_hat = static_cast<double>(hits) / nn;
  if (hits == 0) {
    e.ci_low = 0.0;
    e.ci_high = -std::expm1(std::log1p(-confidence) / nn);
    return e;
  }
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + 0.5 * confidence);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (e.p_hat + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(e.p_hat * (1.0 - e.p_hat) / nn + z2 / (4.0 * nn * nn));
  e.ci_low = std::clamp(center - half, 0.0, e.p_hat);
  e.ci_high = std::clamp(center + half, e.p_hat, 1.0);
  return e;
}

std::string to_string(TailTarget target) {
  switch (target) {
    case TailTarget::total: return "total";
    case TailTarget::tilde: return "tilde";
    case TailTarget::boundary: return "boundary";
    case TailTarget::double_prime: return "dprime";
  }
  return "?";
}

TailTarget parse_tail_target(const std::string& name) {
  if (name == "total") return TailTarget::total;
  if (name == "tilde") return TailTarget::tilde;
  if (name == "boundary") return TailTarget::boundary;
  if (name == "dprime") return TailTarget::double_prime;
  throw DomainError("unknown tail target '" + name + "' (total, tilde, boundary, dprime)");
}

std::vector<TailEstimate> mc_tail_grid(const Params& params, std::int64_t n,
                                       const std::vector<double>& thresholds, TailTarget target,
                                       const McPlan& plan, TailSide side) {
  if (n < 1) throw DomainError("mc_tail: n must be >= 1");
  if (plan.reps < 1) throw DomainError("mc_tail: reps must be >= 1");
  if (!(plan.confidence > 0.0 && plan.confidence < 1.0)) {
    throw DomainError("mc_tail: confidence must lie in (0, 1)");
  }
  const int shards = std::max(1, plan.shards);
  std::vector<std::vector<std::int64_t>> hits(
      static_cast<std::size_t>(shards), std::vector<std::int64_t>(thresholds.size(), 0));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));

  auto work = [&](int shard) {
    const std::int64_t share = plan.reps / shards + (shard < plan.reps % shards ? 1 : 0);
    try {
      run_shard(params, n, thresholds, target, side, plan.seed, static_cast<std::uint64_t>(shard),
                share, hits[static_cast<std::size_t>(shard)]);
    } catch (...) {
      errors[static_cast<std::size_t>(shard)] = std::current_exception();
    }
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    for (int s = 0; s < shards; ++s) workers.emplace_back(work, s);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<TailEstimate> out;
  out.reserve(thresholds.size());
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    std::int64_t total = 0;
    for (const auto& h : hits) total += h[j];
    out.push_back(wilson_interval(total, plan.reps, plan.confidence));
  }
  return out;
}

TailEstimate mc_tail(const Params& params, const RateQuery& query, TailTarget target,
                     const McPlan& plan, TailSide side) {
  return mc_tail_grid(params, query.n, {query.threshold()}, target, plan, side).front();
}

double boundary_term_bound(const Params& params, std::int64_t n) {
  return std::pow(static_cast<double>(n), 1.0 - 2.0 * params.beta());
}

double boundary_sum_bound(const Params& params, std::int64_t n) {
  // maximize c1^{1-2b} + c2^{1-2b} over c1 + c2 <= n: concave, so c1 = c2 = n/2
  return 2.0 * std::pow(0.5 * static_cast<double>(n), 1.0 - 2.0 * params.beta());
}

double boundary_tail_exact(const Params& params, std::int64_t n, double x, double rel_share) {
  if (n < 1) throw DomainError("boundary_tail_exact: n must be >= 1");
  if (!(x > 0.0)) throw DomainError("boundary_tail_exact: x must be positive");
  if (x >= boundary_term_bound(params, n)) return neg_inf;

  const double a = params.alpha();
  const double b = params.beta();
  constexpr std::int64_t kMaxTerms = 400'000'000;
  // a contribution needs floor(sqrt tau) > x tau^beta, hence tau > x^{1/(1/2 - beta)}
  const auto start = std::max<std::int64_t>(
      2, static_cast<std::int64_t>(std::floor(std::pow(x, 1.0 / (0.5 - b)))) - 1);
  // and x tau^beta < n
  const double tau_cap = b > 0.0 ? std::pow(static_cast<double>(n) / x, 1.0 / b) : HUGE_VAL;

  LogSum total;
  std::int64_t tau = start;
  for (std::int64_t iter = 0;; ++iter, ++tau) {
    if (static_cast<double>(tau) > tau_cap) break;  // nothing beyond contributes
    if (total.value() > neg_inf && (iter & 1023) == 0) {
      // sum_{t > tau} mu_t min(t-1, sqrt(t)+n) <= e^{-tau^a} min(1, (sqrt(tau+1)+n)/tau)
      const auto td = static_cast<double>(tau);
      const double log_tail =
          -std::pow(td, a) + std::log(std::min(1.0, (std::sqrt(td + 1.0) + static_cast<double>(n)) / td));
      if (log_tail <= std::log(rel_share) + total.value()) break;
    }
    if (iter >= kMaxTerms) {
      std::ostringstream os;
      os << "boundary_tail_exact: remainder not certified below " << rel_share
         << " of the value after " << kMaxTerms << " terms (x = " << x << ")";
      throw UnreachablePrecision(os.str());
    }
    const std::int64_t ages = exceeding_end_ages(tau, n, x, b);
    if (ages > 0) total.add(log_mu(params, tau) + std::log(static_cast<double>(ages)));
  }
  if (total.value() == neg_inf) return neg_inf;
  // the sign of S''_n is symmetric and independent of its magnitude
  return total.value() - M_LN2;
}

RateCertificate case2_certificate(const Params& params, const RateQuery& query) {
  const ScaleWindow w = window_from_params(params);
  if (!(w.u < query.gamma && query.gamma < w.v)) {
    std::ostringstream os;
    os << "case2_certificate requires gamma in (" << w.u << ", " << w.v << "), got " << query.gamma;
    throw DomainError(os.str());
  }
  if (query.n < 1 || !(query.c > 0.0)) throw DomainError("case2_certificate: need n >= 1, c > 0");
  Case2Attempt attempt = try_case2(params, query);
  if (attempt.valid) return attempt.cert;

  // find a usable horizon: double until valid, then bisect down
  RateQuery probe = query;
  std::int64_t bad = query.n;
  std::int64_t good = 0;
  for (int i = 0; i < 60 && bad < (std::int64_t{1} << 60); ++i) {
    probe.n = bad * 2;
    if (try_case2(params, probe).valid) {
      good = probe.n;
      break;
    }
    bad = probe.n;
  }
  if (good > 0) {
    while (good - bad > 1) {
      probe.n = bad + (good - bad) / 2;
      if (try_case2(params, probe).valid) {
        good = probe.n;
      } else {
        bad = probe.n;
      }
    }
  }
  std::ostringstream os;
  os << "case-2 bracket empty at n = " << query.n << " (gamma = " << query.gamma
     << "); minimal usable n = " << good;
  throw BracketEmpty(os.str(), static_cast<std::uint64_t>(good));
}

RateCertificate case1_upper(const Params& params, const RateQuery& query) {
  const ScaleWindow w = window_from_params(params);
  if (!(0.0 < query.gamma && query.gamma < w.u)) {
    std::ostringstream os;
    os << "case1_upper requires gamma in (0, " << w.u << "), got " << query.gamma;
    throw DomainError(os.str());
  }
  if (query.n < 1 || !(query.c > 0.0)) throw DomainError("case1_upper: need n >= 1, c > 0");
  RateCertificate cert;
  cert.kind = CertificateKind::case1_upper;
  cert.n = query.n;
  cert.gamma = query.gamma;
  cert.c = query.c;
  cert.threshold = query.threshold();
  const double x = 0.5 * cert.threshold;
  const double k = std::floor(std::pow(x, 1.0 / (0.5 - params.beta())));
  // P[A+B > k] = exp(-k^alpha) only for k >= 1; below that the bound is trivial
  cert.log_prob = k >= 1.0 ? std::min(0.0, M_LN2 - std::pow(k, params.alpha())) : 0.0;
  cert.rate = rate_transform(cert.log_prob, query.n, query.gamma);
  return cert;
}

double rate_transform(double log_p, std::int64_t n, double gamma) {
  if (n < 1) throw DomainError("rate_transform: n must be >= 1");
  if (log_p == 0.0) return 0.0;
  return log_p / std::pow(static_cast<double>(n), 2.0 * gamma);
}

double gaussian_reference(double c) {
  if (!(c > 0.0)) throw DomainError("gaussian_reference: c must be positive");
  return -0.5 * c * c;
}

SeriesValue autocovariance_exact(const Params& params, std::int64_t k, double tol) {
  if (k < 0) throw DomainError("autocovariance lag must be >= 0");
  if (!(tol > 0.0)) throw DomainError("autocovariance_exact: tol must be positive");
  SizeBiasedWeight w{[k](std::int64_t tau) {
                       return static_cast<double>(std::max<std::int64_t>(0, reward_count(tau) - k));
                     },
                     2.0 * params.beta(), 0.5};
  // a nonzero product needs reward_count(tau) >= k + 1, i.e. tau >= (k+1)^2
  return size_biased_series(params, w, std::max<std::int64_t>(2, (k + 1) * (k + 1)), tol);
}

double autocovariance_dominance_bound(const Params& params, std::int64_t k) {
  if (k < 1) throw DomainError("dominance bound is stated for k >= 1");
  const auto m = static_cast<double>((k + 1) * (k + 1) - 1);
  return std::exp(-std::pow(m, params.alpha()));
}

double predicted_rate(const WindowSet& windows, double gamma, double c) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("gamma must lie in (0, 1/2)");
  if (windows.is_endpoint(gamma)) {
    std::ostringstream os;
    os << "gamma = " << gamma << " is a window endpoint";
    throw DomainError(os.str());
  }
  if (!(c > 0.0)) throw DomainError("c must be positive");
  return windows.contains(gamma) ? 0.0 : gaussian_reference(c);
}

}  // namespace mdw
