#include "mdw/renewal_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdw/errors.hpp"
#include "mdw/log_math.hpp"

namespace mdw {

namespace {

// (lo + 1)^alpha - lo^alpha, stable for huge lo where lo + 1 == lo in double.
double unit_pow_gap(double lo, double alpha) {
  if (lo <= 0.0) return 1.0;
  return std::pow(lo, alpha) * std::expm1(alpha * std::log1p(1.0 / lo));
}

// e^{-lo^a} - e^{-hi^a} for 1 <= lo < hi.
double tail_mass_between(double lo, double hi, double alpha) {
  const double x = std::pow(lo, alpha);
  return std::exp(-x + log1mexp(pow_gap(lo, hi, alpha)));
}

constexpr std::int64_t kMaxBlocks = 40'000'000;
constexpr std::int64_t kMaxIndex = std::int64_t{1} << 61;

// Weight shape tau^{-d}/(tau-1): convex and decreasing on tau >= 2.
double shape(double tau, double d) { return std::pow(tau, -d) / (tau - 1.0); }

struct Enclosure {
  double lo;
  double hi;
};

// Enclosure of sum_{tau=A}^{B} m_tau shape(tau) / M with m_tau = T(tau-1) - T(tau),
// M their total and T(t) = exp(-t^alpha). Jensen gives shape(mean) from below and
// the chord from above; the block mean is bracketed using convexity of T.
Enclosure convex_block(double A, double B, double alpha, double d, double x) {
  const double e = A - 1.0;
  const double len = B - A;
  // 1 - T(j)/T(e)
  auto r = [&](double j) { return -std::expm1(-pow_gap(e, j, alpha)); };
  const double rb = r(B);
  // sum_{j=A}^{B-1} T(j) lies between len T(mid) and len (T(A) + T(B-1)) / 2
  const double off_lo = std::clamp(len * (rb - r(0.5 * (A + B - 1.0))) / x, 0.0, len);
  const double off_hi = std::clamp(len * (rb - 0.5 * (r(A) + r(B - 1.0))) / x, 0.0, len);
  const double ga = shape(A, d);
  const double gb = shape(B, d);
  return {shape(A + off_hi, d), ga + (gb - ga) * off_lo / len};
}

// Each block's weight range times its exact mass encloses its contribution. A
// block may use half-width share * x, with x its mass relative to the mass
// remaining at its start; the x's sum to at most `levels`, so the enclosures
// add up to at most share * levels.
SeriesValue sum_blocks(const Params& params, const SizeBiasedWeight& weight, std::int64_t start,
                       double abs_tol, double share) {
  const double a = params.alpha();
  const double d = weight.decay;
  const double g = weight.growth;

  SeriesValue out;
  double halfwidths = 0.0;
  std::int64_t lo = start;
  std::int64_t size = 1;
  while (true) {
    const double e = static_cast<double>(lo - 1);
    // every remaining weight is at most tau^{g-d}/(tau-1) <= lo^{g-d}/(lo-1)
    const double tail = std::pow(static_cast<double>(lo), g - d) / e * std::exp(-std::pow(e, a));
    if (tail <= 0.25 * abs_tol) {
      out.error_bound = halfwidths + tail;
      break;
    }
    if (lo > kMaxIndex || out.blocks > kMaxBlocks) {
      out.error_bound = halfwidths + tail;
      return out;
    }
    const std::int64_t hi = lo + size - 1;
    const double gap = pow_gap(e, static_cast<double>(hi), a);
    const double mass = std::exp(-std::pow(e, a) + log1mexp(gap));
    const double x = -std::expm1(-gap);
    const double c_lo = weight.coef(lo);
    const double c_hi = weight.coef(hi);
    double w_lo;
    double w_hi;
    if (c_lo == c_hi && size > 1) {
      const Enclosure enc =
          convex_block(static_cast<double>(lo), static_cast<double>(hi), a, d, x);
      w_lo = c_lo * enc.lo;
      w_hi = c_lo * enc.hi;
    } else {
      w_hi = c_hi * std::pow(static_cast<double>(lo), -d) / e;
      w_lo = c_lo * std::pow(static_cast<double>(hi), -d) / static_cast<double>(hi - 1);
    }
    const double hw = 0.5 * std::max(0.0, w_hi - w_lo) * mass;
    if (hw > share * x && size > 1) {
      size /= 2;
      continue;
    }
    out.value += 0.5 * (w_hi + w_lo) * mass;
    halfwidths += hw;
    ++out.blocks;
    lo = hi + 1;
    if (hw < 0.25 * share * x && size < (std::int64_t{1} << 40)) size *= 2;
  }
  return out;
}

}  // namespace

double log_mu(const Params& params, std::int64_t n) {
  if (n == 0) return log_mu0;
  if (n < 2) {
    std::ostringstream os;
    os << "mu is defined on {0} U {2,3,...}; got index " << n;
    throw DomainError(os.str());
  }
  return log_mu_real(params, static_cast<double>(n));
}

double log_mu_real(const Params& params, double c) {
  if (!(c >= 2.0)) throw DomainError("log_mu_real requires c >= 2");
  const double a = params.alpha();
  const double lo = c - 1.0;
  return -std::pow(lo, a) + log1mexp(unit_pow_gap(lo, a)) - std::log(lo);
}

double log_interval_tail(const Params& params, double k) {
  if (!(k >= 1.0)) throw DomainError("log_interval_tail requires k >= 1");
  return -std::pow(k, params.alpha());
}

double mean_tau(const Params&) { return 1.0 / -std::expm1(-1.0); }

SeriesValue size_biased_series(const Params& params, const SizeBiasedWeight& weight,
                               std::int64_t start, double abs_tol) {
  if (start < 2) throw DomainError("size_biased_series: start must be >= 2");
  if (!(abs_tol > 0.0)) throw DomainError("size_biased_series: tolerance must be positive");
  if (weight.growth - weight.decay > 1.0 || weight.decay < 0.0) {
    throw DomainError("size_biased_series: weight must satisfy decay >= 0 and growth - decay <= 1");
  }
  const double lo = static_cast<double>(start);
  const double sup_w = std::pow(lo, weight.growth - weight.decay) / (lo - 1.0);
  const double scale = sup_w * std::exp(-std::pow(lo - 1.0, params.alpha()));
  // index where the tail bound first drops below abs_tol / 4
  const double needed = std::pow(std::log(4.0 * sup_w / abs_tol), 1.0 / params.alpha());
  if (abs_tol < 64.0 * std::numeric_limits<double>::epsilon() * scale ||
      needed > static_cast<double>(kMaxIndex)) {
    std::ostringstream os;
    os << "tolerance " << abs_tol << " is out of reach (series scale " << scale
       << ", tail index needed " << needed << ", alpha = " << params.alpha() << ")";
    throw UnreachablePrecision(os.str());
  }
  const double levels = std::log(4.0 * sup_w / abs_tol) + 1.0;
  const SeriesValue out = sum_blocks(params, weight, start, abs_tol, 0.5 * abs_tol / levels);
  if (out.error_bound <= abs_tol) return out;
  std::ostringstream os;
  os << "series error bound " << out.error_bound << " exceeds tolerance " << abs_tol
     << " (alpha = " << params.alpha() << ")";
  throw UnreachablePrecision(os.str());
}

SeriesValue interval_survival(const Params& params, std::int64_t n, double rel_tol) {
  if (n < 1) throw DomainError("interval_survival requires n >= 1");
  const double a = params.alpha();
  const double mu0 = -std::expm1(-1.0);
  // the first term alone is a lower bound on the sum
  const double first = tail_mass_between(static_cast<double>(n), static_cast<double>(n + 1), a) /
                       static_cast<double>(n);
  if (first == 0.0) return {};
  SizeBiasedWeight w{[](std::int64_t) { return 1.0; }, 0.0, 0.0};
  SeriesValue s = size_biased_series(params, w, n + 1, rel_tol * first);
  s.value /= mu0;
  s.error_bound /= mu0;
  return s;
}

double log_p(const Params& params, std::int64_t n, double tol) {
  if (n < 1) throw DomainError("p_n is defined for n >= 1");
  if (n >= 2) return log_mu(params, n) - log_mu0;
  const double mu0 = -std::expm1(-1.0);
  SizeBiasedWeight w{[](std::int64_t) { return 1.0; }, 0.0, 0.0};
  const SeriesValue rest = size_biased_series(params, w, 2, tol * mu0);
  return std::log1p(-rest.value / mu0);
}

std::int64_t reward_count(std::int64_t tau) {
  if (tau <= 1) return 0;
  const auto r = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(tau)));
  return std::min(r, tau - 1);
}

double second_moment_jump(const Params& params, double tol) {
  if (!(tol > 0.0)) throw DomainError("second_moment_jump: tol must be positive");
  const double mu0 = -std::expm1(-1.0);
  SizeBiasedWeight w{[](std::int64_t tau) {
                       const auto c = static_cast<double>(reward_count(tau));
                       return c * c;
                     },
                     2.0 * params.beta(), 1.0};
  return size_biased_series(params, w, 2, tol * mu0).value / mu0;
}

ProcessStats sigma(const Params& params, double tol) {
  ProcessStats st;
  st.mean_tau = mean_tau(params);
  st.second_moment_jump = second_moment_jump(params, tol);
  st.sigma = std::sqrt(st.second_moment_jump / st.mean_tau);
  return st;
}

MeasureTable::MeasureTable(const Params& params, std::int64_t truncation_n)
    : params_(params), truncation_n_(truncation_n) {
  if (truncation_n < 2) throw DomainError("MeasureTable requires N >= 2");
  log_mu_.resize(truncation_n + 1);
  log_mu_(0) = log_mu0;
  log_mu_(1) = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t n = 2; n <= truncation_n; ++n) log_mu_(n) = mdw::log_mu(params, n);
  tail_bound_ = -std::pow(static_cast<double>(truncation_n), params.alpha());
}

double MeasureTable::mu(std::int64_t n) const {
  if (n == 1 || n < 0 || n > truncation_n_) throw DomainError("MeasureTable index out of range");
  return std::exp(log_mu_(n));
}

}  // namespace mdw
