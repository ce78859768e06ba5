#include "mdw/chain_sampler.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mdw/errors.hpp"
#include "mdw/renewal_measure.hpp"

namespace mdw {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x6d64775fu};
  engine_.seed(seq);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo);
  if (range == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(engine_());
  const std::uint64_t span = range + 1;
  // reject the incomplete top block so every residue is equally likely
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

ChainState ChainState::excursion(std::int64_t age, std::int64_t residual) {
  if (age < 1 || residual < 1) {
    std::ostringstream os;
    os << "excursion state requires age >= 1 and residual >= 1, got (" << age << ", " << residual
       << ")";
    throw DomainError(os.str());
  }
  return {age, residual};
}

std::int64_t sample_size_biased_above(const Params& params, std::int64_t floor, RngStream& rng) {
  const double a = params.alpha();
  // target level exp(-floor^a) * V, i.e. smallest m with m^a >= floor^a - ln V
  const double level = std::pow(static_cast<double>(floor), a) - std::log(rng.uniform());
  const double root = std::pow(level, 1.0 / a);
  if (!(root < 0x1.0p62)) {
    throw std::overflow_error("sampled interval length exceeds the 64-bit range (alpha too small)");
  }
  auto m = static_cast<std::int64_t>(std::ceil(root));
  while (m - 1 > floor && std::pow(static_cast<double>(m - 1), a) >= level) --m;
  while (std::pow(static_cast<double>(m), a) < level) ++m;
  return std::max(m, floor + 1);
}

IntervalLaw::IntervalLaw(const Params& params) : params_(params), survival_{1.0} { grow(); }

void IntervalLaw::grow() {
  const std::int64_t old_n = table_size();
  const std::int64_t new_n = old_n == 0 ? kInitialSize : 2 * old_n;
  survival_.resize(static_cast<std::size_t>(new_n) + 1);
  survival_[static_cast<std::size_t>(new_n)] = interval_survival(params_, new_n).value;
  for (std::int64_t k = new_n; k > old_n + 1; --k) {
    survival_[static_cast<std::size_t>(k - 1)] =
        survival_[static_cast<std::size_t>(k)] + std::exp(log_mu(params_, k) - log_mu0);
  }
}

double IntervalLaw::survival_at(std::int64_t k) {
  if (k < 0) throw DomainError("survival_at requires k >= 0");
  while (k > table_size() && table_size() < kMaxSize) grow();
  if (k <= table_size()) return survival(k);
  return interval_survival(params_, k).value;
}

std::int64_t IntervalLaw::scan(std::int64_t from, double level, RngStream& rng) {
  std::int64_t k = from;
  while (true) {
    const std::int64_t n = table_size();
    while (k <= n && level < survival_[static_cast<std::size_t>(k)]) ++k;
    if (k <= n) return k;
    if (n >= kMaxSize) break;
    grow();
  }
  // beyond the table: tau given tau > N, by size-biased proposal thinned with N / (m - 1)
  const std::int64_t n = table_size();
  while (true) {
    const std::int64_t m = sample_size_biased_above(params_, n, rng);
    if (rng.uniform() * static_cast<double>(m - 1) < static_cast<double>(n)) return m;
  }
}

std::int64_t IntervalLaw::sample(RngStream& rng) { return scan(1, rng.uniform(), rng); }

std::int64_t IntervalLaw::sample_above(std::int64_t floor, RngStream& rng) {
  if (floor < 0) throw DomainError("sample_above requires floor >= 0");
  if (floor == 0) return sample(rng);
  if (floor >= kMaxSize) {
    while (true) {
      const std::int64_t m = sample_size_biased_above(params_, floor, rng);
      if (rng.uniform() * static_cast<double>(m - 1) < static_cast<double>(floor)) return m;
    }
  }
  const double level = rng.uniform() * survival_at(floor);
  return scan(floor + 1, level, rng);
}

ChainState ChainSampler::sample_stationary_state(RngStream& rng) {
  if (rng.uniform() < -std::expm1(-1.0)) return ChainState::origin();
  const std::int64_t tau = sample_size_biased_above(params(), 1, rng);
  const std::int64_t age = rng.uniform_int(1, tau - 1);
  return {age, tau - age};
}

ChainState ChainSampler::step(const ChainState& state, RngStream& rng) {
  if (!state.is_origin()) {
    if (state.residual > 1) return {state.age + 1, state.residual - 1};
    return ChainState::origin();
  }
  const std::int64_t tau = law_.sample(rng);
  if (tau == 1) return ChainState::origin();
  return {1, tau - 1};
}

std::vector<ChainState> ChainSampler::run_path(std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("run_path requires n >= 1");
  std::vector<ChainState> path;
  path.reserve(static_cast<std::size_t>(n));
  path.push_back(sample_stationary_state(rng));
  for (std::int64_t t = 1; t < n; ++t) path.push_back(step(path.back(), rng));
  return path;
}

}  // namespace mdw
