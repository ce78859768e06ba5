#ifndef MDW_CHAIN_SAMPLER_HPP
#define MDW_CHAIN_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "mdw/params.hpp"
#include "mdw/rng.hpp"

namespace mdw {

/// Age/residual-life state. (0, 0) is the origin; otherwise both are >= 1.
struct ChainState {
  std::int64_t age = 0;
  std::int64_t residual = 0;

  static ChainState origin() { return {}; }
  /// Throws DomainError unless age >= 1 and residual >= 1.
  static ChainState excursion(std::int64_t age, std::int64_t residual);

  bool is_origin() const { return age == 0 && residual == 0; }
  /// Interval length A + B (0 at the origin).
  std::int64_t interval() const { return age + residual; }

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

/// Draws tau > floor from the size-biased law P[tau = m] proportional to (m - 1) mu_m
/// by inverting the closed-form tail exp(-m^alpha). floor >= 1.
std::int64_t sample_size_biased_above(const Params& params, std::int64_t floor, RngStream& rng);

/// The renewal-interval law {p_n}: survival table grown by doubling, exact
/// rejection sampling beyond the table cap.
class IntervalLaw {
 public:
  static constexpr std::int64_t kInitialSize = 256;
  static constexpr std::int64_t kMaxSize = std::int64_t{1} << 22;

  explicit IntervalLaw(const Params& params);

  const Params& params() const { return params_; }
  std::int64_t table_size() const { return static_cast<std::int64_t>(survival_.size()) - 1; }
  /// P[tau > k] for 0 <= k <= table_size().
  double survival(std::int64_t k) const { return survival_[static_cast<std::size_t>(k)]; }
  /// P[tau > k] for any k >= 0, grows the table as needed up to the cap.
  double survival_at(std::int64_t k);

  std::int64_t sample(RngStream& rng);
  /// Draw from the law conditioned on tau > floor.
  std::int64_t sample_above(std::int64_t floor, RngStream& rng);

 private:
  void grow();
  std::int64_t scan(std::int64_t from, double level, RngStream& rng);

  Params params_;
  std::vector<double> survival_;
};

/// Single-owner sampler of the stationary age/residual chain.
class ChainSampler {
 public:
  explicit ChainSampler(const Params& params) : law_(params) {}

  const Params& params() const { return law_.params(); }
  IntervalLaw& law() { return law_; }

  ChainState sample_stationary_state(RngStream& rng);
  ChainState step(const ChainState& state, RngStream& rng);
  std::int64_t sample_p_interval(RngStream& rng) { return law_.sample(rng); }
  /// States at times 1..n, started from the stationary law.
  std::vector<ChainState> run_path(std::int64_t n, RngStream& rng);

 private:
  IntervalLaw law_;
};

}  // namespace mdw

#endif  // MDW_CHAIN_SAMPLER_HPP
