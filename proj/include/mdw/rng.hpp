#ifndef MDW_RNG_HPP
#define MDW_RNG_HPP

#include <cstdint>
#include <random>

namespace mdw {

/// Reproducible random stream keyed by (seed, stream_id).
///
/// Draws are built from raw 64-bit engine output only, so sequences are
/// identical across standard libraries. Distinct stream ids give independent
/// engines for sharded work.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// +1 or -1 with probability 1/2 each.
  int sign() { return (engine_() >> 63) ? 1 : -1; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace mdw

#endif  // MDW_RNG_HPP
