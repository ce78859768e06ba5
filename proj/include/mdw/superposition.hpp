#ifndef MDW_SUPERPOSITION_HPP
#define MDW_SUPERPOSITION_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "mdw/params.hpp"
#include "mdw/process_paths.hpp"
#include "mdw/rng.hpp"

namespace mdw {

struct Component {
  Params params;
  double sigma;
};

/// Independent sum of window processes, normalized by sqrt(sum sigma_i^2).
struct CompositeProcess {
  std::vector<Component> components;
  double combined_sigma = 0.0;
};

/// One component per window (params_from_window); throws DomainError on an empty set.
CompositeProcess build_composite(const WindowSet& windows, double tol);

/// Single-component process built directly from params.
CompositeProcess build_single(const Params& params, double tol);

struct CompositePath {
  std::vector<SignedPath> components;
  Eigen::VectorXd x;  // (sum of component X_t) / combined_sigma
};

struct CompositeSums {
  std::vector<SumDecomposition> components;
  double s_tilde = 0.0;  // normalized sum of the component S~ terms
  double s_total = 0.0;  // normalized S_n
};

/// Holds one chain sampler per component. Component i runs on its own stream
/// (seed drawn from the master rng, stream id i).
class CompositeSampler {
 public:
  explicit CompositeSampler(const CompositeProcess& composite);

  const CompositeProcess& composite() const { return composite_; }

  CompositePath sample_path(std::int64_t n, RngStream& rng);
  /// Excursion-level version of sample_path reporting sums only; consumes rng
  /// exactly like sample_path.
  CompositeSums sample_sums(std::int64_t n, RngStream& rng);

 private:
  CompositeProcess composite_;
  std::vector<ChainSampler> samplers_;
};

/// Convenience wrapper around CompositeSampler::sample_path.
CompositePath sample_composite_path(const CompositeProcess& composite, std::int64_t n,
                                    RngStream& rng);

/// predicted_rate applied to the union of windows.
double composite_predicted_rate(const WindowSet& windows, double gamma, double c);

}  // namespace mdw

#endif  // MDW_SUPERPOSITION_HPP
