#ifndef MDW_PARAMS_HPP
#define MDW_PARAMS_HPP

#include <vector>

namespace mdw {

/// Exponents of the stretched-exponential renewal law (alpha) and of the
/// reward damping (beta). Only constructible through validate_params.
class Params {
 public:
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  friend Params validate_params(double alpha, double beta);
  friend bool operator==(const Params&, const Params&) = default;

 private:
  Params(double alpha, double beta) : alpha_(alpha), beta_(beta) {}
  double alpha_;
  double beta_;
};

/// Checks alpha > 0, beta >= 0, alpha + 2 beta < 1/2. Throws ParamError.
Params validate_params(double alpha, double beta);

/// Open interval (u, v) of scale exponents where the normal rate fails.
struct ScaleWindow {
  double u;
  double v;
};

/// u = alpha / (2 (1 - alpha - 2 beta)), v = 1/2 - 2 beta.
ScaleWindow window_from_params(const Params& params);

/// Inverse map: beta = (1 - 2v) / 4, alpha = u (1 + 2v) / (1 + 2u).
/// Requires 0 < u < v <= 1/2; throws DomainError otherwise.
Params params_from_window(double u, double v);

/// Finite, strictly ordered list of disjoint open windows inside (0, 1/2].
class WindowSet {
 public:
  /// Throws DomainError unless 0 < u1 < v1 < u2 < v2 < ... <= 0.5.
  explicit WindowSet(std::vector<ScaleWindow> windows);

  const std::vector<ScaleWindow>& windows() const { return windows_; }
  bool empty() const { return windows_.empty(); }
  std::size_t size() const { return windows_.size(); }

  /// True iff gamma lies strictly inside one of the windows.
  bool contains(double gamma) const;
  /// True iff gamma coincides with an endpoint.
  bool is_endpoint(double gamma) const;

 private:
  std::vector<ScaleWindow> windows_;
};

}  // namespace mdw

#endif  // MDW_PARAMS_HPP
