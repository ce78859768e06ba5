#include "mdw/params.hpp"

#include <cmath>
#include <sstream>

#include "mdw/errors.hpp"

namespace mdw {

Params validate_params(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ParamError("alpha and beta must be finite");
  }
  if (!(alpha > 0.0)) {
    std::ostringstream os;
    os << "constraint alpha > 0 violated (alpha = " << alpha << ")";
    throw ParamError(os.str());
  }
  if (!(beta >= 0.0)) {
    std::ostringstream os;
    os << "constraint beta >= 0 violated (beta = " << beta << ")";
    throw ParamError(os.str());
  }
  if (!(alpha + 2.0 * beta < 0.5)) {
    std::ostringstream os;
    os << "constraint alpha + 2*beta < 1/2 violated (alpha + 2*beta = " << alpha + 2.0 * beta << ")";
    throw ParamError(os.str());
  }
  return Params(alpha, beta);
}

ScaleWindow window_from_params(const Params& params) {
  const double a = params.alpha();
  const double b = params.beta();
  ScaleWindow w{a / (2.0 * (1.0 - a - 2.0 * b)), 0.5 - 2.0 * b};
  // 0 < u < alpha < v <= 1/2 follows from the parameter constraints
  if (!(0.0 < w.u && w.u < a && a < w.v && w.v <= 0.5)) {
    throw DomainError("window ordering 0 < u < alpha < v <= 0.5 failed");
  }
  return w;
}

Params params_from_window(double u, double v) {
  if (!(0.0 < u && u < v && v <= 0.5)) {
    std::ostringstream os;
    os << "window requires 0 < u < v <= 0.5 (got u = " << u << ", v = " << v << ")";
    throw DomainError(os.str());
  }
  const double beta = 0.25 * (1.0 - 2.0 * v);
  const double alpha = (1.0 + 2.0 * v) / (1.0 + 2.0 * u) * u;
  return validate_params(alpha, beta);
}

WindowSet::WindowSet(std::vector<ScaleWindow> windows) : windows_(std::move(windows)) {
  double prev = 0.0;
  for (const auto& w : windows_) {
    if (!(w.u > prev && w.u < w.v && w.v <= 0.5)) {
      std::ostringstream os;
      os << "windows must satisfy 0 < u1 < v1 < u2 < ... <= 0.5; offending window (" << w.u
         << ", " << w.v << ")";
      throw DomainError(os.str());
    }
    prev = w.v;
  }
}

bool WindowSet::contains(double gamma) const {
  for (const auto& w : windows_) {
    if (w.u < gamma && gamma < w.v) return true;
  }
  return false;
}

bool WindowSet::is_endpoint(double gamma) const {
  for (const auto& w : windows_) {
    if (gamma == w.u || gamma == w.v) return true;
  }
  return false;
}

}  // namespace mdw
