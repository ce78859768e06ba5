#include "mdw/superposition.hpp"

#include <cmath>

#include "mdw/errors.hpp"
#include "mdw/renewal_measure.hpp"
#include "mdw/tail_oracles.hpp"

namespace mdw {

namespace {

double quadrature(const std::vector<Component>& components) {
  double s2 = 0.0;
  for (const auto& c : components) s2 += c.sigma * c.sigma;
  return std::sqrt(s2);
}

}  // namespace

CompositeProcess build_composite(const WindowSet& windows, double tol) {
  if (windows.empty()) {
    throw DomainError("build_composite needs at least one window; use build_single for a plain process");
  }
  CompositeProcess out;
  for (const auto& w : windows.windows()) {
    const Params p = params_from_window(w.u, w.v);
    out.components.push_back({p, sigma(p, tol).sigma});
  }
  out.combined_sigma = quadrature(out.components);
  return out;
}

CompositeProcess build_single(const Params& params, double tol) {
  CompositeProcess out;
  out.components.push_back({params, sigma(params, tol).sigma});
  out.combined_sigma = quadrature(out.components);
  return out;
}

CompositeSampler::CompositeSampler(const CompositeProcess& composite) : composite_(composite) {
  if (composite_.components.empty()) throw DomainError("composite process has no components");
  for (const auto& c : composite_.components) samplers_.emplace_back(c.params);
}

CompositePath CompositeSampler::sample_path(std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("sample_path requires n >= 1");
  CompositePath out;
  out.x = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < samplers_.size(); ++i) {
    RngStream stream(rng.next_u64(), i);
    out.components.push_back(generate_path(samplers_[i], n, stream));
    out.x += out.components.back().x;
  }
  out.x /= composite_.combined_sigma;
  return out;
}

CompositeSums CompositeSampler::sample_sums(std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("sample_sums requires n >= 1");
  CompositeSums out;
  for (std::size_t i = 0; i < samplers_.size(); ++i) {
    RngStream stream(rng.next_u64(), i);
    out.components.push_back(mdw::sample_sums(samplers_[i], n, stream));
    out.s_tilde += out.components.back().s_tilde;
    out.s_total += out.components.back().s_total;
  }
  out.s_tilde /= composite_.combined_sigma;
  out.s_total /= composite_.combined_sigma;
  return out;
}

CompositePath sample_composite_path(const CompositeProcess& composite, std::int64_t n,
                                    RngStream& rng) {
  CompositeSampler sampler(composite);
  return sampler.sample_path(n, rng);
}

double composite_predicted_rate(const WindowSet& windows, double gamma, double c) {
  return predicted_rate(windows, gamma, c);
}

}  // namespace mdw
