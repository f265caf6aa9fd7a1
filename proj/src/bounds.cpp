#include "levybound/bounds.hpp"

#include <cmath>

#include "levybound/error.hpp"
#include "levybound/special.hpp"
#include "levybound/summation.hpp"

namespace levybound {

void BoundInputs::validate() const {
  if (n == 0) throw InvalidParameter("bound inputs: n must be >= 1");
  if (d == 0) throw InvalidParameter("bound inputs: d must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidParameter("bound inputs: R must be > 0");
  if (!(s > 0.0)) throw InvalidParameter("bound inputs: s must be > 0");
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidParameter("bound inputs: zeta must lie in (0, 1)");
  if (!(lambda >= 0.0)) throw InvalidParameter("bound inputs: Lambda must be >= 0");
}

namespace {

double sum_grad_norms(const RunTrace& trace) {
  if (trace.diverged) throw PreconditionError("bound requires a non-diverged trace");
  CompensatedSum acc;
  for (const auto& rec : trace.records) acc.add(rec.grad_norm_sq);
  return acc.value();
}

void require_i_hat(double i_hat) {
  if (!(i_hat >= 0.0)) throw DomainError("integral estimate must be non-negative");
}

void require_sigma1(const BoundInputs& in) {
  if (!(in.sigma1 > 0.0)) throw DomainError("stable-noise bound requires sigma1 > 0");
}

double confidence_term(const BoundInputs& in) {
  return (std::log(3.0 / in.zeta) + in.lambda) / static_cast<double>(in.n);
}

}  // namespace

double integral_estimate(const RunTrace& trace) {
  return trace.config.gamma * sum_grad_norms(trace);
}

double integral_estimate(std::span<const double> grad_norms_sq, double gamma) {
  return gamma * compensated_sum(grad_norms_sq);
}

double bound_estimate(double i_hat, const BoundInputs& inputs) {
  inputs.validate();
  require_i_hat(i_hat);
  require_sigma1(inputs);
  if (i_hat == 0.0) return 0.0;
  const double a = inputs.alpha;
  const double log_factor = std::log(p_alpha(a)) +
                            (1.0 - a / 2.0) * std::log(static_cast<double>(inputs.d)) -
                            std::log(static_cast<double>(inputs.n)) -
                            a * std::log(inputs.sigma1) - (2.0 - a) * std::log(inputs.radius);
  return std::sqrt(std::exp(log_factor) * i_hat);
}

namespace detail {

double theorem_bound_unchecked(double i_hat, const BoundInputs& in) {
  const double k = k_alpha_d(in.alpha, in.d, in.radius);
  const double gradient_term =
      k * i_hat / (static_cast<double>(in.n) * std::pow(in.sigma1, in.alpha));
  return 2.0 * in.s * std::sqrt(gradient_term + confidence_term(in));
}

}  // namespace detail

double theorem_bound(double i_hat, const BoundInputs& inputs) {
  inputs.validate();
  require_i_hat(i_hat);
  require_sigma1(inputs);
  return detail::theorem_bound_unchecked(i_hat, inputs);
}

double brownian_bound(double i_hat, const BoundInputs& inputs) {
  inputs.validate();
  require_i_hat(i_hat);
  if (!(inputs.sigma2 > 0.0)) throw DomainError("Brownian bound requires sigma2 > 0");
  const double n = static_cast<double>(inputs.n);
  return inputs.s *
         std::sqrt(i_hat / (n * inputs.sigma2 * inputs.sigma2) + 4.0 * confidence_term(inputs));
}

double discrete_bound(double grad_norm_sq_sum, const BoundInputs& inputs) {
  inputs.validate();
  require_sigma1(inputs);
  if (!(grad_norm_sq_sum >= 0.0)) throw DomainError("gradient norm sum must be non-negative");
  const double k = k_alpha_d(inputs.alpha, inputs.d, inputs.radius);
  const double delta = discrete_prefactor(inputs.gamma, inputs.eta, inputs.alpha);
  const double gradient_term =
      k / std::pow(inputs.sigma1, inputs.alpha) * delta * grad_norm_sq_sum;
  return 2.0 * inputs.s * std::sqrt(gradient_term + confidence_term(inputs));
}

double discrete_bound(const RunTrace& trace, const BoundInputs& inputs) {
  return discrete_bound(sum_grad_norms(trace), inputs);
}

}  // namespace levybound
