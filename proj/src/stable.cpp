#include "levybound/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "levybound/error.hpp"
#include "levybound/kernels.hpp"

namespace levybound {

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw InvalidParameter("stable alpha must lie in (0, 2], got " + std::to_string(alpha));
  }
  if (!(beta >= -1.0 && beta <= 1.0)) {
    throw InvalidParameter("stable beta must lie in [-1, 1], got " + std::to_string(beta));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("stable scale must be positive, got " + std::to_string(scale));
  }
  if (!std::isfinite(location)) throw InvalidParameter("stable location must be finite");
}

double sample_skewed_stable(const StableParams& params, RngStream& rng) {
  params.validate();
  if (params.alpha == 1.0) {
    throw InvalidParameter("stable sampler does not support alpha == 1");
  }
  constexpr double pi = std::numbers::pi;
  const double alpha = params.alpha;

  // U ~ Uniform(-pi/2, pi/2) on the open interval, W ~ Exp(1) with W > 0.
  const double u = pi * (rng.uniform_open() - 0.5);
  const double w = -std::log(rng.uniform_open());

  if (alpha == 2.0) {
    // CMS at alpha = 2 reduces to 2 sin(U) sqrt(W): a N(0, 2) draw.
    return params.location + params.scale * 2.0 * std::sin(u) * std::sqrt(w);
  }

  const double tan_term = params.beta * std::tan(pi * alpha / 2.0);
  const double shift = std::atan(tan_term) / alpha;
  const double skew_factor = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
  const double phase = alpha * (u + shift);
  const double x = skew_factor * std::sin(phase) / std::pow(std::cos(u), 1.0 / alpha) *
                   std::pow(std::cos(u - phase) / w, (1.0 - alpha) / alpha);
  return params.location + params.scale * x;
}

double sample_subordinator(double alpha, RngStream& rng) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidParameter("subordinator alpha must lie in (1, 2), got " + std::to_string(alpha));
  }
  const StableParams params{
      .alpha = alpha / 2.0,
      .beta = 1.0,
      .scale = 2.0 * std::pow(std::cos(std::numbers::pi * alpha / 4.0), 2.0 / alpha),
      .location = 0.0,
  };
  const double a = sample_skewed_stable(params, rng);
  if (!(a > 0.0)) {
    throw InternalError("subordinator produced a non-positive draw: " + std::to_string(a));
  }
  return a;
}

void sample_isotropic_stable(double alpha, std::span<double> out, RngStream& rng) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw InvalidParameter("isotropic stable alpha must lie in (1, 2], got " +
                           std::to_string(alpha));
  }
  if (out.empty()) throw InvalidParameter("isotropic stable dimension must be >= 1");

  const double radial = alpha == 2.0 ? std::numbers::sqrt2 : std::sqrt(sample_subordinator(alpha, rng));
  for (double& x : out) x = radial * rng.gaussian();
}

std::vector<double> sample_isotropic_stable(double alpha, std::size_t dim, RngStream& rng) {
  std::vector<double> out(dim);
  sample_isotropic_stable(alpha, std::span<double>(out), rng);
  return out;
}

CharFnEstimate empirical_char_fn(const SampleBatch& samples, std::span<const double> xi) {
  return kernels::char_fn(samples, xi);
}

}  // namespace levybound
