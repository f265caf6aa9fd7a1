#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levybound/rng.hpp"

namespace levybound {

/// One-dimensional stable law S(alpha, beta, scale, location), location added
/// after scaling (1-parameterization).
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double scale = 1.0;
  double location = 0.0;

  /// Throws InvalidParameter unless 0 < alpha <= 2, |beta| <= 1, scale > 0.
  void validate() const;
};

/// Chambers-Mallows-Stuck draw. alpha == 1 is rejected.
double sample_skewed_stable(const StableParams& params, RngStream& rng);

/// Positive (alpha/2)-stable subordinator A ~ S(alpha/2, 1, 2 cos(pi alpha/4)^(2/alpha), 0).
/// Requires 1 < alpha < 2.
double sample_subordinator(double alpha, RngStream& rng);

/// Fills `out` with one isotropic symmetric alpha-stable vector whose
/// characteristic function is exp(-|xi|^alpha): sqrt(A) * G for alpha < 2 and
/// sqrt(2) * G at alpha == 2. Requires 1 < alpha <= 2 and a nonempty span.
void sample_isotropic_stable(double alpha, std::span<double> out, RngStream& rng);

std::vector<double> sample_isotropic_stable(double alpha, std::size_t dim, RngStream& rng);

/// Row-major block of `count` samples in R^dim.
struct SampleBatch {
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t count() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) noexcept { return {values.data() + i * dim, dim}; }
};

struct CharFnEstimate {
  double cos_part = 0.0;
  double sin_part = 0.0;
};

/// (mean cos(xi . x), mean sin(xi . x)) over the batch.
/// Throws DimensionMismatch if xi.size() != samples.dim, InvalidParameter if empty.
CharFnEstimate empirical_char_fn(const SampleBatch& samples, std::span<const double> xi);

}  // namespace levybound
