#pragma once

#include <cstddef>
#include <string_view>

namespace levybound {

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128). Throws DomainError for x <= 0.
double log_gamma(double x);

/// ln Gamma(x) - ln Gamma(x + shift), accurate for large x where the direct
/// difference would cancel. Requires x > 0 and x + shift > 0.
double log_gamma_ratio(double x, double shift);

/// Normalizing constant C_{alpha,d} of the isotropic stable Levy measure,
/// C = alpha 2^(alpha-1) pi^(-d/2) Gamma((alpha+d)/2) / Gamma(1 - alpha/2).
/// Valid for 0 < alpha < 2. Overflows to +inf for very large d; use the log form there.
double c_alpha_d(double alpha, std::size_t d);
double log_c_alpha_d(double alpha, std::size_t d);

/// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^(d/2) / Gamma(d/2).
/// Underflows to 0 for very large d; use the log form there.
double sphere_area(std::size_t d);
double log_sphere_area(std::size_t d);

/// K_{alpha,d} = (2-alpha) Gamma(1-alpha/2) d Gamma(d/2) / (alpha 2^alpha Gamma((d+alpha)/2) R^(2-alpha)),
/// for 1 < alpha < 2 and R > 0. The alpha = 2 endpoint is excluded (K tends to 1/2 there).
double k_alpha_d(double alpha, std::size_t d, double radius);

/// R^(2-alpha) K_{alpha,d}; independent of R.
double k_bar(double alpha, std::size_t d);

/// P_alpha = (2-alpha) Gamma(1-alpha/2) / (alpha 2^(alpha/2)) on [1, 2); the
/// limit value 1/2 at alpha = 2.
double p_alpha(double alpha);

/// Noise mixing constant M(sigma1, sigma2, d, alpha) weighing the Brownian
/// and the heavy-tailed contributions. Requires sigma1 or sigma2 positive.
double noise_mixing_constant(double sigma1, double sigma2, double alpha, std::size_t d,
                             double radius);

/// Heavy-tailed term of the noise mixing denominator, sigma1^alpha / K_{alpha,d}.
double heavy_noise_term(double sigma1, double alpha, std::size_t d, double radius);

/// Multiplier Delta(gamma, eta, alpha) of K/sigma1^alpha * sum |g_k|^2 in the
/// discrete-time bound. Requires 0 < gamma*eta < 1. Behaves like gamma as gamma*eta -> 0.
double discrete_prefactor(double gamma, double eta, double alpha);

struct ComparisonRate {
  /// Dimension-dependent factor sqrt(d) Gamma((alpha+d)/2) / ((2-alpha) Gamma(1-alpha/2) Gamma(d/2)).
  double raj_constant;
  /// Ratio of the rate in d to the rate in n: 1 - alpha/2 for the stable-noise bound.
  double xi_ours;
  /// (1 + alpha)/2 for the prior-art bound.
  double xi_raj;
};

ComparisonRate comparison_rate(double alpha, std::size_t d);

enum class Regime { Heavy, Light };
enum class RefinedRegime { HeavyRefined, LightRefined };

struct PhaseRegime {
  double scaled_noise;  ///< sigma1 sqrt(d / R^2)
  Regime coarse;
  RefinedRegime refined;
};

/// 1/sqrt(2 pi): refined heavy/light threshold once the decreasing P_alpha is accounted for.
double refined_threshold() noexcept;

PhaseRegime phase_regime(double sigma1, std::size_t d, double radius);

std::string_view to_string(Regime r) noexcept;
std::string_view to_string(RefinedRegime r) noexcept;

/// Every constant for one (alpha, d, R) triple.
struct BoundConstants {
  double alpha;
  std::size_t d;
  double radius;
  double k;
  double k_bar;
  double p;
  double c;
  double sphere;
};

BoundConstants bound_constants(double alpha, std::size_t d, double radius);

}  // namespace levybound
