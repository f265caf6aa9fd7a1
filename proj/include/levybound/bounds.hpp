#pragma once

#include <cstddef>
#include <span>

#include "levybound/sde.hpp"

namespace levybound {

/// Inputs of the high-probability generalization bounds.
struct BoundInputs {
  double alpha = 2.0;
  std::size_t d = 1;
  std::size_t n = 1;  ///< training-set size
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double gamma = 1e-2;
  double eta = 1e-3;
  double radius = 1.0;  ///< R of the stable-noise regularity assumption
  double s = 0.5;       ///< subgaussian constant; 1/2 for the 0-1 loss
  double zeta = 0.05;   ///< failure probability
  double lambda = 0.0;  ///< KL(rho_0 || pi)

  /// Throws InvalidParameter on n, d == 0, R <= 0, s <= 0, zeta outside (0,1), lambda < 0.
  void validate() const;
};

/// I_hat = gamma * sum_k |g_k|^2 over the recorded steps, gamma from the trace config.
/// Throws PreconditionError for a diverged trace.
double integral_estimate(const RunTrace& trace);

/// Same sum over an explicit list of squared gradient norms.
double integral_estimate(std::span<const double> grad_norms_sq, double gamma);

/// G_hat = sqrt(P_alpha d^(1-alpha/2) I_hat / (n sigma1^alpha R^(2-alpha))).
/// The noise scale enters as sigma1^alpha. Requires sigma1 > 0.
double bound_estimate(double i_hat, const BoundInputs& inputs);

/// Stable-noise bound 2s sqrt(K_{alpha,d} I_hat / (n sigma1^alpha) + (log(3/zeta) + Lambda)/n).
double theorem_bound(double i_hat, const BoundInputs& inputs);

/// Brownian-noise bound s sqrt(I_hat / (n sigma2^2) + 4 (log(3/zeta) + Lambda)/n).
double brownian_bound(double i_hat, const BoundInputs& inputs);

/// Discrete-time bound
///   2s sqrt((K_{alpha,d}/sigma1^alpha) Delta(gamma, eta, alpha) sum_k |g_k|^2 + (Lambda + log(3/zeta))/n).
/// Unlike theorem_bound, the gradient term carries no 1/n. This is kept
/// deliberately; do not "fix" it without revisiting the derivation.
double discrete_bound(const RunTrace& trace, const BoundInputs& inputs);
double discrete_bound(double grad_norm_sq_sum, const BoundInputs& inputs);

namespace detail {

/// theorem_bound without input validation; lets tests probe algebraic
/// identities at parameter values (e.g. zeta = 3) outside the legal set.
double theorem_bound_unchecked(double i_hat, const BoundInputs& inputs);

}  // namespace detail

}  // namespace levybound
