#include "levybound/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "levybound/error.hpp"

namespace levybound {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLnPi = 1.1447298858494001741434273513530587116472948129153;

// Lanczos coefficients for g = 607/128, n = 15 (Godfrey).
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,   .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,   -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3,  .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5,
};

double lanczos_log_gamma(double x) {
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double series = 0.999999999999997092;
  for (double c : kLanczos) series += c / ++y;
  return tmp + std::log(2.5066282746310005 * series / x);
}

// Tail of the Stirling series, sum_k B_2k / (2k (2k-1) z^(2k-1)), for z >= 10.
double stirling_tail(double z) {
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 -
                        inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
}

void require_open_alpha(double alpha, double lo, double hi, const char* what) {
  if (!(alpha > lo && alpha < hi)) {
    throw DomainError(std::string(what) + ": alpha must lie in (" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "), got " + std::to_string(alpha));
  }
}

void require_dimension(std::size_t d, const char* what) {
  if (d == 0) throw DomainError(std::string(what) + ": dimension must be >= 1");
}

void require_radius(double radius, const char* what) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError(std::string(what) + ": R must be positive and finite");
  }
}

// ln[(2 - alpha) Gamma(1 - alpha/2)] = ln[2 Gamma(2 - alpha/2)], finite up to alpha = 2.
double log_tail_gamma_factor(double alpha) { return kLn2 + log_gamma(2.0 - alpha / 2.0); }

// ln[d Gamma(d/2) / Gamma((d+alpha)/2)]
double log_dimension_factor(double alpha, std::size_t d) {
  const auto dd = static_cast<double>(d);
  return std::log(dd) + log_gamma_ratio(dd / 2.0, alpha / 2.0);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
  if (std::isinf(x)) return x;
  // Exact zeros at 1 and 2.
  if (x == 1.0 || x == 2.0) return 0.0;
  return lanczos_log_gamma(x);
}

double log_gamma_ratio(double x, double shift) {
  if (!(x > 0.0) || !(x + shift > 0.0)) {
    throw DomainError("log_gamma_ratio: arguments must be positive");
  }
  if (x < 10.0 || x + shift < 10.0) return log_gamma(x) - log_gamma(x + shift);
  // ln Gamma(x+a) - ln Gamma(x) = (x - 1/2) log1p(a/x) + a ln(x+a) - a + S(x+a) - S(x)
  const double forward = (x - 0.5) * std::log1p(shift / x) + shift * std::log(x + shift) - shift +
                         (stirling_tail(x + shift) - stirling_tail(x));
  return -forward;
}

double log_c_alpha_d(double alpha, std::size_t d) {
  require_open_alpha(alpha, 0.0, 2.0, "c_alpha_d");
  require_dimension(d, "c_alpha_d");
  const auto dd = static_cast<double>(d);
  return std::log(alpha) + (alpha - 1.0) * kLn2 - 0.5 * dd * kLnPi +
         log_gamma((alpha + dd) / 2.0) - log_gamma(1.0 - alpha / 2.0);
}

double c_alpha_d(double alpha, std::size_t d) { return std::exp(log_c_alpha_d(alpha, d)); }

double log_sphere_area(std::size_t d) {
  require_dimension(d, "sphere_area");
  const auto dd = static_cast<double>(d);
  return kLn2 + 0.5 * dd * kLnPi - log_gamma(dd / 2.0);
}

double sphere_area(std::size_t d) { return std::exp(log_sphere_area(d)); }

double k_bar(double alpha, std::size_t d) {
  require_open_alpha(alpha, 1.0, 2.0, "k_alpha_d");
  require_dimension(d, "k_alpha_d");
  return std::exp(log_tail_gamma_factor(alpha) + log_dimension_factor(alpha, d) -
                  std::log(alpha) - alpha * kLn2);
}

double k_alpha_d(double alpha, std::size_t d, double radius) {
  require_radius(radius, "k_alpha_d");
  const double kb = k_bar(alpha, d);
  return std::exp(std::log(kb) - (2.0 - alpha) * std::log(radius));
}

double p_alpha(double alpha) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw DomainError("p_alpha: alpha must lie in [1, 2], got " + std::to_string(alpha));
  }
  if (alpha == 2.0) return 0.5;
  return std::exp(log_tail_gamma_factor(alpha) - std::log(alpha) - 0.5 * alpha * kLn2);
}

double heavy_noise_term(double sigma1, double alpha, std::size_t d, double radius) {
  if (!(sigma1 >= 0.0)) throw DomainError("noise_mixing_constant: sigma1 must be >= 0");
  if (sigma1 == 0.0) return 0.0;
  return std::exp(alpha * std::log(sigma1) - std::log(k_alpha_d(alpha, d, radius)));
}

double noise_mixing_constant(double sigma1, double sigma2, double alpha, std::size_t d,
                             double radius) {
  if (!(sigma2 >= 0.0)) throw DomainError("noise_mixing_constant: sigma2 must be >= 0");
  if (sigma1 == 0.0 && sigma2 == 0.0) {
    throw DomainError("noise_mixing_constant: sigma1 and sigma2 cannot both be zero");
  }
  require_open_alpha(alpha, 1.0, 2.0, "noise_mixing_constant");
  return 1.0 / (4.0 * sigma2 * sigma2 + heavy_noise_term(sigma1, alpha, d, radius));
}

double discrete_prefactor(double gamma, double eta, double alpha) {
  const double x = gamma * eta;
  if (!(gamma > 0.0) || !(eta > 0.0) || !(x < 1.0)) {
    throw DomainError("discrete_prefactor: requires 0 < gamma*eta < 1");
  }
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw DomainError("discrete_prefactor: alpha must lie in (1, 2]");
  }
  const double log_one_minus = std::log1p(-x);   // log(1 - gamma eta) < 0
  const double contraction = -log_one_minus / x;  // (1/(gamma eta)) log(1/(1 - gamma eta))
  const double decay = -std::expm1(alpha * log_one_minus) / (alpha * eta);
  return contraction * decay;
}

ComparisonRate comparison_rate(double alpha, std::size_t d) {
  require_open_alpha(alpha, 1.0, 2.0, "comparison_rate");
  require_dimension(d, "comparison_rate");
  const auto dd = static_cast<double>(d);
  const double log_raj =
      0.5 * std::log(dd) - log_gamma_ratio(dd / 2.0, alpha / 2.0) - log_tail_gamma_factor(alpha);
  return {std::exp(log_raj), 1.0 - alpha / 2.0, (1.0 + alpha) / 2.0};
}

double refined_threshold() noexcept { return 1.0 / std::sqrt(2.0 * std::numbers::pi); }

PhaseRegime phase_regime(double sigma1, std::size_t d, double radius) {
  if (!(sigma1 > 0.0)) throw DomainError("phase_regime: sigma1 must be positive");
  require_dimension(d, "phase_regime");
  require_radius(radius, "phase_regime");
  const double scaled = sigma1 * std::sqrt(static_cast<double>(d)) / radius;
  return {scaled, scaled < 1.0 ? Regime::Heavy : Regime::Light,
          scaled < refined_threshold() ? RefinedRegime::HeavyRefined
                                       : RefinedRegime::LightRefined};
}

std::string_view to_string(Regime r) noexcept { return r == Regime::Heavy ? "Heavy" : "Light"; }

std::string_view to_string(RefinedRegime r) noexcept {
  return r == RefinedRegime::HeavyRefined ? "HeavyRefined" : "LightRefined";
}

BoundConstants bound_constants(double alpha, std::size_t d, double radius) {
  return {alpha,
          d,
          radius,
          k_alpha_d(alpha, d, radius),
          k_bar(alpha, d),
          p_alpha(alpha),
          c_alpha_d(alpha, d),
          sphere_area(d)};
}

}  // namespace levybound
