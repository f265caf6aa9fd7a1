#pragma once
// Independent reference implementations used by the unit tests and the
// acceptance binary. None of these call into the code they check, except
// where noted (the GD oracle reuses the gradient, which is checked by the
// finite-difference oracle on its own).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "levybound/model.hpp"
#include "levybound/rng.hpp"

namespace oracle {

// Mean cross-entropy of a bias-free ReLU network, written out layer by layer.
inline double loss(const levybound::ModelSpec& spec, std::span<const double> params,
                   const levybound::Dataset& data) {
  const auto& widths = spec.widths();
  long double total = 0.0L;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<double> act(data.row(i).begin(), data.row(i).end());
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      std::vector<double> next(widths[l + 1], 0.0);
      for (std::size_t o = 0; o < widths[l + 1]; ++o) {
        long double z = 0.0L;
        for (std::size_t k = 0; k < widths[l]; ++k) {
          z += static_cast<long double>(params[offset + o * widths[l] + k]) * act[k];
        }
        next[o] = static_cast<double>(z);
        if (l + 2 < widths.size()) next[o] = std::max(0.0, next[o]);
      }
      offset += widths[l] * widths[l + 1];
      act = std::move(next);
    }
    const double top = *std::max_element(act.begin(), act.end());
    long double z = 0.0L;
    for (double a : act) z += std::exp(static_cast<long double>(a - top));
    total += std::log(z) + top - act[data.labels[i]];
  }
  return static_cast<double>(total / static_cast<long double>(data.size()));
}

// Central differences with step h.
inline std::vector<double> fd_gradient(const levybound::ModelSpec& spec,
                                       std::vector<double> params,
                                       const levybound::Dataset& data, double h = 1e-5) {
  std::vector<double> g(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double saved = params[j];
    params[j] = saved + h;
    const double up = loss(spec, params, data);
    params[j] = saved - h;
    const double down = loss(spec, params, data);
    params[j] = saved;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

// Largest componentwise |a - b| / max(|a|, |b|, floor). The floor keeps
// components that are zero up to round-off from dominating.
inline double max_relative_error(std::span<const double> a, std::span<const double> b,
                                 double floor = 1e-4) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

// O(n^2) tau-b from pairwise concordance counts.
inline double brute_kendall(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::int64_t concordant = 0, discordant = 0, x_ties = 0, y_ties = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++x_ties;
      if (dy == 0.0) ++y_ties;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const auto pairs = static_cast<std::int64_t>(n * (n - 1) / 2);
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(pairs - x_ties) * static_cast<double>(pairs - y_ties));
}

// Textbook two-pass Pearson in long double.
inline double two_pass_pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Deterministic full-batch gradient descent with weight decay,
//   w <- w - gamma g(w) - eta gamma w,
// started from the same initialisation stream as run_training.
inline std::vector<double> gd_with_decay(const levybound::ModelSpec& spec,
                                         const levybound::Dataset& train, double gamma,
                                         double eta, std::size_t steps, std::uint64_t seed,
                                         double init_scale) {
  levybound::RngStream init(seed, 0);
  std::vector<double> w = levybound::init_params(spec, init_scale, init);
  const double decay = eta * gamma;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto g = levybound::surrogate_loss_and_grad(spec, w, train).grad;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] - gamma * g[i] - decay * w[i];
  }
  return w;
}

// Delta(gamma, eta, alpha) evaluated directly in long double.
inline long double discrete_prefactor(long double gamma, long double eta, long double alpha) {
  const long double x = gamma * eta;
  const long double q = 1.0L - x;
  return (std::log(1.0L / q) / x) * (1.0L - std::pow(q, alpha)) / (alpha * eta);
}

// Small random dataset with features in [0, 1].
inline levybound::Dataset random_dataset(std::size_t n, std::size_t dim, std::size_t classes,
                                         std::uint64_t seed) {
  levybound::RngStream rng(seed, 99);
  levybound::Dataset d{dim, classes, {}, {}};
  for (std::size_t i = 0; i < n * dim; ++i) d.features.push_back(rng.uniform_open());
  for (std::size_t i = 0; i < n; ++i) d.labels.push_back(static_cast<std::uint32_t>(rng.below(classes)));
  return d;
}

}  // namespace oracle
