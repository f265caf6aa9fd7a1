#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "levybound/model.hpp"

namespace levybound {

/// Knobs of one Euler-Maruyama run of the heavy-tailed Langevin SDE.
struct TrainConfig {
  double gamma = 1e-2;  ///< learning rate
  double eta = 1e-3;    ///< weight decay
  double alpha = 2.0;   ///< tail index in (1, 2]
  double sigma1 = 0.0;  ///< stable noise scale
  double sigma2 = 0.0;  ///< Brownian noise scale
  std::size_t steps = 1000;
  std::size_t batch_size = 0;  ///< 0 means full batch
  std::size_t eval_interval = 10;
  std::uint64_t seed = 0;

  bool full_batch() const noexcept { return batch_size == 0; }
  /// Throws InvalidParameter; requires gamma * eta < 1.
  void validate() const;
};

struct StepRecord {
  std::size_t step = 0;
  double grad_norm_sq = 0.0;
  std::optional<double> train_error;
  std::optional<double> test_error;
};

struct RunTrace {
  TrainConfig config;
  std::vector<StepRecord> records;
  std::uint64_t params_hash = 0;
  bool diverged = false;
  ParamVector final_params;
};

/// Parameter norm beyond which a run is declared diverged.
inline constexpr double kDivergenceNorm = 1e12;

/// One update
///   w - gamma g - eta gamma w + gamma^(1/alpha) sigma1 stable + sqrt(2 gamma) sigma2 gaussian.
/// Noise terms with a zero scale are skipped entirely, so the noiseless case
/// is bit-identical to plain gradient descent with weight decay.
ParamVector em_step(std::span<const double> params, std::span<const double> grad,
                    const TrainConfig& cfg, std::span<const double> stable_draw,
                    std::span<const double> gaussian_draw);

/// Trains `spec` on `train` from init_params(spec, init_scale, RngStream(seed, 0)).
///
/// Step k (1-based) evaluates the loss gradient at the current iterate on a
/// fresh without-replacement batch, records |g_k|^2, evaluates 0-1 errors when
/// k % eval_interval == 0 or k == steps, then applies em_step. Per step the
/// dynamics stream RngStream(seed, 1) is consumed in the order (batch indices,
/// stable draw, gaussian draw); a draw is skipped when its scale is zero.
/// A non-finite iterate or one with norm above kDivergenceNorm ends the run
/// with diverged = true.
RunTrace run_training(const ModelSpec& spec, const Dataset& train, const Dataset& test,
                      const TrainConfig& cfg, double init_scale);

/// FNV-1a over the IEEE-754 bit patterns.
std::uint64_t hash_params(std::span<const double> params) noexcept;

}  // namespace levybound
