#include "levybound/sde.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "levybound/error.hpp"
#include "levybound/stable.hpp"
#include "levybound/summation.hpp"

namespace levybound {

void TrainConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidParameter("gamma must be positive");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidParameter("eta must be non-negative");
  if (!(gamma * eta < 1.0)) throw InvalidParameter("gamma * eta must be < 1");
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw InvalidParameter("alpha must lie in (1, 2], got " + std::to_string(alpha));
  }
  if (!(sigma1 >= 0.0) || !std::isfinite(sigma1)) throw InvalidParameter("sigma1 must be >= 0");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw InvalidParameter("sigma2 must be >= 0");
  if (steps == 0) throw InvalidParameter("steps must be >= 1");
  if (eval_interval == 0) throw InvalidParameter("eval_interval must be >= 1");
}

ParamVector em_step(std::span<const double> params, std::span<const double> grad,
                    const TrainConfig& cfg, std::span<const double> stable_draw,
                    std::span<const double> gaussian_draw) {
  const std::size_t d = params.size();
  if (grad.size() != d) throw DimensionMismatch("em_step: gradient length mismatch");
  const bool stable_on = cfg.sigma1 != 0.0;
  const bool gaussian_on = cfg.sigma2 != 0.0;
  if (stable_on && stable_draw.size() != d) {
    throw DimensionMismatch("em_step: stable draw length mismatch");
  }
  if (gaussian_on && gaussian_draw.size() != d) {
    throw DimensionMismatch("em_step: gaussian draw length mismatch");
  }

  const double decay = cfg.eta * cfg.gamma;
  const double stable_scale = std::pow(cfg.gamma, 1.0 / cfg.alpha) * cfg.sigma1;
  const double gaussian_scale = std::sqrt(2.0 * cfg.gamma) * cfg.sigma2;

  ParamVector next(d);
  for (std::size_t i = 0; i < d; ++i) {
    double w = params[i] - cfg.gamma * grad[i] - decay * params[i];
    if (stable_on) w += stable_scale * stable_draw[i];
    if (gaussian_on) w += gaussian_scale * gaussian_draw[i];
    next[i] = w;
  }
  return next;
}

std::uint64_t hash_params(std::span<const double> params) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double x : params) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= bits & 0xFFU;
      h *= 0x100000001b3ULL;
      bits >>= 8;
    }
  }
  return h;
}

namespace {

bool out_of_bounds(std::span<const double> params) {
  CompensatedSum norm_sq;
  for (double x : params) {
    if (!std::isfinite(x)) return true;
    norm_sq.add(x * x);
  }
  const double norm = std::sqrt(norm_sq.value());
  return !std::isfinite(norm) || norm > kDivergenceNorm;
}

// Partial Fisher-Yates: moves a uniform random size-b subset into the first b slots.
void draw_batch(std::vector<std::size_t>& pool, std::size_t b, RngStream& rng) {
  const std::size_t n = pool.size();
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace

RunTrace run_training(const ModelSpec& spec, const Dataset& train, const Dataset& test,
                      const TrainConfig& cfg, double init_scale) {
  cfg.validate();
  train.validate();
  test.validate();
  if (train.size() == 0) throw InvalidParameter("training set is empty");
  if (train.dim != test.dim || train.dim != spec.input_dim()) {
    throw DimensionMismatch("train/test/model input dimensions disagree");
  }
  if (train.classes != test.classes) throw DimensionMismatch("train/test class counts disagree");
  if (!cfg.full_batch() && cfg.batch_size > train.size()) {
    throw InvalidParameter("batch_size exceeds the training set size");
  }

  RngStream init_rng(cfg.seed, 0);
  RngStream rng(cfg.seed, 1);

  RunTrace trace;
  trace.config = cfg;
  trace.records.reserve(cfg.steps);
  ParamVector params = init_params(spec, init_scale, init_rng);

  const std::size_t d = params.size();
  const std::size_t batch = cfg.full_batch() ? train.size() : cfg.batch_size;
  std::vector<std::size_t> pool(train.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<double> stable(cfg.sigma1 != 0.0 ? d : 0);
  std::vector<double> gaussian(cfg.sigma2 != 0.0 ? d : 0);

  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    if (!cfg.full_batch()) draw_batch(pool, batch, rng);
    const std::span<const std::size_t> indices(pool.data(), batch);
    const LossAndGrad lg = surrogate_loss_and_grad(spec, params, train, indices);

    StepRecord rec;
    rec.step = k;
    rec.grad_norm_sq = squared_norm(lg.grad);
    if (k % cfg.eval_interval == 0 || k == cfg.steps) {
      rec.train_error = zero_one_error(spec, params, train);
      rec.test_error = zero_one_error(spec, params, test);
    }
    trace.records.push_back(rec);

    if (!stable.empty()) sample_isotropic_stable(cfg.alpha, std::span<double>(stable), rng);
    for (double& g : gaussian) g = rng.gaussian();

    params = em_step(params, lg.grad, cfg, stable, gaussian);
    if (out_of_bounds(params)) {
      trace.diverged = true;
      break;
    }
  }

  trace.params_hash = hash_params(params);
  trace.final_params = std::move(params);
  return trace;
}

}  // namespace levybound
