#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "levybound/data_io.hpp"
#include "levybound/error.hpp"
#include "levybound/sde.hpp"
#include "oracles.hpp"

using namespace levybound;

namespace {

TrainTestSplit small_blobs(std::uint64_t seed = 0) {
  return generate_synthetic({.n_per_class = 20, .dim = 4, .classes = 3, .separation = 2.0,
                             .noise_std = 1.0, .seed = seed});
}

}  // namespace

TEST_CASE("em_step special cases") {
  TrainConfig cfg;
  cfg.gamma = 0.01;
  cfg.eta = 0.0;
  const std::vector<double> w{1.0, -2.0, 0.5}, g{0.3, 0.1, -4.0}, none;
  const auto plain = em_step(w, g, cfg, none, none);
  for (std::size_t i = 0; i < 3; ++i) CHECK(plain[i] == w[i] - 0.01 * g[i]);

  cfg.eta = 0.001;
  const std::vector<double> ones(5, 1.0), zeros(5, 0.0);
  for (double x : em_step(ones, zeros, cfg, none, none)) CHECK(x == doctest::Approx(0.99999).epsilon(1e-15));

  cfg.gamma = 1.0;
  cfg.eta = 0.3;
  cfg.sigma1 = 1.0;
  cfg.alpha = 1.4;
  const std::vector<double> xi{0.7, -3.0, 12.5, 0.0, 1e-3};
  CHECK(em_step(zeros, zeros, cfg, xi, none) == xi);

  CHECK_THROWS_AS(em_step(w, g, cfg, none, none), DimensionMismatch);
}

TEST_CASE("config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = 10.0;
  cfg.eta = 0.2;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
  cfg = {};
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
  cfg = {};
  cfg.steps = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
}

TEST_CASE("noiseless full-batch run equals the GD-with-decay oracle bit for bit") {
  const auto data = small_blobs();
  const auto spec = ModelSpec::fcn(4, 5, 3);
  TrainConfig cfg;
  cfg.gamma = 0.05;
  cfg.eta = 0.01;
  cfg.steps = 300;
  cfg.seed = 12;
  const auto trace = run_training(spec, data.train, data.test, cfg, 1.0);
  const auto oracle_w = oracle::gd_with_decay(spec, data.train, 0.05, 0.01, 300, 12, 1.0);
  CHECK(trace.final_params == oracle_w);
  CHECK(trace.params_hash == hash_params(oracle_w));
  // The noiseless dynamics ignore alpha altogether.
  cfg.alpha = 1.3;
  CHECK(run_training(spec, data.train, data.test, cfg, 1.0).final_params == oracle_w);
}

TEST_CASE("a batch covering the whole set reproduces the full gradient") {
  const auto data = small_blobs(3);
  const auto spec = ModelSpec::linear(4, 3);
  RngStream rng(1);
  const auto w = init_params(spec, 1.0, rng);
  const auto full = surrogate_loss_and_grad(spec, w, data.train);
  std::vector<std::size_t> perm(data.train.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  const auto shuffled = surrogate_loss_and_grad(spec, w, data.train, perm);
  CHECK(oracle::max_relative_error(full.grad, shuffled.grad, 1e-6) < 1e-12);

  TrainConfig cfg;
  cfg.steps = 5;
  cfg.batch_size = data.train.size();
  TrainConfig full_cfg = cfg;
  full_cfg.batch_size = 0;
  const auto a = run_training(spec, data.train, data.test, cfg, 1.0);
  const auto b = run_training(spec, data.train, data.test, full_cfg, 1.0);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a.records[k].grad_norm_sq == doctest::Approx(b.records[k].grad_norm_sq).epsilon(1e-12));
  }
}

TEST_CASE("runs are reproducible and record what they promise") {
  const auto data = small_blobs(5);
  const auto spec = ModelSpec::fcn(4, 6, 3);
  TrainConfig cfg;
  cfg.alpha = 1.5;
  cfg.sigma1 = 0.05;
  cfg.sigma2 = 0.01;
  cfg.steps = 95;
  cfg.batch_size = 8;
  cfg.eval_interval = 10;
  cfg.seed = 77;
  const auto a = run_training(spec, data.train, data.test, cfg, 1.0);
  const auto b = run_training(spec, data.train, data.test, cfg, 1.0);
  CHECK(a.params_hash == b.params_hash);
  CHECK(a.final_params == b.final_params);
  CHECK_FALSE(a.diverged);
  REQUIRE(a.records.size() == 95);
  for (const auto& r : a.records) {
    CHECK(r.train_error.has_value() == (r.step % 10 == 0 || r.step == 95));
    CHECK(r.grad_norm_sq >= 0.0);
  }
  cfg.seed = 78;
  CHECK(run_training(spec, data.train, data.test, cfg, 1.0).params_hash != a.params_hash);
}

TEST_CASE("huge noise is reported as divergence") {
  const auto data = small_blobs();
  TrainConfig cfg;
  cfg.alpha = 1.1;
  cfg.sigma1 = 1e13;
  cfg.gamma = 1.0;
  cfg.steps = 50;
  const auto trace = run_training(ModelSpec::linear(4, 3), data.train, data.test, cfg, 1.0);
  CHECK(trace.diverged);
  CHECK(trace.records.size() < 50);
}

TEST_CASE("shape checks") {
  const auto data = small_blobs();
  TrainConfig cfg;
  CHECK_THROWS_AS(run_training(ModelSpec::linear(5, 3), data.train, data.test, cfg, 1.0),
                  DimensionMismatch);
  cfg.batch_size = 10000;
  CHECK_THROWS_AS(run_training(ModelSpec::linear(4, 3), data.train, data.test, cfg, 1.0),
                  InvalidParameter);
}
