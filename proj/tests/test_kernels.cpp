#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "levybound/kernels.hpp"
#include "oracles.hpp"

using namespace levybound;

namespace {

struct ThreadGuard {
  int saved = kernels::thread_count();
  ~ThreadGuard() { kernels::set_thread_count(saved); }
};

}  // namespace

TEST_CASE("sample batches are identical to the serial reference and across thread counts") {
  ThreadGuard guard;
  const auto ref = kernels::serial::sample_isotropic_batch(1.6, 4, 5000, 21);
  for (int t : {1, 2, 3, 8}) {
    kernels::set_thread_count(t);
    CHECK(kernels::sample_isotropic_batch(1.6, 4, 5000, 21).values == ref.values);
  }
}

TEST_CASE("characteristic function: thread-count invariant, close to serial") {
  ThreadGuard guard;
  const auto batch = kernels::serial::sample_isotropic_batch(1.3, 3, 40000, 2);
  const std::vector<double> xi{0.4, -0.2, 0.9};
  const auto ref = kernels::serial::char_fn(batch, xi);
  kernels::set_thread_count(1);
  const auto one = kernels::char_fn(batch, xi);
  for (int t : {2, 5}) {
    kernels::set_thread_count(t);
    const auto many = kernels::char_fn(batch, xi);
    CHECK(many.cos_part == one.cos_part);
    CHECK(many.sin_part == one.sin_part);
  }
  CHECK(one.cos_part == doctest::Approx(ref.cos_part).epsilon(1e-14));
  CHECK(one.sin_part == doctest::Approx(ref.sin_part).epsilon(1e-12));
}

TEST_CASE("loss and gradient: thread-count invariant, close to serial") {
  ThreadGuard guard;
  const auto spec = ModelSpec::fcn(12, 9, 4);
  const auto data = oracle::random_dataset(3000, 12, 4, 3);
  RngStream rng(3);
  const auto w = init_params(spec, 1.0, rng);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  const auto ref = kernels::serial::loss_and_grad(spec, w, data, idx);
  kernels::set_thread_count(1);
  const auto one = kernels::loss_and_grad(spec, w, data, idx);
  for (int t : {2, 4, 7}) {
    kernels::set_thread_count(t);
    const auto many = kernels::loss_and_grad(spec, w, data, idx);
    CHECK(many.loss == one.loss);
    CHECK(many.grad == one.grad);
  }
  CHECK(one.loss == doctest::Approx(ref.loss).epsilon(1e-13));
  CHECK(oracle::max_relative_error(one.grad, ref.grad, 1e-8) < 1e-11);
}

TEST_CASE("error counts agree exactly") {
  ThreadGuard guard;
  const auto spec = ModelSpec::linear(6, 3);
  const auto data = oracle::random_dataset(2000, 6, 3, 9);
  RngStream rng(9);
  const auto w = init_params(spec, 1.0, rng);
  const auto ref = kernels::serial::count_errors(spec, w, data);
  for (int t : {1, 3}) {
    kernels::set_thread_count(t);
    CHECK(kernels::count_errors(spec, w, data) == ref);
  }
}
