#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "levybound/error.hpp"
#include "levybound/model.hpp"
#include "levybound/summation.hpp"
#include "oracles.hpp"

using namespace levybound;

TEST_CASE("parameter counts") {
  CHECK(ModelSpec::linear(784, 10).param_count() == 7840);
  CHECK(ModelSpec::fcn(784, 100, 10).param_count() == 79400);
  CHECK(ModelSpec::fcn(784, 3, 10).param_count() == 794 * 3);
  CHECK(ModelSpec::fcn(2, 1, 2).param_count() == 4);
  CHECK(ModelSpec::linear(5, 3).kind() == ArchKind::Linear);
  CHECK(ModelSpec({4, 3, 3, 2}).kind() == ArchKind::FCN);
  CHECK_THROWS_AS(ModelSpec({4}), InvalidParameter);
  CHECK_THROWS_AS(ModelSpec({4, 0, 2}), InvalidParameter);
}

TEST_CASE("initialisation") {
  const auto spec = ModelSpec::linear(784, 10);
  RngStream a(3), b(3), c(3);
  const auto zero = init_params(spec, 0.0, a);
  CHECK(std::all_of(zero.begin(), zero.end(), [](double x) { return x == 0.0; }));
  const auto w1 = init_params(spec, 1.0, b);
  const auto w2 = init_params(spec, 1.0, c);
  CHECK(w1 == w2);
  const double sd = std::sqrt(squared_norm(w1) / static_cast<double>(w1.size()));
  CHECK(std::abs(sd * std::sqrt(784.0) - 1.0) < 0.05);
}

TEST_CASE("zero parameters give log k loss") {
  const auto data = oracle::random_dataset(17, 6, 10, 1);
  const auto spec = ModelSpec::linear(6, 10);
  const std::vector<double> w(spec.param_count(), 0.0);
  CHECK(surrogate_loss_and_grad(spec, w, data).loss == doctest::Approx(std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("gradient matches central differences on a tiny FCN") {
  const auto spec = ModelSpec::fcn(2, 1, 2);
  const auto data = oracle::random_dataset(3, 2, 2, 4);
  RngStream rng(4);
  const auto w = init_params(spec, 1.0, rng);
  const auto lg = surrogate_loss_and_grad(spec, w, data);
  CHECK(lg.loss == doctest::Approx(oracle::loss(spec, w, data)).epsilon(1e-13));
  CHECK(oracle::max_relative_error(lg.grad, oracle::fd_gradient(spec, w, data)) <= 1e-5);
}

TEST_CASE("gradient matches central differences on deeper nets") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto spec = ModelSpec({5, 7, 4, 3});
    const auto data = oracle::random_dataset(9, 5, 3, seed);
    RngStream rng(seed);
    const auto w = init_params(spec, 1.0, rng);
    const auto lg = surrogate_loss_and_grad(spec, w, data);
    CHECK(oracle::max_relative_error(lg.grad, oracle::fd_gradient(spec, w, data)) <= 1e-5);
  }
}

TEST_CASE("duplicated rows do not change the mean") {
  const auto spec = ModelSpec::fcn(4, 3, 3);
  const auto data = oracle::random_dataset(5, 4, 3, 2);
  RngStream rng(2);
  const auto w = init_params(spec, 1.0, rng);
  const std::vector<std::size_t> once{2}, twice{2, 2};
  const auto a = surrogate_loss_and_grad(spec, w, data, once);
  const auto b = surrogate_loss_and_grad(spec, w, data, twice);
  CHECK(a.loss == b.loss);
  CHECK(a.grad == b.grad);
}

TEST_CASE("loss input validation") {
  const auto spec = ModelSpec::linear(3, 2);
  const auto data = oracle::random_dataset(4, 3, 2, 0);
  std::vector<double> w(spec.param_count(), 0.1);
  const std::vector<std::size_t> empty, bad{7};
  CHECK_THROWS_AS(surrogate_loss_and_grad(spec, w, data, empty), InvalidParameter);
  CHECK_THROWS_AS(surrogate_loss_and_grad(spec, w, data, bad), InvalidParameter);
  w[0] = std::nan("");
  CHECK_THROWS_AS(surrogate_loss_and_grad(spec, w, data), InvalidParameter);
  w.pop_back();
  CHECK_THROWS_AS(surrogate_loss_and_grad(spec, w, data), DimensionMismatch);
  CHECK_THROWS_AS(surrogate_loss_and_grad(ModelSpec::linear(4, 2),
                                          std::vector<double>(8, 0.0), data),
                  DimensionMismatch);
}

TEST_CASE("zero-one error") {
  // Zero params: every prediction ties and resolves to class 0.
  Dataset d{2, 2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, {0, 1, 1, 0}};
  const auto spec = ModelSpec::linear(2, 2);
  CHECK(zero_one_error(spec, std::vector<double>(4, 0.0), d) == 0.5);

  // Separable data with the separating weights.
  Dataset s{2, 2, {1.0, 0.0, 0.0, 1.0, 2.0, 0.1, 0.2, 3.0}, {0, 1, 0, 1}};
  const std::vector<double> sep{1.0, 0.0, 0.0, 1.0};
  CHECK(zero_one_error(spec, sep, s) == 0.0);

  // Flipping binary labels maps e to 1 - e when no logits tie.
  const auto r = oracle::random_dataset(40, 2, 2, 5);
  RngStream rng(5);
  const auto w = init_params(spec, 1.0, rng);
  auto flipped = r;
  for (auto& y : flipped.labels) y = 1 - y;
  CHECK(zero_one_error(spec, w, flipped) == doctest::Approx(1.0 - zero_one_error(spec, w, r)));
}

TEST_CASE("predict_proba is a distribution") {
  const auto spec = ModelSpec::fcn(3, 4, 5);
  RngStream rng(8);
  const auto w = init_params(spec, 2.0, rng);
  const std::vector<double> x{0.3, -1.0, 2.0};
  const auto p = predict_proba(spec, w, x);
  CHECK(p.size() == 5);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dataset validation") {
  Dataset d{2, 2, {0.0, 1.0, 2.0}, {0, 1}};
  CHECK_THROWS_AS(d.validate(), InvalidParameter);
  Dataset e{2, 2, {0.0, 1.0}, {2}};
  CHECK_THROWS_AS(e.validate(), InvalidParameter);
}
