#include <doctest.h>

#include <cmath>
#include <vector>

#include "levybound/analysis.hpp"
#include "levybound/bounds.hpp"
#include "levybound/error.hpp"
#include "oracles.hpp"

using namespace levybound;

namespace {

RunRecord rec(double alpha, double sigma1, std::size_t d, std::uint64_t seed, double gap) {
  RunRecord r;
  r.alpha = alpha;
  r.sigma1 = sigma1;
  r.d = d;
  r.n = 100;
  r.seed = seed;
  r.gap = gap;
  return r;
}

const std::vector<double> kAlphas{1.6, 1.7, 1.8, 1.9, 2.0};

}  // namespace

TEST_CASE("trimmed mean") {
  std::vector<double> gaps(17, 0.1);
  gaps.insert(gaps.end(), {1.0, 1.0, 1.0});
  CHECK(trimmed_mean(gaps, 0.15) == doctest::Approx(0.1).epsilon(1e-15));
  const std::vector<double> xs{0.3, 0.1, 0.2, 0.6};
  CHECK(trimmed_mean(xs, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
  const std::vector<double> same(9, 0.25);
  for (double t : {0.0, 0.3, 0.9}) CHECK(trimmed_mean(same, t) == 0.25);
  const std::vector<double> one{0.4};
  CHECK(trimmed_mean(one, 0.9) == 0.4);
  CHECK_THROWS_AS(trimmed_mean(std::vector<double>{}, 0.1), PreconditionError);
  CHECK_THROWS_AS(trimmed_mean(xs, 1.0), InvalidParameter);
}

TEST_CASE("robust gap looks only at the trailing window") {
  RunTrace t;
  for (std::size_t k = 1; k <= 100; ++k) {
    StepRecord r{k, 1.0, {}, {}};
    if (k % 10 == 0) {
      r.train_error = 0.1;
      r.test_error = k <= 50 ? 0.9 : 0.3;
    }
    t.records.push_back(r);
  }
  CHECK(robust_gap(t, 50, 0.0) == doctest::Approx(0.2));
  CHECK(robust_gap(t, 1000, 0.0) == doctest::Approx(0.5));
  CHECK(robust_gap(t, 5, 0.0) == doctest::Approx(0.2));  // only step 100 is in the window
  t.records.back().train_error.reset();
  CHECK_THROWS_AS(robust_gap(t, 5, 0.0), PreconditionError);
}

TEST_CASE("kendall tau basics") {
  const std::vector<double> x{1, 2, 3, 4}, rev{4, 3, 2, 1};
  CHECK(kendall_tau(x, x) == 1.0);
  CHECK(kendall_tau(x, rev) == -1.0);
  CHECK_THROWS_AS(kendall_tau(x, std::vector<double>{1, 2}), DimensionMismatch);
  CHECK_THROWS_AS(kendall_tau(x, std::vector<double>(4, 1.0)), PreconditionError);
  CHECK_THROWS_AS(kendall_tau(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
}

TEST_CASE("kendall tau equals the pairwise count on tied data") {
  RngStream rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(200), y(200);
    for (std::size_t i = 0; i < 200; ++i) {
      x[i] = static_cast<double>(rng.below(15));
      y[i] = static_cast<double>(rng.below(25)) + 0.5 * x[i];
    }
    CHECK(kendall_tau(x, y) == oracle::brute_kendall(x, y));
  }
}

TEST_CASE("pearson") {
  const std::vector<double> x{0.5, 1.0, 3.0, -2.0};
  std::vector<double> y, neg;
  for (double v : x) {
    y.push_back(2.0 * v + 3.0);
    neg.push_back(-v);
  }
  CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  RngStream rng(8);
  std::vector<double> a(100), b(100);
  for (std::size_t i = 0; i < 100; ++i) {
    a[i] = rng.gaussian();
    b[i] = 0.3 * a[i] + rng.gaussian();
  }
  CHECK(std::abs(pearson(a, b) - oracle::two_pass_pearson(a, b)) < 1e-12);
  CHECK_THROWS_AS(pearson(x, std::vector<double>(4, 2.0)), PreconditionError);
}

TEST_CASE("correlation scan on monotone gaps") {
  std::vector<RunRecord> up, down;
  for (double s : {0.01, 1.0}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      for (double a : kAlphas) {
        up.push_back(rec(a, s, 100, seed, a + 0.01 * seed));
        down.push_back(rec(a, s, 100, seed, -a));
      }
    }
  }
  for (const auto& g : correlation_scan(up, GroupKey::Sigma1)) {
    CHECK(g.tau_seed_mean == 1.0);
    CHECK(g.tau_seed_std == 0.0);
    CHECK(g.tau_of_mean == 1.0);
    CHECK(g.seeds_used == 3);
    CHECK(g.d == 100.0);
    CHECK(g.alphas == kAlphas);
  }
  for (const auto& g : correlation_scan(down, GroupKey::Sigma1)) {
    CHECK(g.tau_seed_mean == -1.0);
    CHECK(g.tau_of_mean == -1.0);
  }
}

TEST_CASE("bound-shaped gaps reproduce the regime signs") {
  // gap = G_hat at fixed I_hat; sigma1 sqrt(d) = 0.1 vs 10.
  std::vector<RunRecord> rows;
  const std::size_t d = 400;
  for (double x : {0.1, 10.0}) {
    const double sigma1 = x / std::sqrt(double(d));
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      for (double a : kAlphas) {
        BoundInputs in;
        in.alpha = a == 2.0 ? 2.0 - 1e-9 : a;
        in.d = d;
        in.n = 500;
        in.sigma1 = sigma1;
        rows.push_back(rec(a, sigma1, d, seed, bound_estimate(1.0, in)));
      }
    }
  }
  const auto scan = correlation_scan(rows, GroupKey::Sigma1);
  REQUIRE(scan.size() == 2);
  CHECK(scan[0].tau_seed_mean == 1.0);   // heavy regime, smaller sigma1 sorts first
  CHECK(scan[1].tau_seed_mean == -1.0);  // light regime
}

TEST_CASE("correlation scan preconditions and skipped seeds") {
  std::vector<RunRecord> rows{rec(1.6, 0.1, 10, 0, 0.1), rec(1.6, 0.1, 10, 1, 0.2)};
  CHECK_THROWS_AS(correlation_scan(rows, GroupKey::Sigma1), PreconditionError);
  rows = {rec(1.6, 0.1, 10, 0, 0.1), rec(1.8, 0.1, 10, 0, 0.1),  // constant gaps: skipped
          rec(1.6, 0.1, 10, 1, 0.1), rec(1.8, 0.1, 10, 1, 0.3)};
  const auto g = correlation_scan(rows, GroupKey::Sigma1).front();
  CHECK(g.seeds_used == 1);
  CHECK(g.tau_seed_mean == 1.0);
  auto diverged = rows;
  for (auto& r : diverged) r.diverged = true;
  CHECK_THROWS_AS(correlation_scan(diverged, GroupKey::Sigma1), PreconditionError);
}

TEST_CASE("tail-index regression") {
  for (double alpha : {1.2, 1.6, 1.9}) {
    for (double c : {1.0, 3.7}) {
      std::vector<RunRecord> rows;
      for (std::size_t d : {100u, 1000u, 10000u}) {
        rows.push_back(rec(alpha, 0.1, d, 0, c * std::pow(double(d), 0.5 - alpha / 4.0)));
      }
      const auto fit = alpha_regression(rows);
      CHECK(std::abs(fit.alpha_hat - alpha) < 1e-10);
      CHECK(std::abs(fit.slope - (0.5 - alpha / 4.0)) < 1e-10);
    }
  }
  std::vector<RunRecord> flat{rec(1.5, 0.1, 10, 0, 0.2), rec(1.5, 0.1, 100, 0, 0.2)};
  const auto fit = alpha_regression(flat);
  CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fit.alpha_hat == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_regression(std::vector<RunRecord>{rec(1.5, 0.1, 10, 0, 0.2)}),
                  PreconditionError);
}

TEST_CASE("radius estimate from a hand-made scan") {
  std::vector<GroupCorrelation> scan(3);
  const double ds[] = {1e4, 6.4e4, 1e5};
  const double taus[] = {0.5, 0.1, -0.2};
  for (int i = 0; i < 3; ++i) {
    scan[i].key = ds[i];
    scan[i].d = ds[i];
    scan[i].sigma1 = 0.01;
    scan[i].tau_of_mean = taus[i];
  }
  const auto r = estimate_radius(scan, GroupKey::Dimension);
  CHECK(r.crossing == doctest::Approx(7.6e4));
  CHECK(r.radius == doctest::Approx(0.01 * std::sqrt(7.6e4)));
  for (auto& g : scan) g.tau_of_mean = 0.3;
  CHECK_THROWS_AS(estimate_radius(scan, GroupKey::Dimension), PreconditionError);
}

TEST_CASE("radius estimate recovers a synthetic threshold at sigma1 sqrt(d) = 1") {
  const double sigma1 = 0.01;
  const std::vector<std::size_t> ds{2500, 5000, 7500, 9000, 11000, 15000, 20000};
  std::vector<RunRecord> rows;
  for (std::size_t d : ds) {
    const double x = sigma1 * std::sqrt(double(d));
    for (double a : kAlphas) rows.push_back(rec(a, sigma1, d, 0, std::pow(x, -a)));
  }
  const auto r = estimate_radius(correlation_scan(rows, GroupKey::Dimension), GroupKey::Dimension);
  CHECK(r.radius > sigma1 * std::sqrt(9000.0));
  CHECK(r.radius < sigma1 * std::sqrt(11000.0));
}
