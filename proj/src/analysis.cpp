#include "levybound/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "levybound/error.hpp"
#include "levybound/summation.hpp"

namespace levybound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> xs) {
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  CompensatedSum acc;
  for (double x : xs) acc.add((x - m) * (x - m));
  return std::sqrt(acc.value() / static_cast<double>(xs.size() - 1));
}

// Number of pairs i < j with v[i] > v[j]; sorts v ascending as a side effect.
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buffer) {
  const std::size_t n = v.size();
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buffer[k++] = v[j++];
        } else {
          buffer[k++] = v[i++];
        }
      }
      while (i < mid) buffer[k++] = v[i++];
      while (j < hi) buffer[k++] = v[j++];
    }
    std::swap(v, buffer);
  }
  return swaps;
}

// Sum of t (t - 1) / 2 over maximal runs of adjacent equal elements.
template <class Equal>
std::int64_t tied_pairs(std::size_t n, Equal&& equal) {
  std::int64_t ties = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      ties += static_cast<std::int64_t>(run * (run - 1) / 2);
      run = 1;
    }
  }
  return ties;
}

}  // namespace

double trimmed_mean(std::span<const double> gaps, double trim) {
  if (!(trim >= 0.0 && trim < 1.0)) throw InvalidParameter("trim must lie in [0, 1)");
  if (gaps.empty()) throw PreconditionError("robust gap: no evaluated gaps in the window");
  std::vector<double> sorted(gaps.begin(), gaps.end());
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<double>(sorted.size());
  // The (1 - 1e-12) factor keeps products such as 0.15 * 20 from rounding up past an integer.
  auto removed = static_cast<std::size_t>(std::ceil(trim * m * (1.0 - 1e-12)));
  removed = std::min(removed, sorted.size() - 1);
  sorted.resize(sorted.size() - removed);
  return mean_of(sorted);
}

double robust_gap(const RunTrace& trace, std::size_t window, double trim) {
  if (window == 0) throw InvalidParameter("robust gap window must be >= 1");
  if (trace.records.empty()) throw PreconditionError("robust gap: empty trace");
  const std::size_t last = trace.records.back().step;
  const std::size_t first = last >= window ? last - window + 1 : 1;
  std::vector<double> gaps;
  for (const auto& rec : trace.records) {
    if (rec.step < first || !rec.train_error || !rec.test_error) continue;
    gaps.push_back(*rec.test_error - *rec.train_error);
  }
  return trimmed_mean(gaps, trim);
}

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("kendall_tau: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw PreconditionError("kendall_tau: need at least two pairs");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] < xs[b] || (xs[a] == xs[b] && ys[a] < ys[b]);
  });

  const std::int64_t x_ties =
      tied_pairs(n, [&](std::size_t i, std::size_t j) { return xs[order[i]] == xs[order[j]]; });
  const std::int64_t joint_ties = tied_pairs(n, [&](std::size_t i, std::size_t j) {
    return xs[order[i]] == xs[order[j]] && ys[order[i]] == ys[order[j]];
  });

  std::vector<double> y_sorted(n);
  for (std::size_t i = 0; i < n; ++i) y_sorted[i] = ys[order[i]];
  std::vector<double> buffer(n);
  const std::int64_t discordant = count_inversions(y_sorted, buffer);
  const std::int64_t y_ties =
      tied_pairs(n, [&](std::size_t i, std::size_t j) { return y_sorted[i] == y_sorted[j]; });

  const auto pairs = static_cast<std::int64_t>(n * (n - 1) / 2);
  if (x_ties == pairs || y_ties == pairs) {
    throw PreconditionError("kendall_tau: undefined for a constant variable");
  }
  const std::int64_t numerator = pairs - x_ties - y_ties + joint_ties - 2 * discordant;
  const double denominator =
      std::sqrt(static_cast<double>(pairs - x_ties) * static_cast<double>(pairs - y_ties));
  return static_cast<double>(numerator) / denominator;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("pearson: length mismatch");
  if (xs.size() < 2) throw PreconditionError("pearson: need at least two pairs");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  CompensatedSum sxx;
  CompensatedSum syy;
  CompensatedSum sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  if (sxx.value() == 0.0 || syy.value() == 0.0) {
    throw PreconditionError("pearson: undefined for a constant variable");
  }
  return std::clamp(sxy.value() / std::sqrt(sxx.value() * syy.value()), -1.0, 1.0);
}

std::vector<GroupCorrelation> correlation_scan(std::span<const RunRecord> records, GroupKey key) {
  std::map<double, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) {
    if (r.diverged || !std::isfinite(r.gap)) continue;
    groups[key == GroupKey::Dimension ? static_cast<double>(r.d) : r.sigma1].push_back(&r);
  }
  if (groups.empty()) throw PreconditionError("correlation scan: no usable records");

  std::vector<GroupCorrelation> out;
  for (const auto& [value, members] : groups) {
    GroupCorrelation g;
    g.key = value;
    g.sigma1 = members.front()->sigma1;
    g.d = static_cast<double>(members.front()->d);
    std::map<double, std::vector<double>> by_alpha;
    std::map<std::uint64_t, std::vector<std::pair<double, double>>> by_seed;
    for (const RunRecord* r : members) {
      if (r->sigma1 != g.sigma1) g.sigma1 = kNaN;
      if (static_cast<double>(r->d) != g.d) g.d = kNaN;
      by_alpha[r->alpha].push_back(r->gap);
      by_seed[r->seed].emplace_back(r->alpha, r->gap);
    }
    if (by_alpha.size() < 2) {
      throw PreconditionError("correlation scan: group " + std::to_string(value) +
                              " has fewer than two distinct alpha values");
    }

    std::vector<double> taus;
    for (const auto& [seed, pairs] : by_seed) {
      std::vector<double> a;
      std::vector<double> gap;
      for (const auto& [alpha, v] : pairs) {
        a.push_back(alpha);
        gap.push_back(v);
      }
      try {
        taus.push_back(kendall_tau(a, gap));
      } catch (const PreconditionError&) {
        // constant alpha or constant gaps for this seed: tau undefined
      }
    }
    g.seeds_used = taus.size();
    g.tau_seed_mean = taus.empty() ? kNaN : mean_of(taus);
    g.tau_seed_std = taus.empty() ? kNaN : sample_std(taus);

    for (const auto& [alpha, gaps] : by_alpha) {
      g.alphas.push_back(alpha);
      g.mean_gaps.push_back(mean_of(gaps));
      g.std_gaps.push_back(sample_std(gaps));
    }
    try {
      g.tau_of_mean = kendall_tau(g.alphas, g.mean_gaps);
      g.pearson_of_mean = pearson(g.alphas, g.mean_gaps);
    } catch (const PreconditionError&) {
      g.tau_of_mean = kNaN;
      g.pearson_of_mean = kNaN;
    }
    out.push_back(std::move(g));
  }
  return out;
}

AlphaRegression alpha_regression(std::span<const RunRecord> records) {
  std::map<std::size_t, std::vector<double>> by_d;
  for (const auto& r : records) {
    if (r.diverged || !std::isfinite(r.gap)) continue;
    by_d[r.d].push_back(r.gap);
  }
  if (by_d.size() < 2) throw PreconditionError("alpha regression: need at least two distinct d");

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [d, gaps] : by_d) {
    const double g = mean_of(gaps);
    if (!(g > 0.0)) {
      throw PreconditionError("alpha regression: non-positive mean gap at d = " +
                              std::to_string(d));
    }
    xs.push_back(std::log(static_cast<double>(d)));
    ys.push_back(std::log(g));
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  CompensatedSum sxx;
  CompensatedSum sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx.add((xs[i] - mx) * (xs[i] - mx));
    sxy.add((xs[i] - mx) * (ys[i] - my));
  }
  const double slope = sxy.value() / sxx.value();
  return {slope, my - slope * mx, 2.0 - 4.0 * slope};
}

RadiusEstimate estimate_radius(std::span<const GroupCorrelation> scan, GroupKey axis) {
  std::vector<const GroupCorrelation*> points;
  for (const auto& g : scan) {
    if (std::isfinite(g.tau_of_mean)) points.push_back(&g);
  }
  std::sort(points.begin(), points.end(),
            [](const auto* a, const auto* b) { return a->key < b->key; });

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const GroupCorrelation& lo = *points[i];
    const GroupCorrelation& hi = *points[i + 1];
    double crossing;
    if (lo.tau_of_mean == 0.0) {
      crossing = lo.key;
    } else if ((lo.tau_of_mean > 0.0) != (hi.tau_of_mean > 0.0) || hi.tau_of_mean == 0.0) {
      const double t = lo.tau_of_mean / (lo.tau_of_mean - hi.tau_of_mean);
      crossing = lo.key + t * (hi.key - lo.key);
    } else {
      continue;
    }
    const double radius = axis == GroupKey::Dimension ? lo.sigma1 * std::sqrt(crossing)
                                                      : crossing * std::sqrt(lo.d);
    if (!std::isfinite(radius)) {
      throw PreconditionError("radius estimate: the fixed scan coordinate is not shared");
    }
    return {crossing, radius};
  }
  throw PreconditionError("radius estimate: tau does not change sign along the scan");
}

}  // namespace levybound
