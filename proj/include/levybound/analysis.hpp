#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "levybound/sde.hpp"

namespace levybound {

/// One persisted grid cell.
struct RunRecord {
  double alpha = 0.0;
  double sigma1 = 0.0;
  std::size_t d = 0;
  std::size_t width = 0;  ///< hidden width; 0 for the linear model
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double gap = 0.0;
  double i_hat = 0.0;
  double g_hat = 0.0;
  bool diverged = false;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Mean of `gaps` after dropping the ceil(trim * count) largest values (at
/// most count - 1 of them). Throws PreconditionError when empty.
double trimmed_mean(std::span<const double> gaps, double trim);

/// Robust generalization gap of a run: trimmed mean of (test - train) 0-1
/// error over the evaluated steps among the last `window` steps.
double robust_gap(const RunTrace& trace, std::size_t window = 2000, double trim = 0.15);

/// Kendall tau-b in O(n log n). Throws DimensionMismatch for unequal lengths,
/// PreconditionError for n < 2 or when either variable is constant.
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

/// Pearson product-moment correlation. Throws PreconditionError on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

enum class GroupKey { Dimension, Sigma1 };

struct GroupCorrelation {
  double key = 0.0;     ///< d or sigma1
  double sigma1 = 0.0;  ///< shared sigma1 of the group, NaN when mixed
  double d = 0.0;       ///< shared d of the group, NaN when mixed
  std::size_t seeds_used = 0;
  double tau_seed_mean = 0.0;  ///< mean over seeds of tau(alpha, gap)
  double tau_seed_std = 0.0;   ///< sample std over seeds (0 with one seed)
  double tau_of_mean = 0.0;    ///< tau(alpha, seed-averaged gap)
  double pearson_of_mean = 0.0;
  std::vector<double> alphas;  ///< sorted distinct alpha values
  std::vector<double> mean_gaps;
  std::vector<double> std_gaps;
};

/// Per-group correlation between alpha and the gap, over non-diverged records.
/// Seeds whose gaps are constant (tau undefined) are skipped; a group with
/// fewer than two distinct alphas raises PreconditionError.
std::vector<GroupCorrelation> correlation_scan(std::span<const RunRecord> records, GroupKey key);

struct AlphaRegression {
  double slope = 0.0;
  double intercept = 0.0;
  double alpha_hat = 0.0;  ///< 2 - 4 slope
};

/// OLS of log(seed-averaged gap) on log(d).
AlphaRegression alpha_regression(std::span<const RunRecord> records);

struct RadiusEstimate {
  double crossing = 0.0;  ///< interpolated d (or sigma1) where tau_of_mean changes sign
  double radius = 0.0;
};

/// Locates the first sign change of tau_of_mean along the scan (ordered by
/// key) and returns R = sigma1 sqrt(d) at the linear-interpolated crossing.
/// Throws PreconditionError when tau never changes sign.
RadiusEstimate estimate_radius(std::span<const GroupCorrelation> scan, GroupKey axis);

}  // namespace levybound
