#pragma once

#include <cmath>
#include <span>

namespace levybound {

/// Neumaier (improved Kahan) running sum.
struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum);
    add(other.compensation);
  }

  double value() const noexcept { return sum + compensation; }
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline double squared_norm(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x * x);
  return acc.value();
}

}  // namespace levybound
