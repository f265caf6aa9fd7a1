#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levybound/analysis.hpp"
#include "levybound/data_io.hpp"
#include "levybound/sde.hpp"

namespace levybound {

/// Where grid cells get their data from.
struct DataSource {
  SyntheticSpec synthetic;  ///< used when idx paths are empty
  std::filesystem::path train_images, train_labels, test_images, test_labels;
  double subsample_fraction = 1.0;
  std::uint64_t subsample_seed = 0;

  bool uses_idx() const noexcept { return !train_images.empty(); }
};

/// Cartesian product alpha x sigma x width x seed.
///
/// The noise axis is given either as raw sigma1 values or as sigma1 sqrt(d)
/// values (converted per width once d is known); exactly one must be nonempty.
struct GridSpec {
  std::vector<double> alphas;
  std::vector<double> sigma1s;
  std::vector<double> sigma_sqrt_d;
  std::vector<std::size_t> widths;  ///< 0 selects the linear model
  std::vector<std::uint64_t> seeds;
  TrainConfig base;  ///< alpha, sigma1 and seed are overwritten per cell
  double init_scale = 1.0;
  DataSource data;
  std::size_t window = 2000;
  double trim = 0.15;
  double radius = 1.0;  ///< R used for G_hat
  std::filesystem::path output;

  /// Throws InvalidParameter; runs before any cell is trained.
  void validate() const;
  std::size_t cell_count() const noexcept;
};

struct GridOutcome {
  std::vector<RunRecord> records;  ///< sorted by (alpha, sigma1, d, seed)
  std::size_t computed = 0;        ///< cells trained in this call
  std::size_t reused = 0;          ///< cells found in an existing output file
};

/// Loads (or generates) the train/test split described by `source`.
TrainTestSplit load_data(const DataSource& source);

/// Trains one cell and condenses it into a record. Training failures become
/// diverged rows with NaN statistics.
RunRecord run_cell(const ModelSpec& spec, const TrainTestSplit& data, const GridSpec& grid,
                   double alpha, double sigma1, std::size_t width, std::uint64_t cell_seed,
                   std::uint64_t record_seed);

/// Cell randomness comes from derive_seed(seed, {sigma index, width index}),
/// so appending grid values leaves existing cells unchanged and cells that
/// differ only in alpha share initialisation and noise draws.
///
/// Runs every missing cell with up to `workers` concurrent cells, appending
/// each finished row to grid.output as it completes, then rewrites the file
/// sorted. Rows already present in grid.output are reused, so an interrupted
/// grid resumes where it stopped. The sorted file depends only on the grid,
/// not on `workers` or on completion order.
GridOutcome execute_grid(const GridSpec& grid, int workers);

}  // namespace levybound
