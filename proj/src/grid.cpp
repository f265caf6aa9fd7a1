#include "levybound/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <tuple>

#include "levybound/bounds.hpp"
#include "levybound/error.hpp"
#include "levybound/rng.hpp"

namespace levybound {

void GridSpec::validate() const {
  if (alphas.empty() || widths.empty() || seeds.empty()) {
    throw InvalidParameter("grid: alpha, width and seed lists must be nonempty");
  }
  if (sigma1s.empty() == sigma_sqrt_d.empty()) {
    throw InvalidParameter("grid: give exactly one of sigma1 or sigma_sqrt_d values");
  }
  for (double a : alphas) {
    if (!(a > 1.0 && a <= 2.0)) throw InvalidParameter("grid: alpha values must lie in (1, 2]");
  }
  for (double s : sigma1s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidParameter("grid: sigma1 must be >= 0");
  }
  for (double s : sigma_sqrt_d) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidParameter("grid: sigma_sqrt_d must be >= 0");
  }
  TrainConfig probe = base;
  probe.alpha = alphas.front();
  probe.validate();
  if (window == 0) throw InvalidParameter("grid: window must be >= 1");
  if (!(trim >= 0.0 && trim < 1.0)) throw InvalidParameter("grid: trim must lie in [0, 1)");
  if (!(radius > 0.0)) throw InvalidParameter("grid: R must be > 0");
  if (!(init_scale >= 0.0)) throw InvalidParameter("grid: init_scale must be >= 0");
  if (output.empty()) throw InvalidParameter("grid: output path is required");
  if (data.uses_idx()) {
    if (data.train_labels.empty() || data.test_images.empty() || data.test_labels.empty()) {
      throw InvalidParameter("grid: IDX source needs train and test image/label paths");
    }
  } else {
    data.synthetic.validate();
  }
}

std::size_t GridSpec::cell_count() const noexcept {
  const std::size_t sigmas = sigma1s.empty() ? sigma_sqrt_d.size() : sigma1s.size();
  return alphas.size() * sigmas * widths.size() * seeds.size();
}

TrainTestSplit load_data(const DataSource& source) {
  if (!source.uses_idx()) return generate_synthetic(source.synthetic);
  TrainTestSplit split{load_idx(source.train_images, source.train_labels),
                       load_idx(source.test_images, source.test_labels)};
  const std::size_t classes = std::max(split.train.classes, split.test.classes);
  split.train.classes = split.test.classes = classes;
  if (source.subsample_fraction < 1.0) {
    split.train = subsample(split.train, source.subsample_fraction, source.subsample_seed);
  }
  return split;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ModelSpec model_for(std::size_t width, const TrainTestSplit& data) {
  return width == 0 ? ModelSpec::linear(data.train.dim, data.train.classes)
                    : ModelSpec::fcn(data.train.dim, width, data.train.classes);
}

struct Cell {
  std::size_t sigma_index;
  std::size_t width_index;
  double alpha;
  double sigma1;
  std::size_t width;
  std::uint64_t seed;
};

auto sort_key(const RunRecord& r) {
  return std::make_tuple(r.alpha, r.sigma1, r.d, r.seed, r.width);
}

bool same_cell(const RunRecord& r, const Cell& c) {
  return r.alpha == c.alpha && r.sigma1 == c.sigma1 && r.width == c.width && r.seed == c.seed;
}

}  // namespace

RunRecord run_cell(const ModelSpec& spec, const TrainTestSplit& data, const GridSpec& grid,
                   double alpha, double sigma1, std::size_t width, std::uint64_t cell_seed,
                   std::uint64_t record_seed) {
  RunRecord rec;
  rec.alpha = alpha;
  rec.sigma1 = sigma1;
  rec.d = spec.param_count();
  rec.width = width;
  rec.n = data.train.size();
  rec.seed = record_seed;
  rec.gap = rec.i_hat = rec.g_hat = kNaN;

  TrainConfig cfg = grid.base;
  cfg.alpha = alpha;
  cfg.sigma1 = sigma1;
  cfg.seed = cell_seed;
  try {
    const RunTrace trace = run_training(spec, data.train, data.test, cfg, grid.init_scale);
    rec.diverged = trace.diverged;
    if (trace.diverged) return rec;
    rec.gap = robust_gap(trace, grid.window, grid.trim);
    rec.i_hat = integral_estimate(trace);
    if (sigma1 > 0.0) {
      BoundInputs in;
      in.alpha = alpha;
      in.d = rec.d;
      in.n = rec.n;
      in.sigma1 = sigma1;
      in.radius = grid.radius;
      rec.g_hat = bound_estimate(rec.i_hat, in);
    }
  } catch (const Error&) {
    rec.diverged = true;
    rec.gap = rec.i_hat = rec.g_hat = kNaN;
  }
  return rec;
}

GridOutcome execute_grid(const GridSpec& grid, int workers) {
  grid.validate();
  const TrainTestSplit data = load_data(grid.data);
  data.train.validate();
  data.test.validate();

  std::vector<ModelSpec> models;
  for (std::size_t w : grid.widths) models.push_back(model_for(w, data));

  std::vector<Cell> cells;
  const std::size_t sigma_count =
      grid.sigma1s.empty() ? grid.sigma_sqrt_d.size() : grid.sigma1s.size();
  for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai) {
    for (std::size_t si = 0; si < sigma_count; ++si) {
      for (std::size_t wi = 0; wi < grid.widths.size(); ++wi) {
        const double d = static_cast<double>(models[wi].param_count());
        const double sigma1 =
            grid.sigma1s.empty() ? grid.sigma_sqrt_d[si] / std::sqrt(d) : grid.sigma1s[si];
        for (std::size_t ki = 0; ki < grid.seeds.size(); ++ki) {
          cells.push_back({si, wi, grid.alphas[ai], sigma1, grid.widths[wi],
                           grid.seeds[ki]});
        }
      }
    }
  }

  GridOutcome outcome;
  std::vector<RunRecord> existing;
  if (std::filesystem::exists(grid.output)) existing = read_records(grid.output);

  // Rows already on disk are kept, including any that belong to other grids.
  outcome.records = existing;
  std::vector<const Cell*> pending;
  for (const Cell& c : cells) {
    const bool done = std::any_of(existing.begin(), existing.end(),
                                  [&](const RunRecord& r) { return same_cell(r, c); });
    if (done) {
      ++outcome.reused;
    } else {
      pending.push_back(&c);
    }
  }

  if (!pending.empty()) {
    const bool fresh = existing.empty() && !std::filesystem::exists(grid.output);
    std::ofstream sink(grid.output, std::ios::app);
    if (!sink) throw IoError("cannot open " + grid.output.string() + " for appending");
    if (fresh) sink << kRecordHeader << '\n' << std::flush;

    std::vector<RunRecord> fresh_rows(pending.size());
    const auto count = static_cast<std::int64_t>(pending.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(workers, 1))
    for (std::int64_t i = 0; i < count; ++i) {
      const Cell& c = *pending[static_cast<std::size_t>(i)];
      // Alpha is left out of the path: cells that differ only in alpha share
      // their initialisation and noise stream.
      const std::uint64_t cell_seed = derive_seed(c.seed, {c.sigma_index, c.width_index});
      RunRecord rec = run_cell(models[c.width_index], data, grid, c.alpha, c.sigma1, c.width,
                               cell_seed, c.seed);
#pragma omp critical(levybound_grid_sink)
      {
        sink << format_record(rec) << '\n' << std::flush;
      }
      fresh_rows[static_cast<std::size_t>(i)] = rec;
    }
    if (!sink) throw IoError("failed appending to " + grid.output.string());
    outcome.computed = fresh_rows.size();
    outcome.records.insert(outcome.records.end(), fresh_rows.begin(), fresh_rows.end());
  }

  std::sort(outcome.records.begin(), outcome.records.end(),
            [](const RunRecord& a, const RunRecord& b) { return sort_key(a) < sort_key(b); });

  const std::filesystem::path tmp = grid.output.string() + ".tmp";
  write_records(tmp, outcome.records);
  std::filesystem::rename(tmp, grid.output);
  return outcome;
}

}  // namespace levybound
