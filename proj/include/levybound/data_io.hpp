#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levybound/analysis.hpp"
#include "levybound/model.hpp"

namespace levybound {

/// Gaussian blobs: class c is centred at separation * e_c.
struct SyntheticSpec {
  std::size_t n_per_class = 100;
  std::size_t dim = 10;
  std::size_t classes = 2;
  double separation = 3.0;
  double noise_std = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidParameter; also rejects classes > dim.
  void validate() const;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

/// Draws classes * n_per_class points, shuffles them by seed and keeps the
/// first round(0.8 * total) rows for training.
TrainTestSplit generate_synthetic(const SyntheticSpec& spec);

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Parses a big-endian IDX image file and its label file; pixels are scaled
/// to [0, 1]. Classes are inferred as max label + 1 unless `class_bound` is
/// given, in which case labels >= class_bound raise FormatError("label").
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::optional<std::size_t> class_bound = std::nullopt);

/// Inverse of load_idx for datasets whose features came from 8-bit pixels.
void write_idx(const Dataset& data, std::size_t rows, std::size_t cols,
               const std::filesystem::path& images, const std::filesystem::path& labels);

/// Uniform without-replacement subset of round(fraction * n) rows, kept in
/// their original order. Throws InvalidParameter for an empty result.
Dataset subsample(const Dataset& data, double fraction, std::uint64_t seed);

inline constexpr const char* kRecordHeader = "alpha,sigma1,d,width,n,seed,gap,i_hat,g_hat,diverged";

/// 17 significant digits; "nan"/"inf" for non-finite values.
std::string format_double(double x);

void write_records(std::ostream& out, std::span<const RunRecord> records);
void write_records(const std::filesystem::path& path, std::span<const RunRecord> records);
std::string format_record(const RunRecord& r);

/// Throws ParseError (header mismatch or bad field, with line number).
std::vector<RunRecord> read_records(std::istream& in);
/// Throws IoError when the file cannot be opened.
std::vector<RunRecord> read_records(const std::filesystem::path& path);

}  // namespace levybound
