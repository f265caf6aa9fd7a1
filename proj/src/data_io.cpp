#include "levybound/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "levybound/error.hpp"
#include "levybound/rng.hpp"

namespace levybound {

void SyntheticSpec::validate() const {
  if (n_per_class == 0 || dim == 0) throw InvalidParameter("synthetic: sizes must be positive");
  if (classes < 2) throw InvalidParameter("synthetic: need at least two classes");
  if (classes > dim) throw InvalidParameter("synthetic: class count exceeds input dimension");
  if (!(separation >= 0.0) || !(noise_std >= 0.0)) {
    throw InvalidParameter("synthetic: separation and noise_std must be non-negative");
  }
}

TrainTestSplit generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  RngStream rng(spec.seed, 0);
  const std::size_t total = spec.n_per_class * spec.classes;

  Dataset all{spec.dim, spec.classes, {}, {}};
  all.features.reserve(total * spec.dim);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < spec.n_per_class; ++i) {
      for (std::size_t k = 0; k < spec.dim; ++k) {
        const double centre = k == c ? spec.separation : 0.0;
        all.features.push_back(centre + spec.noise_std * rng.gaussian());
      }
      all.labels.push_back(static_cast<std::uint32_t>(c));
    }
  }

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = total; i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(total)));

  TrainTestSplit split{{spec.dim, spec.classes, {}, {}}, {spec.dim, spec.classes, {}, {}}};
  for (std::size_t pos = 0; pos < total; ++pos) {
    Dataset& dst = pos < n_train ? split.train : split.test;
    const auto row = all.row(order[pos]);
    dst.features.insert(dst.features.end(), row.begin(), row.end());
    dst.labels.push_back(all.labels[order[pos]]);
  }
  return split;
}

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const char* field) {
  if (bytes.size() < offset + 4) throw FormatError(field, "file truncated in header");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::optional<std::size_t> class_bound) {
  const auto img = read_bytes(images);
  const auto lab = read_bytes(labels);

  const std::uint32_t img_magic = read_be32(img, 0, "images magic");
  if (img_magic != kIdxImagesMagic) throw FormatError("images magic", "expected 0x00000803");
  const std::uint32_t lab_magic = read_be32(lab, 0, "labels magic");
  if (lab_magic != kIdxLabelsMagic) throw FormatError("labels magic", "expected 0x00000801");

  const std::size_t count = read_be32(img, 4, "images count");
  const std::size_t rows = read_be32(img, 8, "images rows");
  const std::size_t cols = read_be32(img, 12, "images cols");
  const std::size_t label_count = read_be32(lab, 4, "labels count");
  if (count != label_count) {
    throw FormatError("count", "images hold " + std::to_string(count) + " items, labels " +
                                   std::to_string(label_count));
  }
  const std::size_t dim = rows * cols;
  if (dim == 0) throw FormatError("images dimensions", "zero-sized images");
  if (img.size() < 16 + count * dim) throw FormatError("images pixels", "file truncated");
  if (lab.size() < 8 + count) throw FormatError("labels data", "file truncated");

  Dataset data{dim, 0, std::vector<double>(count * dim), std::vector<std::uint32_t>(count)};
  for (std::size_t k = 0; k < count * dim; ++k) data.features[k] = img[16 + k] / 255.0;
  std::uint32_t max_label = 0;
  for (std::size_t i = 0; i < count; ++i) {
    data.labels[i] = lab[8 + i];
    max_label = std::max(max_label, data.labels[i]);
    if (class_bound && data.labels[i] >= *class_bound) {
      throw FormatError("label", "value " + std::to_string(data.labels[i]) + " at item " +
                                     std::to_string(i) + " is not below class bound " +
                                     std::to_string(*class_bound));
    }
  }
  data.classes = class_bound ? *class_bound : static_cast<std::size_t>(max_label) + 1;
  return data;
}

void write_idx(const Dataset& data, std::size_t rows, std::size_t cols,
               const std::filesystem::path& images, const std::filesystem::path& labels) {
  if (rows * cols != data.dim) throw DimensionMismatch("write_idx: rows * cols != dim");
  std::ofstream img(images, std::ios::binary);
  std::ofstream lab(labels, std::ios::binary);
  if (!img || !lab) throw IoError("cannot open IDX output files");
  write_be32(img, kIdxImagesMagic);
  write_be32(img, static_cast<std::uint32_t>(data.size()));
  write_be32(img, static_cast<std::uint32_t>(rows));
  write_be32(img, static_cast<std::uint32_t>(cols));
  for (double x : data.features) {
    img.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0))));
  }
  write_be32(lab, kIdxLabelsMagic);
  write_be32(lab, static_cast<std::uint32_t>(data.size()));
  for (std::uint32_t y : data.labels) lab.put(static_cast<char>(y));
  if (!img || !lab) throw IoError("failed writing IDX output files");
}

Dataset subsample(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidParameter("subsample fraction must lie in (0, 1]");
  }
  const std::size_t n = data.size();
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (k == 0) throw InvalidParameter("subsample would be empty");

  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  RngStream rng(seed, 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(n - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());

  Dataset out{data.dim, data.classes, {}, {}};
  out.features.reserve(k * data.dim);
  out.labels.reserve(k);
  for (std::size_t idx : pool) {
    const auto row = data.row(idx);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(data.labels[idx]);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_record(const RunRecord& r) {
  std::ostringstream os;
  os << format_double(r.alpha) << ',' << format_double(r.sigma1) << ',' << r.d << ',' << r.width
     << ',' << r.n << ',' << r.seed << ',' << format_double(r.gap) << ','
     << format_double(r.i_hat) << ',' << format_double(r.g_hat) << ','
     << (r.diverged ? "true" : "false");
  return os.str();
}

void write_records(std::ostream& out, std::span<const RunRecord> records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

void write_records(const std::filesystem::path& path, std::span<const RunRecord> records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_records(out, records);
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, "invalid number '" + std::string(field) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view field, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, "invalid integer '" + std::string(field) + "'");
  }
  return v;
}

bool parse_bool(std::string_view field, std::size_t line) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw ParseError(line, "expected true or false, got '" + std::string(field) + "'");
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<RunRecord> read_records(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) {
    throw ParseError(1, "header mismatch: expected '" + std::string(kRecordHeader) + "'");
  }
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 10) {
      throw ParseError(line_no, "expected 10 fields, got " + std::to_string(f.size()));
    }
    RunRecord r;
    r.alpha = parse_double(f[0], line_no);
    r.sigma1 = parse_double(f[1], line_no);
    r.d = parse_unsigned(f[2], line_no);
    r.width = parse_unsigned(f[3], line_no);
    r.n = parse_unsigned(f[4], line_no);
    r.seed = parse_unsigned(f[5], line_no);
    r.gap = parse_double(f[6], line_no);
    r.i_hat = parse_double(f[7], line_no);
    r.g_hat = parse_double(f[8], line_no);
    r.diverged = parse_bool(f[9], line_no);
    records.push_back(r);
  }
  return records;
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_records(in);
}

}  // namespace levybound
