#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "levybound/error.hpp"
#include "levybound/kernels.hpp"
#include "levybound/summation.hpp"
#include "row_ops.hpp"

namespace levybound::kernels {

namespace {

constexpr std::size_t kCharFnBlock = 8192;
constexpr std::size_t kMinRowsPerBlock = 64;
constexpr std::size_t kMaxGradBlocks = 32;

struct BlockRange {
  std::size_t begin;
  std::size_t end;
};

BlockRange block_range(std::size_t block, std::size_t blocks, std::size_t count) {
  return {block * count / blocks, (block + 1) * count / blocks};
}

}  // namespace

int thread_count() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int threads) noexcept {
#ifdef _OPENMP
  omp_set_num_threads(std::max(threads, 1));
#else
  (void)threads;
#endif
}

SampleBatch sample_isotropic_batch(double alpha, std::size_t dim, std::size_t count,
                                   std::uint64_t seed) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw InvalidParameter("isotropic stable alpha must lie in (1, 2]");
  }
  if (dim == 0) throw InvalidParameter("isotropic stable dimension must be >= 1");
  SampleBatch batch{dim, std::vector<double>(dim * count)};
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    RngStream rng(seed, row);
    sample_isotropic_stable(alpha, batch.row(row), rng);
  }
  return batch;
}

CharFnEstimate char_fn(const SampleBatch& samples, std::span<const double> xi) {
  if (xi.size() != samples.dim) throw DimensionMismatch("char_fn: frequency dimension mismatch");
  const std::size_t n = samples.count();
  if (n == 0) throw InvalidParameter("char_fn: empty sample set");

  const std::size_t blocks = (n + kCharFnBlock - 1) / kCharFnBlock;
  std::vector<CompensatedSum> cos_parts(blocks);
  std::vector<CompensatedSum> sin_parts(blocks);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const auto block = static_cast<std::size_t>(b);
    const std::size_t end = std::min(n, (block + 1) * kCharFnBlock);
    CompensatedSum c;
    CompensatedSum s;
    for (std::size_t r = block * kCharFnBlock; r < end; ++r) {
      const auto x = samples.row(r);
      double phase = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) phase += xi[k] * x[k];
      c.add(std::cos(phase));
      s.add(std::sin(phase));
    }
    cos_parts[block] = c;
    sin_parts[block] = s;
  }
  CompensatedSum cos_total;
  CompensatedSum sin_total;
  for (std::size_t b = 0; b < blocks; ++b) {
    cos_total.merge(cos_parts[b]);
    sin_total.merge(sin_parts[b]);
  }
  const auto nn = static_cast<double>(n);
  return {cos_total.value() / nn, sin_total.value() / nn};
}

LossAndGrad loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                          const Dataset& data, std::span<const std::size_t> indices) {
  const std::size_t d = spec.param_count();
  const std::size_t count = indices.size();
  const std::size_t blocks =
      std::clamp<std::size_t>((count + kMinRowsPerBlock - 1) / kMinRowsPerBlock, 1, kMaxGradBlocks);

  std::vector<std::vector<CompensatedSum>> grad_parts(blocks);
  std::vector<CompensatedSum> loss_parts(blocks);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const auto block = static_cast<std::size_t>(b);
    std::vector<CompensatedSum> acc(d);
    CompensatedSum loss;
    detail::RowWorkspace ws(spec);
    auto add = [&acc](std::size_t k, double v) { acc[k].add(v); };
    const BlockRange range = block_range(block, blocks, count);
    for (std::size_t r = range.begin; r < range.end; ++r) {
      const std::size_t idx = indices[r];
      loss.add(ws.loss_and_backward(params, data.row(idx), data.labels[idx], add));
    }
    grad_parts[block] = std::move(acc);
    loss_parts[block] = loss;
  }

  CompensatedSum loss_total;
  for (const auto& part : loss_parts) loss_total.merge(part);
  const auto n = static_cast<double>(count);
  LossAndGrad out{loss_total.value() / n, ParamVector(d)};
  const auto nd = static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < nd; ++k) {
    const auto comp = static_cast<std::size_t>(k);
    CompensatedSum total;
    for (const auto& part : grad_parts) total.merge(part[comp]);
    out.grad[comp] = total.value() / n;
  }
  return out;
}

std::size_t count_errors(const ModelSpec& spec, std::span<const double> params,
                         const Dataset& data) {
  const auto n = static_cast<std::int64_t>(data.size());
  std::int64_t errors = 0;
#pragma omp parallel reduction(+ : errors)
  {
    detail::RowWorkspace ws(spec);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      if (ws.predict(params, data.row(row)) != data.labels[row]) ++errors;
    }
  }
  return static_cast<std::size_t>(errors);
}

}  // namespace levybound::kernels
