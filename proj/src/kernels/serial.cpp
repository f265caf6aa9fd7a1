#include <cmath>
#include <vector>

#include "levybound/error.hpp"
#include "levybound/kernels.hpp"
#include "levybound/summation.hpp"
#include "row_ops.hpp"

namespace levybound::kernels::serial {

SampleBatch sample_isotropic_batch(double alpha, std::size_t dim, std::size_t count,
                                   std::uint64_t seed) {
  SampleBatch batch{dim, std::vector<double>(dim * count)};
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, i);
    levybound::sample_isotropic_stable(alpha, batch.row(i), rng);
  }
  return batch;
}

CharFnEstimate char_fn(const SampleBatch& samples, std::span<const double> xi) {
  if (xi.size() != samples.dim) throw DimensionMismatch("char_fn: frequency dimension mismatch");
  const std::size_t n = samples.count();
  if (n == 0) throw InvalidParameter("char_fn: empty sample set");
  CompensatedSum cos_acc;
  CompensatedSum sin_acc;
  for (std::size_t s = 0; s < n; ++s) {
    const auto x = samples.row(s);
    double phase = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) phase += xi[k] * x[k];
    cos_acc.add(std::cos(phase));
    sin_acc.add(std::sin(phase));
  }
  const auto nn = static_cast<double>(n);
  return {cos_acc.value() / nn, sin_acc.value() / nn};
}

LossAndGrad loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                          const Dataset& data, std::span<const std::size_t> indices) {
  const std::size_t d = spec.param_count();
  std::vector<CompensatedSum> grad_acc(d);
  CompensatedSum loss_acc;
  detail::RowWorkspace ws(spec);
  auto add = [&grad_acc](std::size_t k, double v) { grad_acc[k].add(v); };
  for (std::size_t idx : indices) {
    loss_acc.add(ws.loss_and_backward(params, data.row(idx), data.labels[idx], add));
  }
  const auto n = static_cast<double>(indices.size());
  LossAndGrad out{loss_acc.value() / n, ParamVector(d)};
  for (std::size_t k = 0; k < d; ++k) out.grad[k] = grad_acc[k].value() / n;
  return out;
}

std::size_t count_errors(const ModelSpec& spec, std::span<const double> params,
                         const Dataset& data) {
  detail::RowWorkspace ws(spec);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (ws.predict(params, data.row(i)) != data.labels[i]) ++errors;
  }
  return errors;
}

}  // namespace levybound::kernels::serial
