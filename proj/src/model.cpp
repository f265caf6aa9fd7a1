#include "levybound/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kernels/row_ops.hpp"
#include "levybound/error.hpp"
#include "levybound/kernels.hpp"

namespace levybound {

ModelSpec::ModelSpec(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw InvalidParameter("model needs at least input and output widths");
  if (std::find(widths_.begin(), widths_.end(), 0) != widths_.end()) {
    throw InvalidParameter("model widths must be positive");
  }
  offsets_.push_back(0);
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(offsets_.back() + widths_[l] * widths_[l + 1]);
  }
}

ModelSpec ModelSpec::linear(std::size_t input_dim, std::size_t classes) {
  return ModelSpec({input_dim, classes});
}

ModelSpec ModelSpec::fcn(std::size_t input_dim, std::size_t hidden, std::size_t classes) {
  return ModelSpec({input_dim, hidden, classes});
}

std::size_t ModelSpec::max_width() const noexcept {
  return *std::max_element(widths_.begin(), widths_.end());
}

void Dataset::validate() const {
  if (dim == 0) throw InvalidParameter("dataset dimension must be positive");
  if (classes == 0) throw InvalidParameter("dataset class count must be positive");
  if (features.size() != labels.size() * dim) {
    throw InvalidParameter("dataset feature rows (" + std::to_string(features.size() / dim) +
                           ") do not match label count (" + std::to_string(labels.size()) + ")");
  }
  for (std::uint32_t y : labels) {
    if (y >= classes) {
      throw InvalidParameter("dataset label " + std::to_string(y) + " outside [0, " +
                             std::to_string(classes) + ")");
    }
  }
}

std::size_t param_count(const ModelSpec& spec) { return spec.param_count(); }

ParamVector init_params(const ModelSpec& spec, double scale, RngStream& rng) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("init scale must be finite and non-negative");
  }
  ParamVector params(spec.param_count(), 0.0);
  if (scale == 0.0) return params;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const double stddev = scale / std::sqrt(static_cast<double>(spec.widths()[l]));
    const std::size_t begin = spec.layer_offset(l);
    const std::size_t end = spec.layer_offset(l + 1);
    for (std::size_t k = begin; k < end; ++k) params[k] = stddev * rng.gaussian();
  }
  return params;
}

namespace {

void check_params(const ModelSpec& spec, std::span<const double> params) {
  if (params.size() != spec.param_count()) {
    throw DimensionMismatch("parameter vector has length " + std::to_string(params.size()) +
                            ", model expects " + std::to_string(spec.param_count()));
  }
  if (!std::all_of(params.begin(), params.end(), [](double x) { return std::isfinite(x); })) {
    throw InvalidParameter("parameter vector contains non-finite entries");
  }
}

void check_data(const ModelSpec& spec, const Dataset& data) {
  if (data.dim != spec.input_dim()) {
    throw DimensionMismatch("dataset dimension " + std::to_string(data.dim) +
                            " does not match model input " + std::to_string(spec.input_dim()));
  }
  if (data.classes > spec.classes()) {
    throw DimensionMismatch("dataset has more classes than the model outputs");
  }
}

}  // namespace

LossAndGrad surrogate_loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                                    const Dataset& data, std::span<const std::size_t> indices) {
  check_params(spec, params);
  check_data(spec, data);
  if (indices.empty()) throw InvalidParameter("loss requires a nonempty batch");
  for (std::size_t idx : indices) {
    if (idx >= data.size()) {
      throw InvalidParameter("batch index " + std::to_string(idx) + " out of range");
    }
  }
  return kernels::loss_and_grad(spec, params, data, indices);
}

LossAndGrad surrogate_loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                                    const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return surrogate_loss_and_grad(spec, params, data, all);
}

double zero_one_error(const ModelSpec& spec, std::span<const double> params, const Dataset& data) {
  check_params(spec, params);
  check_data(spec, data);
  if (data.size() == 0) return 0.0;
  return static_cast<double>(kernels::count_errors(spec, params, data)) /
         static_cast<double>(data.size());
}

std::vector<double> predict_proba(const ModelSpec& spec, std::span<const double> params,
                                  std::span<const double> input) {
  check_params(spec, params);
  if (input.size() != spec.input_dim()) throw DimensionMismatch("input has the wrong dimension");
  kernels::detail::RowWorkspace ws(spec);
  const auto logits = ws.forward(params, input);
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double denom = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::exp(logits[k] - peak);
    denom += p[k];
  }
  for (double& x : p) x /= denom;
  return p;
}

}  // namespace levybound
