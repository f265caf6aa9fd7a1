#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "levybound/rng.hpp"

namespace levybound {

enum class ArchKind { Linear, FCN };

/// Bias-free classifier: widths = (input dim, hidden widths..., class count).
/// ReLU on hidden layers, raw logits on the last one. Layer l holds a
/// (widths[l+1] x widths[l]) row-major weight matrix.
class ModelSpec {
 public:
  /// Throws InvalidParameter for fewer than two widths or any zero width.
  explicit ModelSpec(std::vector<std::size_t> widths);

  static ModelSpec linear(std::size_t input_dim, std::size_t classes);
  static ModelSpec fcn(std::size_t input_dim, std::size_t hidden, std::size_t classes);

  ArchKind kind() const noexcept {
    return widths_.size() == 2 ? ArchKind::Linear : ArchKind::FCN;
  }
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::size_t layer_count() const noexcept { return widths_.size() - 1; }
  std::size_t input_dim() const noexcept { return widths_.front(); }
  std::size_t classes() const noexcept { return widths_.back(); }
  std::size_t param_count() const noexcept { return offsets_.back(); }
  /// Offset of layer l's weight block inside the flat parameter vector.
  std::size_t layer_offset(std::size_t l) const noexcept { return offsets_[l]; }
  std::size_t max_width() const noexcept;

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
};

using ParamVector = std::vector<double>;

/// n x dim feature matrix (row-major) with integer labels in [0, classes).
struct Dataset {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<double> features;
  std::vector<std::uint32_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const noexcept {
    return {features.data() + i * dim, dim};
  }
  /// Throws InvalidParameter on shape mismatch or out-of-range labels.
  void validate() const;
};

std::size_t param_count(const ModelSpec& spec);

/// i.i.d. N(0, (scale / sqrt(fan_in))^2) entries per layer.
ParamVector init_params(const ModelSpec& spec, double scale, RngStream& rng);

struct LossAndGrad {
  double loss = 0.0;
  ParamVector grad;
};

/// Mean cross-entropy over the given rows and its exact gradient.
/// Throws InvalidParameter for empty or out-of-range indices and for non-finite params.
LossAndGrad surrogate_loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                                    const Dataset& data, std::span<const std::size_t> indices);

/// Same over every row of `data`.
LossAndGrad surrogate_loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                                    const Dataset& data);

/// Fraction of rows whose argmax logit (lowest index on ties) is not the label.
double zero_one_error(const ModelSpec& spec, std::span<const double> params, const Dataset& data);

/// Softmax of the model output for one input row.
std::vector<double> predict_proba(const ModelSpec& spec, std::span<const double> params,
                                  std::span<const double> input);

}  // namespace levybound
