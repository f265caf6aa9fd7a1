#pragma once

// Per-row forward/backward pass shared by the serial and parallel kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "levybound/model.hpp"

namespace levybound::kernels::detail {

class RowWorkspace {
 public:
  explicit RowWorkspace(const ModelSpec& spec) : spec_(spec) {
    // activations_[l] is the output of layer l (post-ReLU for hidden layers,
    // logits for the last one).
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
      activations_.emplace_back(spec.widths()[l + 1], 0.0);
    }
    delta_.resize(spec.max_width());
    delta_prev_.resize(spec.max_width());
  }

  std::span<const double> forward(std::span<const double> params, std::span<const double> input) {
    std::span<const double> in = input;
    const std::size_t layers = spec_.layer_count();
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t fan_in = spec_.widths()[l];
      const double* w = params.data() + spec_.layer_offset(l);
      std::vector<double>& out = activations_[l];
      const bool hidden = l + 1 < layers;
      for (std::size_t j = 0; j < out.size(); ++j) {
        const double* row = w + j * fan_in;
        double z = 0.0;
        for (std::size_t i = 0; i < fan_in; ++i) z += row[i] * in[i];
        out[j] = hidden ? std::max(z, 0.0) : z;
      }
      in = out;
    }
    return activations_.back();
  }

  /// Runs forward + backward for one labelled row. Calls add(index, value)
  /// for every gradient component of this row's loss; returns the row loss.
  template <class Add>
  double loss_and_backward(std::span<const double> params, std::span<const double> input,
                           std::size_t label, Add&& add) {
    const std::span<const double> logits = forward(params, input);
    const std::size_t classes = logits.size();

    const double peak = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t k = 0; k < classes; ++k) {
      delta_[k] = std::exp(logits[k] - peak);
      denom += delta_[k];
    }
    const double loss = peak + std::log(denom) - logits[label];
    for (std::size_t k = 0; k < classes; ++k) delta_[k] /= denom;
    delta_[label] -= 1.0;

    for (std::size_t l = spec_.layer_count(); l-- > 0;) {
      const std::size_t fan_in = spec_.widths()[l];
      const std::size_t fan_out = spec_.widths()[l + 1];
      const std::span<const double> in =
          l == 0 ? input : std::span<const double>(activations_[l - 1]);
      const std::size_t offset = spec_.layer_offset(l);
      for (std::size_t j = 0; j < fan_out; ++j) {
        const double dj = delta_[j];
        for (std::size_t i = 0; i < fan_in; ++i) add(offset + j * fan_in + i, dj * in[i]);
      }
      if (l == 0) break;
      const double* w = params.data() + offset;
      for (std::size_t i = 0; i < fan_in; ++i) {
        double back = 0.0;
        if (in[i] > 0.0) {
          for (std::size_t j = 0; j < fan_out; ++j) back += w[j * fan_in + i] * delta_[j];
        }
        delta_prev_[i] = back;
      }
      std::swap(delta_, delta_prev_);
    }
    return loss;
  }

  /// argmax of the logits, lowest index on ties.
  std::size_t predict(std::span<const double> params, std::span<const double> input) {
    const std::span<const double> logits = forward(params, input);
    std::size_t best = 0;
    for (std::size_t k = 1; k < logits.size(); ++k) {
      if (logits[k] > logits[best]) best = k;
    }
    return best;
  }

 private:
  const ModelSpec& spec_;
  std::vector<std::vector<double>> activations_;
  std::vector<double> delta_;
  std::vector<double> delta_prev_;
};

}  // namespace levybound::kernels::detail
