#pragma once

// Data-parallel hot loops. Every kernel comes in two flavours:
//
//   kernels::*          OpenMP version used by the library
//   kernels::serial::*  plain loop kept as the reference for tests and benches
//
// The parallel versions split work into blocks whose boundaries depend only
// on the problem size, never on the thread count, and merge block partials in
// block order. Their results are therefore identical for any number of threads.

#include <cstddef>
#include <cstdint>
#include <span>

#include "levybound/model.hpp"
#include "levybound/stable.hpp"

namespace levybound::kernels {

/// `count` isotropic alpha-stable vectors in R^dim; sample i is drawn from RngStream(seed, i).
SampleBatch sample_isotropic_batch(double alpha, std::size_t dim, std::size_t count,
                                   std::uint64_t seed);

CharFnEstimate char_fn(const SampleBatch& samples, std::span<const double> xi);

/// Mean cross-entropy and gradient over `indices` (validated by the caller).
LossAndGrad loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                          const Dataset& data, std::span<const std::size_t> indices);

/// Number of rows whose argmax prediction differs from the label.
std::size_t count_errors(const ModelSpec& spec, std::span<const double> params,
                         const Dataset& data);

int thread_count() noexcept;
void set_thread_count(int threads) noexcept;

namespace serial {

SampleBatch sample_isotropic_batch(double alpha, std::size_t dim, std::size_t count,
                                   std::uint64_t seed);
CharFnEstimate char_fn(const SampleBatch& samples, std::span<const double> xi);
LossAndGrad loss_and_grad(const ModelSpec& spec, std::span<const double> params,
                          const Dataset& data, std::span<const std::size_t> indices);
std::size_t count_errors(const ModelSpec& spec, std::span<const double> params,
                         const Dataset& data);

}  // namespace serial

}  // namespace levybound::kernels
