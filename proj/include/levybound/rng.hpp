#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace levybound {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Folds a path of indices into a seed. Used to give every grid cell (and
/// every sample of a batched kernel) its own reproducible stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

/// Reproducible random stream identified by (seed, stream id).
///
/// The bit generator is xoshiro256** with its state filled from SplitMix64 of
/// the (seed, stream) pair, so distinct ids give statistically independent
/// streams. Satisfies UniformRandomBitGenerator. Not thread-safe: one stream
/// belongs to one caller.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() noexcept;

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double gaussian() noexcept;

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace levybound
