#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace nsgev {

/// Counter-based 64-bit generator: draw k of stream (seed, stream) is a pure
/// function of (seed, stream, k), so replicate i of a simulation is identical
/// no matter which thread or in which order it runs.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  /// Uniform integer in [0, bound) by rejection (bound > 0).
  std::uint64_t below(std::uint64_t bound) noexcept;

  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derive a stream id from a list of integers (seed, replicate index, ...).
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts) noexcept;

/// Fisher-Yates shuffle of [0, n) driven by `rng`; platform independent.
std::vector<std::size_t> random_permutation(std::size_t n, CounterRng& rng);

}  // namespace nsgev
