#pragma once

#include <cstdint>
#include <random>

namespace fracsense {

struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for trial `trial` at sparsity `sparsity` of a sweep seeded by `master`.
/// Defined as splitmix64(splitmix64(splitmix64(master) ^ sparsity) ^ trial).
/// Method-independent, so every method sees the same instance.
RngSeed derive_trial_seed(RngSeed master, std::uint64_t sparsity, std::uint64_t trial) noexcept;

/// Portable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// conversions below are spelled out here instead:
///  - uniform01: top 53 bits of one engine draw, scaled by 2^-53, in [0, 1).
///  - normal: Marsaglia polar method, caching the second deviate.
///  - uniform_index: rejection sampling on the largest multiple of n below 2^64.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  double uniform01();
  double normal();
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fracsense
