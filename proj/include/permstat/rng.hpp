#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace permstat {

// Identifies a reproducible random stream. Two equal states produce the same
// draw sequence on every platform; distinct streams under one seed are
// statistically independent.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // Derives the k-th child stream. Used to split Monte Carlo work into
  // chunks whose draws do not depend on how chunks are scheduled.
  [[nodiscard]] RngState substream(std::uint64_t k) const noexcept;

  friend bool operator==(const RngState&, const RngState&) = default;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// xoshiro256** seeded through SplitMix64 from (seed, stream).
// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngState state) noexcept;
  Rng(std::uint64_t seed, std::uint64_t stream) noexcept : Rng(RngState{seed, stream}) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  // Uniform integer in [0, bound) by multiply-shift with rejection; exact,
  // no modulo bias. bound must be positive.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace permstat
