#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "permstat/rng.hpp"

namespace permstat {

inline constexpr std::size_t kDefaultEnumerationCap = 10;

// A bijection on {1..n}.
//
// The public API is 1-based, matching the usual [N] = {1..N} convention:
// operator() takes and returns values in 1..n. Storage is 0-based and is
// exposed through zero_based() for hot loops.
class Permutation {
 public:
  // Validates that `one_based` is a permutation of 1..n.
  explicit Permutation(std::span<const std::size_t> one_based);
  Permutation(std::initializer_list<std::size_t> one_based);

  static Permutation identity(std::size_t n);
  static Permutation from_zero_based(std::vector<std::uint32_t> map);

  [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }
  [[nodiscard]] std::size_t operator()(std::size_t i) const { return map_.at(i - 1) + std::size_t{1}; }
  [[nodiscard]] std::span<const std::uint32_t> zero_based() const noexcept { return map_; }
  [[nodiscard]] std::vector<std::size_t> one_based() const;

  [[nodiscard]] Permutation inverse() const;
  // (this ∘ other)(i) = this(other(i)).
  [[nodiscard]] Permutation compose(const Permutation& other) const;
  // this ∘ (i j) for 1-based i, j: swaps the images of i and j.
  [[nodiscard]] Permutation transposed(std::size_t i, std::size_t j) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  friend class PermutationEnumerator;
  Permutation() = default;
  std::vector<std::uint32_t> map_;
};

// Uniform permutation by Fisher-Yates with unbiased bounded draws.
Permutation random_permutation(std::size_t n, Rng& rng);
Permutation random_permutation(std::size_t n, RngState state);

// In-place variant used by Monte Carlo loops: reshuffles `map` (any
// arrangement of 0..n-1) into a uniform permutation.
void shuffle_in_place(std::span<std::uint32_t> map, Rng& rng);

// Lexicographic enumeration of S_n. Refuses n > cap.
class PermutationEnumerator {
 public:
  explicit PermutationEnumerator(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

  // Current permutation; valid until the next call to advance().
  [[nodiscard]] const Permutation& current() const noexcept { return current_; }
  // Steps to the next permutation; false once all n! have been visited.
  bool advance();

 private:
  Permutation current_;
  std::vector<std::uint32_t> work_;
};

std::vector<Permutation> enumerate_permutations(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

// Calls fn(const Permutation&) for every element of S_n, lexicographically.
void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& fn,
                          std::size_t cap = kDefaultEnumerationCap);

// Indicator 1(pi(i) <= n) of a simple random sample of size n from N units.
struct SampleMask {
  std::size_t n_total = 0;
  std::size_t n_sample = 0;
  std::vector<std::uint8_t> indicator;

  static SampleMask from_permutation(const Permutation& pi, std::size_t n);
  // Builds a mask from 1-based selected unit labels.
  static SampleMask from_selected(std::size_t n_total, std::span<const std::size_t> selected_one_based);

  [[nodiscard]] bool selected(std::size_t i_one_based) const { return indicator.at(i_one_based - 1) != 0; }
};

SampleMask sample_without_replacement(std::size_t n_total, std::size_t n, Rng& rng);
SampleMask sample_without_replacement(std::size_t n_total, std::size_t n, RngState state);

// Calls fn(indices) for each n-subset of {0..N-1} (0-based, increasing), in
// lexicographic order.
void for_each_subset(std::size_t n_total, std::size_t n,
                     const std::function<void(std::span<const std::size_t>)>& fn);

double binomial_coefficient(std::size_t n, std::size_t k);

struct CoupledPermutation {
  Permutation pi_prime;
  std::size_t i = 0;  // 1-based
  std::size_t j = 0;  // 1-based
};

// pi' = pi ∘ (I J) with I, J independent and uniform on [N]; I = J is allowed.
CoupledPermutation transposition_couple(const Permutation& pi, Rng& rng);

}  // namespace permstat
