#include "permstat/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <string>

#include "permstat/error.hpp"

namespace permstat {

namespace {

std::vector<std::uint32_t> validated_zero_based(std::span<const std::size_t> one_based) {
  const std::size_t n = one_based.size();
  if (n == 0) throw InvalidSize("permutation must have at least one element");
  std::vector<std::uint32_t> map(n);
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t v = one_based[k];
    if (v < 1 || v > n || seen[v - 1]) {
      throw InvalidArgument("not a permutation of 1.." + std::to_string(n));
    }
    seen[v - 1] = true;
    map[k] = static_cast<std::uint32_t>(v - 1);
  }
  return map;
}

}  // namespace

Permutation::Permutation(std::span<const std::size_t> one_based) : map_(validated_zero_based(one_based)) {}

Permutation::Permutation(std::initializer_list<std::size_t> one_based)
    : map_(validated_zero_based(std::span<const std::size_t>(one_based.begin(), one_based.size()))) {}

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) throw InvalidSize("permutation size must be positive");
  Permutation p;
  p.map_.resize(n);
  std::iota(p.map_.begin(), p.map_.end(), 0U);
  return p;
}

Permutation Permutation::from_zero_based(std::vector<std::uint32_t> map) {
  std::vector<std::size_t> one(map.size());
  std::transform(map.begin(), map.end(), one.begin(), [](std::uint32_t v) { return std::size_t{v} + 1; });
  return Permutation(std::span<const std::size_t>(one));
}

std::vector<std::size_t> Permutation::one_based() const {
  std::vector<std::size_t> out(map_.size());
  std::transform(map_.begin(), map_.end(), out.begin(), [](std::uint32_t v) { return std::size_t{v} + 1; });
  return out;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.map_.resize(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) p.map_[map_[i]] = static_cast<std::uint32_t>(i);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw InvalidArgument("cannot compose permutations of different sizes");
  Permutation p;
  p.map_.resize(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) p.map_[i] = map_[other.map_[i]];
  return p;
}

Permutation Permutation::transposed(std::size_t i, std::size_t j) const {
  if (i < 1 || j < 1 || i > size() || j > size()) throw InvalidArgument("transposition index out of range");
  Permutation p = *this;
  std::swap(p.map_[i - 1], p.map_[j - 1]);
  return p;
}

void shuffle_in_place(std::span<std::uint32_t> map, Rng& rng) {
  for (std::size_t k = map.size(); k > 1; --k) {
    const auto r = static_cast<std::size_t>(rng.bounded(k));
    std::swap(map[k - 1], map[r]);
  }
}

Permutation random_permutation(std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidSize("random_permutation: n must be positive");
  std::vector<std::uint32_t> map(n);
  std::iota(map.begin(), map.end(), 0U);
  shuffle_in_place(map, rng);
  return Permutation::from_zero_based(std::move(map));
}

Permutation random_permutation(std::size_t n, RngState state) {
  Rng rng(state);
  return random_permutation(n, rng);
}

PermutationEnumerator::PermutationEnumerator(std::size_t n, std::size_t cap)
    : current_([&] {
        if (n > cap) {
          throw CapExceeded("enumeration of S_" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
        }
        return Permutation::identity(n);
      }()) {
  work_.assign(current_.zero_based().begin(), current_.zero_based().end());
}

bool PermutationEnumerator::advance() {
  if (!std::next_permutation(work_.begin(), work_.end())) return false;
  current_.map_ = work_;
  return true;
}

std::vector<Permutation> enumerate_permutations(std::size_t n, std::size_t cap) {
  std::vector<Permutation> out;
  for_each_permutation(n, [&](const Permutation& p) { out.push_back(p); }, cap);
  return out;
}

void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& fn, std::size_t cap) {
  PermutationEnumerator e(n, cap);
  do {
    fn(e.current());
  } while (e.advance());
}

SampleMask SampleMask::from_permutation(const Permutation& pi, std::size_t n) {
  if (n < 1 || n > pi.size()) throw InvalidSize("sample size must satisfy 1 <= n <= N");
  SampleMask m{pi.size(), n, std::vector<std::uint8_t>(pi.size(), 0)};
  const auto z = pi.zero_based();
  for (std::size_t i = 0; i < z.size(); ++i) m.indicator[i] = z[i] < n ? 1 : 0;
  return m;
}

SampleMask SampleMask::from_selected(std::size_t n_total, std::span<const std::size_t> selected_one_based) {
  SampleMask m{n_total, 0, std::vector<std::uint8_t>(n_total, 0)};
  for (std::size_t s : selected_one_based) {
    if (s < 1 || s > n_total || m.indicator[s - 1]) throw InvalidArgument("invalid or duplicate sample label");
    m.indicator[s - 1] = 1;
    ++m.n_sample;
  }
  if (m.n_sample == 0) throw InvalidSize("sample must be non-empty");
  return m;
}

SampleMask sample_without_replacement(std::size_t n_total, std::size_t n, Rng& rng) {
  if (n_total == 0) throw InvalidSize("population size must be positive");
  if (n < 1 || n > n_total) throw InvalidArgument("sample size must satisfy 1 <= n <= N");
  return SampleMask::from_permutation(random_permutation(n_total, rng), n);
}

SampleMask sample_without_replacement(std::size_t n_total, std::size_t n, RngState state) {
  Rng rng(state);
  return sample_without_replacement(n_total, n, rng);
}

void for_each_subset(std::size_t n_total, std::size_t n,
                     const std::function<void(std::span<const std::size_t>)>& fn) {
  if (n > n_total) throw InvalidArgument("subset size exceeds population size");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    fn(idx);
    // Find rightmost index that can still move right.
    std::size_t k = n;
    while (k > 0 && idx[k - 1] == n_total - n + (k - 1)) --k;
    if (k == 0) return;
    ++idx[k - 1];
    for (std::size_t r = k; r < n; ++r) idx[r] = idx[r - 1] + 1;
  }
}

double binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

CoupledPermutation transposition_couple(const Permutation& pi, Rng& rng) {
  const std::size_t n = pi.size();
  const std::size_t i = static_cast<std::size_t>(rng.bounded(n)) + 1;
  const std::size_t j = static_cast<std::size_t>(rng.bounded(n)) + 1;
  return CoupledPermutation{pi.transposed(i, j), i, j};
}

}  // namespace permstat
