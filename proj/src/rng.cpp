#include "permstat/rng.hpp"

#include <bit>

namespace permstat {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngState RngState::substream(std::uint64_t k) const noexcept {
  std::uint64_t h = stream ^ 0xD1B54A32D192ED03ULL;
  std::uint64_t a = splitmix64(h);
  std::uint64_t g = k + 0x2545F4914F6CDD1DULL;
  std::uint64_t b = splitmix64(g);
  return RngState{seed, a ^ std::rotl(b, 17)};
}

Rng::Rng(RngState state) noexcept {
  std::uint64_t sm = state.seed;
  const std::uint64_t seed_mix = splitmix64(sm);
  std::uint64_t st = state.stream ^ 0x6A09E667F3BCC909ULL;
  const std::uint64_t stream_mix = splitmix64(st);
  std::uint64_t init = seed_mix ^ std::rotl(stream_mix, 31);
  for (auto& word : s_) word = splitmix64(init);
  // xoshiro forbids the all-zero state.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::bounded(std::uint64_t bound) noexcept {
  // Lemire, "Fast random integer generation in an interval" (2019).
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform01() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace permstat
