#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "permstat/rng.hpp"

namespace permstat {

// Draws per chunk. Chunk c always uses RngState::substream(c), so the
// sequence of values is a function of (state, draws) only.
inline constexpr std::size_t kMonteCarloChunk = 2048;

struct McConfig {
  std::size_t draws = 100000;
  RngState rng{};
  unsigned threads = 1;  // 0 = hardware concurrency
};

unsigned resolve_threads(unsigned requested) noexcept;

// Runs fn(Rng&) -> T `cfg.draws` times and returns the results in draw order.
// Results are identical for every thread count.
template <class T, class Fn>
std::vector<T> mc_collect(const McConfig& cfg, Fn fn) {
  std::vector<T> out(cfg.draws);
  const std::size_t chunks = (cfg.draws + kMonteCarloChunk - 1) / kMonteCarloChunk;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_threads(cfg.threads), std::max<std::size_t>(chunks, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        Rng rng(cfg.rng.substream(c));
        const std::size_t begin = c * kMonteCarloChunk;
        const std::size_t end = std::min(cfg.draws, begin + kMonteCarloChunk);
        for (std::size_t k = begin; k < end; ++k) out[k] = fn(rng);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Mean and standard error of a sample.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& values);

}  // namespace permstat
