#include "permstat/monte_carlo.hpp"

#include <cmath>

namespace permstat {

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe r;
  if (values.empty()) return r;
  const auto b = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / b;
  if (values.size() < 2) return r;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.se = std::sqrt(ss / (b - 1.0) / b);
  return r;
}

}  // namespace permstat
