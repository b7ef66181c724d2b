#pragma once

#include <cstdint>
#include <vector>

#include "permstat/report.hpp"

namespace permstat {

struct AcceptanceConfig {
  std::uint64_t seed = 7;
  std::size_t reps = 100000;  // Monte Carlo size for criteria 4 to 7
  unsigned threads = 1;
};

// Echoed into reports. The thread count is left out on purpose: output must
// not depend on it.
Json acceptance_config_json(const AcceptanceConfig& cfg);

CheckRecord criterion_exact_moments(const AcceptanceConfig& cfg);
CheckRecord criterion_rank_moments(const AcceptanceConfig& cfg);
CheckRecord criterion_stein_linearity(const AcceptanceConfig& cfg);
CheckRecord criterion_tail_domination(const AcceptanceConfig& cfg);
CheckRecord criterion_clt_rate(const AcceptanceConfig& cfg);
CheckRecord criterion_donsker(const AcceptanceConfig& cfg);
CheckRecord criterion_rosen(const AcceptanceConfig& cfg);
CheckRecord criterion_convex_order(const AcceptanceConfig& cfg);
CheckRecord criterion_perm_test(const AcceptanceConfig& cfg);
CheckRecord criterion_series_reg(const AcceptanceConfig& cfg);

// Criteria 1 to 10 in order.
std::vector<CheckRecord> run_criteria(const AcceptanceConfig& cfg);

// Re-runs criteria 1 to 10 with one and four worker threads and compares the
// serialized reports with `reference` byte for byte.
CheckRecord criterion_reproducibility(const AcceptanceConfig& cfg, const std::string& reference);

// Full suite, criteria 1 to 11.
Report verify_all(const AcceptanceConfig& cfg);

}  // namespace permstat
