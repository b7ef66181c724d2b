#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "permstat/comb_moments.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

enum class RankStatKind { Footrule, SpearmanRho, KendallTau, ChatterjeeXi, WilcoxonRankSum, MannWhitneyU };

// A rank statistic together with its group sizes (used by the two-sample
// kinds only: Wilcoxon needs m, Mann-Whitney needs m and n with m + n = N).
struct RankStat {
  RankStatKind kind = RankStatKind::Footrule;
  std::size_t m = 0;
  std::size_t n = 0;

  static RankStat footrule() { return {RankStatKind::Footrule}; }
  static RankStat spearman_rho() { return {RankStatKind::SpearmanRho}; }
  static RankStat kendall_tau() { return {RankStatKind::KendallTau}; }
  static RankStat chatterjee_xi() { return {RankStatKind::ChatterjeeXi}; }
  static RankStat wilcoxon(std::size_t m) { return {RankStatKind::WilcoxonRankSum, m}; }
  static RankStat mann_whitney(std::size_t m, std::size_t n) { return {RankStatKind::MannWhitneyU, m, n}; }

  // "footrule", "spearman_rho", "kendall_tau", "chatterjee_xi", "wilcoxon",
  // "mann_whitney". Group sizes are passed separately.
  static RankStat parse(std::string_view id, std::size_t m = 0, std::size_t n = 0);
  [[nodiscard]] std::string id() const;
};

// Value of the statistic for permutations pi and sigma of equal size:
//   Footrule      sum |pi(i) - sigma(i)|
//   SpearmanRho   sum (pi(i) - sigma(i))^2
//   KendallTau    sum over ordered pairs i != j of
//                 sign(pi(i) - pi(j)) * sign(sigma(i) - sigma(j))
//   ChatterjeeXi  sum_{i<N} |pi([i+1]) - pi([i])| where sigma([1]) < ... < sigma([N])
//   Wilcoxon      sum_{i<=m} pi(i)                 (sigma unused)
//   MannWhitney   sum_{i<=m, j<=n} 1(pi(i) < pi(m+j)) (sigma unused)
double rank_statistic(const RankStat& stat, const Permutation& pi, const Permutation& sigma);

struct RankMoments {
  double mean = 0.0;
  double variance = 0.0;
  bool variance_exact = true;
  double variance_se = 0.0;  // Monte Carlo standard error when not exact
};

struct RankMomentOptions {
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t mc_draws = 200000;
  RngState rng{0x5eed, 0};
  unsigned threads = 1;
};

// Exact moments under a uniform pi (independent of sigma). Chatterjee's xi
// variance is enumerated for N <= cap and estimated by Monte Carlo above.
RankMoments rank_moments(const RankStat& stat, std::size_t n_total, const RankMomentOptions& options = {});

}  // namespace permstat
