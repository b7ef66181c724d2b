#include "permstat/rank_stats.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "permstat/error.hpp"
#include "permstat/monte_carlo.hpp"

namespace permstat {

namespace {

int sign(long v) { return (v > 0) - (v < 0); }

void check_groups(const RankStat& stat, std::size_t n_total) {
  if (stat.kind == RankStatKind::WilcoxonRankSum && (stat.m < 1 || stat.m > n_total)) {
    throw InvalidArgument("wilcoxon needs 1 <= m <= N");
  }
  if (stat.kind == RankStatKind::MannWhitneyU && (stat.m < 1 || stat.n < 1 || stat.m + stat.n != n_total)) {
    throw InvalidArgument("mann_whitney needs m, n >= 1 with m + n = N");
  }
}

double xi_zero_based(std::span<const std::uint32_t> pi, std::span<const std::uint32_t> order) {
  // order[k] is the (0-based) index [k+1].
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    s += std::abs(static_cast<double>(pi[order[k + 1]]) - static_cast<double>(pi[order[k]]));
  }
  return s;
}

}  // namespace

RankStat RankStat::parse(std::string_view id, std::size_t m, std::size_t n) {
  if (id == "footrule") return footrule();
  if (id == "spearman_rho") return spearman_rho();
  if (id == "kendall_tau") return kendall_tau();
  if (id == "chatterjee_xi") return chatterjee_xi();
  if (id == "wilcoxon") return wilcoxon(m);
  if (id == "mann_whitney") return mann_whitney(m, n);
  throw InvalidArgument("unknown rank statistic '" + std::string(id) + "'");
}

std::string RankStat::id() const {
  switch (kind) {
    case RankStatKind::Footrule: return "footrule";
    case RankStatKind::SpearmanRho: return "spearman_rho";
    case RankStatKind::KendallTau: return "kendall_tau";
    case RankStatKind::ChatterjeeXi: return "chatterjee_xi";
    case RankStatKind::WilcoxonRankSum: return "wilcoxon";
    case RankStatKind::MannWhitneyU: return "mann_whitney";
  }
  return "unknown";
}

double rank_statistic(const RankStat& stat, const Permutation& pi, const Permutation& sigma) {
  if (pi.size() != sigma.size()) throw InvalidArgument("rank statistic: permutation sizes differ");
  const std::size_t n = pi.size();
  check_groups(stat, n);
  const auto p = pi.zero_based();
  const auto s = sigma.zero_based();
  switch (stat.kind) {
    case RankStatKind::Footrule: {
      long total = 0;
      for (std::size_t i = 0; i < n; ++i) total += std::labs(long(p[i]) - long(s[i]));
      return static_cast<double>(total);
    }
    case RankStatKind::SpearmanRho: {
      long total = 0;
      for (std::size_t i = 0; i < n; ++i) total += (long(p[i]) - long(s[i])) * (long(p[i]) - long(s[i]));
      return static_cast<double>(total);
    }
    case RankStatKind::KendallTau: {
      long total = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) total += sign(long(p[i]) - long(p[j])) * sign(long(s[i]) - long(s[j]));
      return static_cast<double>(total);
    }
    case RankStatKind::ChatterjeeXi:
      return xi_zero_based(p, sigma.inverse().zero_based());
    case RankStatKind::WilcoxonRankSum: {
      long total = 0;
      for (std::size_t i = 0; i < stat.m; ++i) total += long(p[i]) + 1;
      return static_cast<double>(total);
    }
    case RankStatKind::MannWhitneyU: {
      long total = 0;
      for (std::size_t i = 0; i < stat.m; ++i)
        for (std::size_t j = 0; j < stat.n; ++j) total += p[i] < p[stat.m + j] ? 1 : 0;
      return static_cast<double>(total);
    }
  }
  return 0.0;
}

RankMoments rank_moments(const RankStat& stat, std::size_t n_total, const RankMomentOptions& options) {
  if (n_total < 2) throw InvalidSize("rank moments need N >= 2");
  check_groups(stat, n_total);
  const auto nn = static_cast<double>(n_total);
  RankMoments out;
  switch (stat.kind) {
    case RankStatKind::Footrule: {
      const PermMatrix m(footrule_matrix(n_total));
      out.mean = m.mu();
      out.variance = m.sigma2();
      return out;
    }
    case RankStatKind::SpearmanRho: {
      const PermMatrix m(squared_distance_matrix(n_total));
      out.mean = m.mu();
      out.variance = m.sigma2();
      return out;
    }
    case RankStatKind::KendallTau:
      // Ordered pairs: twice the classical unordered statistic, whose null
      // variance is N(N-1)(2N+5)/18.
      out.mean = 0.0;
      out.variance = 2.0 * nn * (nn - 1.0) * (2.0 * nn + 5.0) / 9.0;
      return out;
    case RankStatKind::WilcoxonRankSum:
    case RankStatKind::MannWhitneyU: {
      std::vector<double> ranks(n_total);
      std::iota(ranks.begin(), ranks.end(), 1.0);
      const auto s = survey_mean_moments(ranks, stat.m);
      const auto m = static_cast<double>(stat.m);
      out.variance = m * m * s.variance;
      out.mean = stat.kind == RankStatKind::WilcoxonRankSum ? m * s.mean : m * static_cast<double>(stat.n) / 2.0;
      return out;
    }
    case RankStatKind::ChatterjeeXi: {
      if (n_total < 3) throw InvalidSize("chatterjee_xi moments need N >= 3");
      // Each of the N-1 adjacent pairs is a uniform ordered pair of distinct
      // labels, so the mean is (N-1)/(N(N-1)) times the off-diagonal sum.
      const Matrix a = footrule_matrix(n_total);
      double off_diag = 0.0;
      for (std::size_t i = 0; i < n_total; ++i)
        for (std::size_t j = 0; j < n_total; ++j)
          if (i != j) off_diag += a(i, j);
      out.mean = off_diag / nn;

      std::vector<std::uint32_t> order(n_total);
      std::iota(order.begin(), order.end(), 0U);
      if (n_total <= options.enumeration_cap) {
        double sum = 0.0;
        double sum_sq = 0.0;
        double count = 0.0;
        PermutationEnumerator e(n_total, options.enumeration_cap);
        do {
          const double x = xi_zero_based(e.current().zero_based(), order) - out.mean;
          sum += x;
          sum_sq += x * x;
          count += 1.0;
        } while (e.advance());
        out.variance = sum_sq / count - (sum / count) * (sum / count);
        return out;
      }
      McConfig cfg{options.mc_draws, options.rng, options.threads};
      const auto values = mc_collect<double>(cfg, [&](Rng& rng) {
        std::vector<std::uint32_t> map(order);
        shuffle_in_place(map, rng);
        const double x = xi_zero_based(map, order) - out.mean;
        return x * x;
      });
      const auto est = mean_and_se(values);
      out.variance = est.mean;
      out.variance_se = est.se;
      out.variance_exact = false;
      return out;
    }
  }
  return out;
}

}  // namespace permstat
