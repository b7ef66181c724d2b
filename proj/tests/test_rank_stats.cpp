#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "permstat/error.hpp"
#include "permstat/rank_stats.hpp"

using namespace permstat;

namespace {

std::vector<RankStat> kinds_for(std::size_t n) {
  return {RankStat::footrule(),     RankStat::spearman_rho(), RankStat::kendall_tau(),
          RankStat::chatterjee_xi(), RankStat::wilcoxon(n / 2), RankStat::mann_whitney(n / 2, n - n / 2)};
}

}  // namespace

TEST_CASE("rank_statistic values") {
  const auto id3 = Permutation::identity(3);
  CHECK(rank_statistic(RankStat::footrule(), Permutation({1, 3, 2}), id3) == 2.0);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto p = random_permutation(n, RngState{n, 0});
    CHECK(rank_statistic(RankStat::kendall_tau(), p, p) == double(n * (n - 1)));
  }
  // Mann-Whitney with m = n = 1.
  const auto mw = RankStat::mann_whitney(1, 1);
  CHECK(rank_statistic(mw, Permutation({1, 2}), Permutation::identity(2)) == 1.0);
  CHECK(rank_statistic(mw, Permutation({2, 1}), Permutation::identity(2)) == 0.0);
  CHECK(rank_moments(mw, 2).mean == doctest::Approx(0.5));

  CHECK_THROWS_AS(rank_statistic(RankStat::footrule(), id3, Permutation::identity(4)), InvalidArgument);
  CHECK_THROWS_AS(rank_statistic(RankStat::mann_whitney(1, 1), id3, id3), InvalidArgument);
  CHECK_THROWS_AS(RankStat::parse("nope"), InvalidArgument);
  CHECK(RankStat::parse("kendall_tau").kind == RankStatKind::KendallTau);
}

TEST_CASE("chatterjee xi follows sigma's ordering") {
  // sigma orders indices as [1]=2, [2]=3, [3]=1.
  const Permutation sigma({3, 1, 2});
  const Permutation pi({1, 3, 2});
  // pi([1..3]) = pi(2), pi(3), pi(1) = 3, 2, 1 -> |2-3| + |1-2| = 2.
  CHECK(rank_statistic(RankStat::chatterjee_xi(), pi, sigma) == 2.0);
}

TEST_CASE("rank_moments match enumeration for N <= 7") {
  for (std::size_t n = 3; n <= 7; ++n) {
    const auto sigma = random_permutation(n, RngState{100 + n, 0});
    for (const auto& stat : kinds_for(n)) {
      std::vector<double> vals;
      for_each_permutation(n, [&](const Permutation& p) { vals.push_back(rank_statistic(stat, p, sigma)); });
      const auto ref = oracle::moments(vals);
      const auto got = rank_moments(stat, n);
      INFO(stat.id(), " N=", n);
      CHECK(got.variance_exact);
      CHECK(oracle::close_rel(got.mean, ref.mean, 1e-10));
      CHECK(oracle::close_rel(got.variance, ref.var, 1e-10));
    }
  }
}

TEST_CASE("footrule and xi share the mean (N^2 - 1)/3") {
  for (std::size_t n = 3; n <= 8; ++n) {
    const double expected = (double(n * n) - 1.0) / 3.0;
    CHECK(rank_moments(RankStat::footrule(), n).mean == doctest::Approx(expected).epsilon(1e-14));
    CHECK(rank_moments(RankStat::chatterjee_xi(), n).mean == doctest::Approx(expected).epsilon(1e-14));
    std::vector<double> f, x;
    const auto id = Permutation::identity(n);
    for_each_permutation(n, [&](const Permutation& p) {
      f.push_back(rank_statistic(RankStat::footrule(), p, id));
      x.push_back(rank_statistic(RankStat::chatterjee_xi(), p, id));
    });
    CHECK(oracle::moments(f).mean == doctest::Approx(expected));
    CHECK(oracle::moments(x).mean == doctest::Approx(expected));
  }
  CHECK(rank_moments(RankStat::footrule(), 3).mean == doctest::Approx(8.0 / 3));
}

TEST_CASE("wilcoxon mean m(N+1)/2") {
  CHECK(rank_moments(RankStat::wilcoxon(2), 4).mean == 5.0);
  for (std::size_t n = 2; n <= 10; ++n)
    for (std::size_t m = 1; m <= n; ++m)
      CHECK(rank_moments(RankStat::wilcoxon(m), n).mean == doctest::Approx(double(m) * double(n + 1) / 2));
}

TEST_CASE("xi variance above the enumeration cap uses Monte Carlo") {
  RankMomentOptions opt;
  opt.enumeration_cap = 6;
  opt.mc_draws = 200000;
  const auto mc = rank_moments(RankStat::chatterjee_xi(), 7, opt);
  const auto exact = rank_moments(RankStat::chatterjee_xi(), 7);
  CHECK_FALSE(mc.variance_exact);
  CHECK(mc.variance_se > 0.0);
  CHECK(std::abs(mc.variance - exact.variance) <= 4 * mc.variance_se);
}

TEST_CASE("symmetry properties") {
  Rng rng(RngState{8, 8});
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.bounded(9);
    const auto pi = random_permutation(n, rng);
    const auto sigma = random_permutation(n, rng);
    const auto id = Permutation::identity(n);
    CHECK(rank_statistic(RankStat::kendall_tau(), pi, sigma) == rank_statistic(RankStat::kendall_tau(), sigma, pi));
    CHECK(rank_statistic(RankStat::footrule(), pi, sigma) ==
          rank_statistic(RankStat::footrule(), pi.compose(sigma.inverse()), id) );
    const std::size_t m = 1 + rng.bounded(n - 1);
    // Complement group via a relabeling that moves the last N - m positions first.
    std::vector<std::size_t> rotated;
    for (std::size_t i = m + 1; i <= n; ++i) rotated.push_back(pi(i));
    for (std::size_t i = 1; i <= m; ++i) rotated.push_back(pi(i));
    const double w = rank_statistic(RankStat::wilcoxon(m), pi, id);
    const double wc = rank_statistic(RankStat::wilcoxon(n - m), Permutation(rotated), id);
    CHECK(w + wc == double(n * (n + 1)) / 2.0);
  }
}
