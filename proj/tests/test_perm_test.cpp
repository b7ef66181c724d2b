#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "permstat/error.hpp"
#include "permstat/perm_test.hpp"

using namespace permstat;

namespace {

const TwoSampleData kSmall({1, 2}, {3, 4});

std::vector<double> draws(std::size_t k, RngState s) {
  Rng rng(s);
  std::vector<double> out(k);
  for (double& v : out) v = std::round(rng.uniform01() * 1000) / 100;
  return out;
}

// p-value by enumerating all of S_N and taking units with pi(i) <= m as the first group.
double p_by_permutations(const TwoSampleData& d, const std::string& id, TestSide side) {
  const auto& stat = default_registry().get(id);
  const auto pooled = d.pooled();
  const double obs = stat.eval(d.x, d.y);
  const double c = stat.center(d.m(), d.n());
  double hits = 0.0, total = 0.0;
  oracle::each_perm(pooled.size(), [&](const std::vector<std::size_t>& p) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < pooled.size(); ++i) (p[i] < d.m() ? a : b).push_back(pooled[i]);
    const double t = stat.eval(a, b);
    const double tol = 1e-12 * std::max({1.0, std::abs(obs), std::abs(c)});
    bool hit = side == TestSide::Greater ? t >= obs - tol
               : side == TestSide::Less  ? t <= obs + tol
                                         : std::abs(t - c) >= std::abs(obs - c) - tol;
    hits += hit;
    total += 1.0;
  });
  return hits / total;
}

}  // namespace

TEST_CASE("built-in statistics") {
  const auto& reg = default_registry();
  CHECK(reg.get("mean_diff").eval(kSmall.x, kSmall.y) == -2.0);
  CHECK(reg.get("ks_two_sample").eval(std::vector<double>{1}, std::vector<double>{2}) == doctest::Approx(std::sqrt(0.5)));
  CHECK(reg.get("ks_two_sample").eval(std::vector<double>{1, 3}, std::vector<double>{2, 3}) ==
        doctest::Approx(0.5));
  const std::vector<double> same{1, 1};
  CHECK(reg.get("wilcoxon").eval(same, same) == 5.0);
  CHECK(reg.get("wilcoxon").eval(kSmall.x, kSmall.y) == 3.0);
  CHECK(reg.get("mann_whitney").eval(kSmall.x, kSmall.y) == 4.0);
  CHECK(reg.get("mann_whitney").eval(kSmall.y, kSmall.x) == 0.0);
  CHECK_THROWS_AS(reg.get("median_diff"), InvalidArgument);
  CHECK(reg.ids() == std::vector<std::string>{"ks_two_sample", "mann_whitney", "mean_diff", "wilcoxon"});
  CHECK_THROWS_AS(TwoSampleData({}, {1.0}), InvalidSize);
  CHECK_THROWS_AS(TwoSampleData({1.0}, {NAN}), DataError);
}

TEST_CASE("user plugin statistics") {
  auto reg = StatisticRegistry::with_builtins();
  reg.add("max_x", [](std::span<const double> a, std::span<const double>) { return *std::max_element(a.begin(), a.end()); });
  CHECK_THROWS_AS(reg.add("max_x", [](std::span<const double>, std::span<const double>) { return 0.0; }), InvalidArgument);
  const auto r = exact_perm_test(kSmall, "max_x", TestSide::Greater, kDefaultExactCap, reg);
  CHECK(r.observed == 2.0);
  CHECK(r.p_value == 1.0);

  // Exact null law of mean_diff for x-size 2 of (1, 2, 3, 4).
  std::vector<double> law;
  reg.add("recorder", [&](std::span<const double> a, std::span<const double> b) {
    const double v = (a[0] + a[1]) / 2 - (b[0] + b[1]) / 2;
    law.push_back(v);
    return v;
  });
  exact_perm_test(kSmall, "recorder", TestSide::TwoSided, kDefaultExactCap, reg);
  law.erase(law.begin());  // observed value
  std::sort(law.begin(), law.end());
  CHECK(law == std::vector<double>{-2, -1, 0, 0, 1, 2});
}

TEST_CASE("exact_perm_test") {
  const auto r = exact_perm_test(kSmall, "mean_diff", TestSide::TwoSided);
  CHECK(r.p_value == doctest::Approx(1.0 / 3));
  CHECK(r.n_resamples == 6);
  CHECK(r.n_extreme == 2);
  CHECK(r.mode == TestMode::Exact);

  auto reg = StatisticRegistry::with_builtins();
  reg.add("const", [](std::span<const double>, std::span<const double>) { return 7.0; });
  for (auto side : {TestSide::TwoSided, TestSide::Greater, TestSide::Less})
    CHECK(exact_perm_test(kSmall, "const", side, kDefaultExactCap, reg).p_value == 1.0);

  const TwoSampleData one({1}, {2});
  CHECK(exact_perm_test(one, "mean_diff", TestSide::Greater).p_value == 1.0);
  CHECK(exact_perm_test(one, "mean_diff", TestSide::Less).p_value == 0.5);

  CHECK_THROWS_AS(exact_perm_test(TwoSampleData(std::vector<double>(12, 1.0), std::vector<double>(12, 2.0)),
                                  "mean_diff", TestSide::TwoSided),
                  CapExceeded);
}

TEST_CASE("subset enumeration matches permutation enumeration") {
  std::uint64_t s = 0;
  for (std::size_t m = 1; m <= 3; ++m)
    for (std::size_t n = 1; m + n <= 6; ++n) {
      const TwoSampleData d(draws(m, {77, s}), draws(n, {77, s + 1}));
      s += 2;
      for (const auto& id : default_registry().ids())
        for (auto side : {TestSide::TwoSided, TestSide::Greater, TestSide::Less}) {
          const auto r = exact_perm_test(d, id, side);
          CHECK(r.p_value == doctest::Approx(p_by_permutations(d, id, side)).epsilon(1e-14));
          CHECK(r.n_resamples == std::size_t(binomial_coefficient(m + n, m)));
        }
    }
}

TEST_CASE("two-sided p-values are label symmetric") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const TwoSampleData d(draws(4, {5, s}), draws(3, {6, s}));
    const TwoSampleData swapped(d.y, d.x);
    for (const auto& id : default_registry().ids())
      CHECK(exact_perm_test(d, id, TestSide::TwoSided).p_value ==
            doctest::Approx(exact_perm_test(swapped, id, TestSide::TwoSided).p_value));
  }
}

TEST_CASE("mc_perm_test") {
  const McConfig cfg{9999, RngState{9, 0}, 1};
  const auto r = mc_perm_test(kSmall, "mean_diff", TestSide::TwoSided, cfg);
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / 9999);
  CHECK(std::abs(r.p_value - 1.0 / 3) <= 3 * se);
  CHECK(r.mode == TestMode::MonteCarlo);
  CHECK(r.n_resamples == 9999);
  const auto again = mc_perm_test(kSmall, "mean_diff", TestSide::TwoSided, cfg);
  CHECK(again.p_value == r.p_value);
  CHECK(mc_perm_test(kSmall, "mean_diff", TestSide::TwoSided, McConfig{9999, RngState{9, 0}, 4}).p_value == r.p_value);

  auto reg = StatisticRegistry::with_builtins();
  reg.add("const", [](std::span<const double>, std::span<const double>) { return 7.0; });
  CHECK(mc_perm_test(kSmall, "const", TestSide::TwoSided, McConfig{500, RngState{1, 0}, 1}, reg).p_value == 1.0);
  CHECK_THROWS_AS(mc_perm_test(kSmall, "mean_diff", TestSide::TwoSided, McConfig{98, RngState{}, 1}), InvalidArgument);
}

TEST_CASE("MC p-values converge to the exact value for most seeds") {
  const TwoSampleData d(draws(5, {12, 0}), draws(5, {12, 1}));
  for (const auto& id : default_registry().ids()) {
    const double p = exact_perm_test(d, id, TestSide::TwoSided).p_value;
    const std::size_t b = 2000;
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const double ph = mc_perm_test(d, id, TestSide::TwoSided, McConfig{b, RngState{seed, 3}, 1}).p_value;
      within += std::abs(ph - p) <= 3 * std::sqrt(p * (1 - p) / double(b)) + 1.0 / double(b + 1);
    }
    CHECK(within >= 95);
  }
}

TEST_CASE("two-sample process covariance") {
  const auto one = NamedFunction::constant(1.0);
  const auto id = NamedFunction::power(1);
  CHECK(two_sample_process_cov(kSmall, 2, one, one) == 0.0);
  CHECK(two_sample_process_cov(kSmall, 2, id, id) == doctest::Approx(0.625));
  // Exact finite-N covariance differs from the limit by N / (N - 1).
  const auto pooled = FinitePopulation::scalar(kSmall.pooled());
  CHECK(donsker_cov(pooled, 2, id, id) == doctest::Approx(two_sample_process_cov(kSmall, 2, id, id) * 4.0 / 3.0));

  std::vector<double> x(50), y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    x[i] = std::sin(double(i)) + 0.5;
    y[i] = std::cos(double(i) * 0.7);
  }
  const TwoSampleData d(x, y);
  const std::vector<NamedFunction> fs{NamedFunction::power(1), NamedFunction::power(2)};
  std::uint64_t stream = 0;
  for (const auto& f : fs)
    for (const auto& g : fs) {
      const auto mc = two_sample_process_cov_mc(d, 50, f, g, McConfig{100000, RngState{21, stream++}, 0});
      const double exact = donsker_cov(FinitePopulation::scalar(d.pooled()), 50, f, g);
      CHECK(std::abs(mc.mean - exact) <= 3 * mc.se);
      MESSAGE(f.name << "," << g.name << " mc " << mc.mean << " exact " << exact << " limit "
                     << two_sample_process_cov(d, 50, f, g));
    }
}

TEST_CASE("null p-values are super-uniform") {
  for (const std::string id : {"mean_diff", "wilcoxon"})
    for (double alpha : {0.05, 0.1}) {
      const auto chk = null_super_uniformity(4, 4, id, TestSide::TwoSided, alpha, McConfig{2000, RngState{3, 0}, 1});
      CHECK(chk.pass);
      CHECK(chk.limit == doctest::Approx(alpha + 1.0 / 70));
    }
}
