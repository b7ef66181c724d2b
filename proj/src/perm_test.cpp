#include "permstat/perm_test.hpp"

#include <algorithm>
#include <cmath>

#include "permstat/error.hpp"
#include "permstat/permutation.hpp"
#include "permstat/stein_clt.hpp"

namespace permstat {

TwoSampleData::TwoSampleData(std::vector<double> x_values, std::vector<double> y_values)
    : x(std::move(x_values)), y(std::move(y_values)) {
  if (x.empty() || y.empty()) throw InvalidSize("both samples must be non-empty");
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("sample contains a non-finite value");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DataError("sample contains a non-finite value");
  }
}

std::vector<double> TwoSampleData::pooled() const {
  std::vector<double> z(x);
  z.insert(z.end(), y.begin(), y.end());
  return z;
}

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a;
  return s / static_cast<double>(v.size());
}

double mean_diff(std::span<const double> a, std::span<const double> b) { return mean_of(a) - mean_of(b); }

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto m = static_cast<double>(sa.size());
  const auto n = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    const double t = j >= sb.size() || (i < sa.size() && sa[i] <= sb[j]) ? sa[i] : sb[j];
    while (i < sa.size() && sa[i] == t) ++i;
    while (j < sb.size() && sb[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  return std::sqrt(m * n / (m + n)) * d;
}

// Rank sum of the first group in the pooled order; ties get midranks.
double wilcoxon(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (double v : a) {
    double less = 0.0;
    double equal = 0.0;
    for (double w : a) {
      less += w < v;
      equal += w == v;
    }
    for (double w : b) {
      less += w < v;
      equal += w == v;
    }
    s += less + (equal + 1.0) / 2.0;
  }
  return s;
}

double mann_whitney(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (double v : a) {
    for (double w : b) u += v < w;
  }
  return u;
}

bool is_extreme(double t, double observed, TestSide side, double center) {
  const double tol = 1e-12 * std::max({1.0, std::abs(observed), std::abs(center)});
  switch (side) {
    case TestSide::Greater:
      return t >= observed - tol;
    case TestSide::Less:
      return t <= observed + tol;
    case TestSide::TwoSided:
      break;
  }
  return std::abs(t - center) >= std::abs(observed - center) - tol;
}

void split(std::span<const double> pooled, const std::vector<std::uint8_t>& first, std::vector<double>& a,
           std::vector<double>& b) {
  a.clear();
  b.clear();
  for (std::size_t i = 0; i < pooled.size(); ++i) (first[i] ? a : b).push_back(pooled[i]);
}

}  // namespace

StatisticRegistry StatisticRegistry::with_builtins() {
  StatisticRegistry r;
  r.add("mean_diff", mean_diff);
  r.add("ks_two_sample", ks_two_sample);
  r.add("wilcoxon", wilcoxon, [](std::size_t m, std::size_t n) { return static_cast<double>(m * (m + n + 1)) / 2.0; });
  r.add("mann_whitney", mann_whitney, [](std::size_t m, std::size_t n) { return static_cast<double>(m * n) / 2.0; });
  return r;
}

void StatisticRegistry::add(const std::string& id, TwoSampleStatistic eval,
                            std::function<double(std::size_t, std::size_t)> center) {
  if (id.empty()) throw InvalidArgument("statistic id must be non-empty");
  if (contains(id)) throw InvalidArgument("statistic '" + id + "' is already registered");
  entries_.emplace(id, StatisticEntry{std::move(eval), std::move(center)});
}

const StatisticEntry& StatisticRegistry::get(const std::string& id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) {
    std::string known;
    for (const auto& k : ids()) known += (known.empty() ? "" : ", ") + k;
    throw InvalidArgument("unknown statistic '" + id + "' (known: " + known + ")");
  }
  return it->second;
}

std::vector<std::string> StatisticRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

const StatisticRegistry& default_registry() {
  static const StatisticRegistry registry = StatisticRegistry::with_builtins();
  return registry;
}

TestSide parse_side(const std::string& s) {
  if (s == "two" || s == "two-sided") return TestSide::TwoSided;
  if (s == "greater") return TestSide::Greater;
  if (s == "less") return TestSide::Less;
  throw InvalidArgument("side must be one of two, greater, less");
}

std::string to_string(TestSide side) {
  switch (side) {
    case TestSide::Greater:
      return "greater";
    case TestSide::Less:
      return "less";
    case TestSide::TwoSided:
      break;
  }
  return "two";
}

std::string to_string(TestMode mode) { return mode == TestMode::Exact ? "exact" : "mc"; }

TestResult exact_perm_test(const TwoSampleData& data, const std::string& statistic_id, TestSide side, double cap,
                           const StatisticRegistry& registry) {
  const StatisticEntry& stat = registry.get(statistic_id);
  const std::size_t m = data.m();
  const std::size_t total = m + data.n();
  const double splits = binomial_coefficient(total, m);
  if (splits > cap) {
    throw CapExceeded("exact test needs " + std::to_string(static_cast<long long>(splits)) +
                      " splits, above the cap; use Monte Carlo mode");
  }
  const auto pooled = data.pooled();
  const double center = stat.center(m, data.n());

  TestResult r;
  r.statistic_id = statistic_id;
  r.observed = stat.eval(data.x, data.y);
  r.mode = TestMode::Exact;
  r.side = side;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<std::uint8_t> first(total, 0);
  for_each_subset(total, m, [&](std::span<const std::size_t> s) {
    std::fill(first.begin(), first.end(), 0);
    for (std::size_t i : s) first[i] = 1;
    split(pooled, first, a, b);
    ++r.n_resamples;
    if (is_extreme(stat.eval(a, b), r.observed, side, center)) ++r.n_extreme;
  });
  r.p_value = static_cast<double>(r.n_extreme) / static_cast<double>(r.n_resamples);
  return r;
}

TestResult mc_perm_test(const TwoSampleData& data, const std::string& statistic_id, TestSide side,
                        const McConfig& cfg, const StatisticRegistry& registry) {
  if (cfg.draws < 99) throw InvalidArgument("Monte Carlo test needs at least 99 resamples");
  const StatisticEntry& stat = registry.get(statistic_id);
  const auto pooled = data.pooled();
  const std::size_t m = data.m();
  const double center = stat.center(m, data.n());

  TestResult r;
  r.statistic_id = statistic_id;
  r.observed = stat.eval(data.x, data.y);
  r.mode = TestMode::MonteCarlo;
  r.side = side;
  r.n_resamples = cfg.draws;
  const auto hits = mc_collect<std::uint8_t>(cfg, [&](Rng& rng) -> std::uint8_t {
    const SampleMask mask = sample_without_replacement(pooled.size(), m, rng);
    std::vector<double> a;
    std::vector<double> b;
    split(pooled, mask.indicator, a, b);
    return is_extreme(stat.eval(a, b), r.observed, side, center) ? 1 : 0;
  });
  for (auto h : hits) r.n_extreme += h;
  const auto bd = static_cast<double>(cfg.draws);
  r.p_value = (1.0 + static_cast<double>(r.n_extreme)) / (bd + 1.0);
  r.se = std::sqrt(r.p_value * (1.0 - r.p_value) / bd);
  return r;
}

double two_sample_process_cov(const TwoSampleData& data, std::size_t m, const NamedFunction& f,
                              const NamedFunction& g) {
  const auto pop = FinitePopulation::scalar(data.pooled());
  if (m < 1 || m > pop.size()) throw InvalidArgument("subsample size must satisfy 1 <= m <= m + n");
  const auto fv = tabulate(pop, f);
  const auto gv = tabulate(pop, g);
  const double fm = mean_of(fv);
  const double gm = mean_of(gv);
  double c = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) c += (fv[i] - fm) * (gv[i] - gm);
  c /= static_cast<double>(fv.size());
  const double gamma = static_cast<double>(m) / static_cast<double>(pop.size());
  return (1.0 - gamma) * c;
}

MeanSe two_sample_process_cov_mc(const TwoSampleData& data, std::size_t m, const NamedFunction& f,
                                 const NamedFunction& g, const McConfig& cfg) {
  return donsker_cov_mc(FinitePopulation::scalar(data.pooled()), m, f, g, cfg);
}

NullCheck null_super_uniformity(std::size_t m, std::size_t n, const std::string& statistic_id, TestSide side,
                                double alpha, const McConfig& cfg) {
  NullCheck out;
  out.alpha = alpha;
  out.reps = cfg.draws;
  for (std::size_t r = 0; r < cfg.draws; ++r) {
    Rng rng(cfg.rng.substream(r));
    auto normal = [&rng] {
      double u = 0.0;
      while (u == 0.0) u = rng.uniform01();
      return normal_quantile(u);
    };
    std::vector<double> x(m);
    std::vector<double> y(n);
    for (double& v : x) v = normal();
    for (double& v : y) v = normal();
    const TestResult t = exact_perm_test(TwoSampleData(std::move(x), std::move(y)), statistic_id, side);
    if (t.p_value <= alpha) ++out.rejections;
  }
  out.rate = static_cast<double>(out.rejections) / static_cast<double>(out.reps);
  out.limit = alpha + 1.0 / binomial_coefficient(m + n, m);
  out.pass = out.rate <= out.limit;
  return out;
}

}  // namespace permstat
