#include "permstat/emp_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "permstat/error.hpp"

namespace permstat {

namespace {

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

FinitePopulation::FinitePopulation(std::vector<std::vector<double>> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidSize("population must be non-empty");
  const std::size_t d = points_.front().size();
  if (d == 0) throw DataError("population points must have at least one coordinate");
  for (const auto& p : points_) {
    if (p.size() != d) throw DataError("population points have inconsistent dimensions");
    for (double v : p) {
      if (!std::isfinite(v)) throw DataError("population contains a non-finite value");
    }
  }
}

FinitePopulation FinitePopulation::scalar(std::span<const double> z) {
  std::vector<std::vector<double>> pts;
  pts.reserve(z.size());
  for (double v : z) pts.push_back({v});
  return FinitePopulation(std::move(pts));
}

std::vector<double> FinitePopulation::scalars() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.front());
  return out;
}

NamedFunction NamedFunction::constant(double c) {
  return {"const(" + short_number(c) + ")", [c](std::span<const double>, std::size_t) { return c; }};
}

NamedFunction NamedFunction::power(int k, std::size_t coord) {
  std::string name = k == 1 ? "id" : "id^" + std::to_string(k);
  if (coord != 0) name += "[" + std::to_string(coord) + "]";
  return {name, [k, coord](std::span<const double> z, std::size_t) {
            if (coord >= z.size()) throw InvalidArgument("function coordinate exceeds the point dimension");
            return std::pow(z[coord], k);
          }};
}

NamedFunction NamedFunction::indicator_le(double t, std::size_t coord) {
  return {"1(z<=" + short_number(t) + ")", [t, coord](std::span<const double> z, std::size_t) {
            if (coord >= z.size()) throw InvalidArgument("function coordinate exceeds the point dimension");
            return z[coord] <= t ? 1.0 : 0.0;
          }};
}

NamedFunction NamedFunction::tabulated(std::string name, std::vector<double> values) {
  return {std::move(name), [values = std::move(values)](std::span<const double>, std::size_t i) {
            if (i >= values.size()) throw InvalidArgument("tabulated function is shorter than the population");
            return values[i];
          }};
}

std::vector<double> tabulate(const FinitePopulation& pop, const NamedFunction& f) {
  std::vector<double> out(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) out[i] = f.eval(pop.point(i), i);
  return out;
}

PermMeasure::PermMeasure(const FinitePopulation& pop, SampleMask m) : population(pop), mask(std::move(m)) {
  if (mask.n_total != pop.size()) throw InvalidSize("sample mask does not match the population size");
}

namespace {

double sample_mean(std::span<const double> values, const SampleMask& mask) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask.indicator[i]) s += values[i];
  }
  return s / static_cast<double>(mask.n_sample);
}

double mean_of(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// Tabulated class plus population means; reused across MC draws.
struct ClassTable {
  std::vector<std::vector<double>> values;
  std::vector<double> means;

  ClassTable(const FinitePopulation& pop, std::span<const NamedFunction> fs) {
    if (fs.empty()) throw InvalidArgument("function class must be non-empty");
    for (const auto& f : fs) {
      values.push_back(tabulate(pop, f));
      means.push_back(mean_of(values.back()));
    }
  }

  SupDev sup(const SampleMask& mask) const {
    SupDev best;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double dev = std::abs(sample_mean(values[k], mask) - means[k]);
      if (k == 0 || dev > best.value) best = {dev, k + 1};
    }
    return best;
  }
};

void check_sample_size(const FinitePopulation& pop, std::size_t n) {
  if (n < 1 || n > pop.size()) throw InvalidArgument("sample size must satisfy 1 <= n <= N");
}

}  // namespace

double measure_apply(const PermMeasure& m, const NamedFunction& f) {
  return sample_mean(tabulate(m.population, f), m.mask);
}

double population_apply(const FinitePopulation& pop, const NamedFunction& f) { return mean_of(tabulate(pop, f)); }

double sup_dev_indicator(const PermMeasure& m) {
  if (!m.population.is_scalar()) throw InvalidArgument("indicator sup-deviation needs a scalar population");
  const std::size_t n_total = m.population.size();
  std::vector<std::size_t> order(n_total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto z = m.population.scalars();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });

  // Both CDFs are step functions with jumps at the atoms, so the sup is
  // attained at an atom (right value) or just below one (previous right value).
  std::size_t below_all = 0;
  std::size_t below_sel = 0;
  double best = 0.0;
  for (std::size_t k = 0; k < n_total;) {
    const double atom = z[order[k]];
    for (; k < n_total && z[order[k]] == atom; ++k) {
      ++below_all;
      below_sel += m.mask.indicator[order[k]];
    }
    // Integer counts keep the n = N case exactly zero.
    const double gap = std::abs(static_cast<double>(below_sel) / static_cast<double>(m.mask.n_sample) -
                                static_cast<double>(below_all) / static_cast<double>(n_total));
    best = std::max(best, gap);
  }
  return best;
}

SupDev sup_dev_class(const PermMeasure& m, std::span<const NamedFunction> fs) {
  return ClassTable(m.population, fs).sup(m.mask);
}

double donsker_cov(const FinitePopulation& pop, std::size_t n, const NamedFunction& f, const NamedFunction& g) {
  check_sample_size(pop, n);
  const auto fv = tabulate(pop, f);
  const auto gv = tabulate(pop, g);
  const double fm = mean_of(fv);
  const double gm = mean_of(gv);
  double c = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) c += (fv[i] - fm) * (gv[i] - gm);
  c /= static_cast<double>(fv.size());
  if (pop.size() == 1) return 0.0;
  const auto nt = static_cast<double>(pop.size());
  return (nt - static_cast<double>(n)) / (nt - 1.0) * c;
}

MeanSe donsker_cov_mc(const FinitePopulation& pop, std::size_t n, const NamedFunction& f, const NamedFunction& g,
                      const McConfig& cfg) {
  check_sample_size(pop, n);
  const auto fv = tabulate(pop, f);
  const auto gv = tabulate(pop, g);
  const double fm = mean_of(fv);
  const double gm = mean_of(gv);
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto prods = mc_collect<double>(cfg, [&](Rng& rng) {
    const SampleMask mask = sample_without_replacement(pop.size(), n, rng);
    return root_n * (sample_mean(fv, mask) - fm) * root_n * (sample_mean(gv, mask) - gm);
  });
  return mean_and_se(prods);
}

std::vector<GcRow> gc_decay_experiment(const FinitePopulation& pop, std::span<const std::size_t> n_grid,
                                       const McConfig& cfg) {
  if (cfg.draws < 100) throw InvalidArgument("Glivenko-Cantelli experiment needs at least 100 draws");
  std::vector<GcRow> rows;
  for (std::size_t r = 0; r < n_grid.size(); ++r) {
    const std::size_t n = n_grid[r];
    check_sample_size(pop, n);
    McConfig row_cfg = cfg;
    row_cfg.rng = cfg.rng.substream(r);
    const auto sups = mc_collect<double>(row_cfg, [&](Rng& rng) {
      return sup_dev_indicator(PermMeasure(pop, sample_without_replacement(pop.size(), n, rng)));
    });
    const MeanSe ms = mean_and_se(sups);
    rows.push_back({n, ms.mean, ms.se});
  }
  return rows;
}

double class_variance_sup(const FinitePopulation& pop, std::span<const NamedFunction> fs) {
  const ClassTable table(pop, fs);
  double best = 0.0;
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    double ss = 0.0;
    for (double v : table.values[k]) ss += (v - table.means[k]) * (v - table.means[k]);
    best = std::max(best, ss / static_cast<double>(pop.size()));
  }
  return best;
}

TalagrandCheck talagrand_sup_bound_check(const FinitePopulation& pop, std::span<const NamedFunction> fs,
                                         std::size_t n, std::span<const double> thresholds, const McConfig& cfg,
                                         double bound_scale) {
  check_sample_size(pop, n);
  if (cfg.draws < 100) throw InvalidArgument("sup-deviation check needs at least 100 draws");
  const ClassTable table(pop, fs);
  auto sups = mc_collect<double>(
      cfg, [&](Rng& rng) { return table.sup(sample_without_replacement(pop.size(), n, rng)).value; });
  TalagrandCheck out;
  out.sigma_f2 = class_variance_sup(pop, fs);
  const MeanSe ms = mean_and_se(sups);
  out.mean_sup = ms.mean;
  out.mean_sup_se = ms.se;
  for (double& s : sups) s -= ms.mean;
  out.domination = domination_check(TailBoundSpec::tolstikhin_talagrand(n, pop.size(), out.sigma_f2),
                                    empirical_tail_from_samples(sups, thresholds), bound_scale);
  return out;
}

}  // namespace permstat
