#include "permstat/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "permstat/error.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

namespace {

double need(const std::optional<double>& v, const char* what) {
  if (!v) throw InvalidArgument(std::string("tail bound is missing parameter ") + what);
  return *v;
}

std::size_t need(const std::optional<std::size_t>& v, const char* what) {
  if (!v) throw InvalidArgument(std::string("tail bound is missing parameter ") + what);
  return *v;
}

// prefactor * exp(-num / den) with the degenerate den = 0 convention.
double gaussian_like(double prefactor, double num, double den) {
  if (num == 0.0) return prefactor;
  if (den <= 0.0) return 0.0;
  return prefactor * std::exp(-num / den);
}

}  // namespace

std::string to_string(TailBoundKind kind) {
  switch (kind) {
    case TailBoundKind::CombHoeffdingV1: return "CombHoeffdingV1";
    case TailBoundKind::CombHoeffdingV2: return "CombHoeffdingV2";
    case TailBoundKind::CombBernstein: return "CombBernstein";
    case TailBoundKind::MatrixHoeffding: return "MatrixHoeffding";
    case TailBoundKind::MatrixBernstein: return "MatrixBernstein";
    case TailBoundKind::TolstikhinTalagrand: return "TolstikhinTalagrand";
  }
  return "unknown";
}

TailBoundSpec TailBoundSpec::comb_hoeffding_v1(const PermMatrix& m) {
  return comb_hoeffding_v1(m.sigma2(), m.b_max(), m.size());
}

TailBoundSpec TailBoundSpec::comb_hoeffding_v1(double sigma2, double b_max, std::size_t n_total) {
  TailBoundSpec s;
  s.kind = TailBoundKind::CombHoeffdingV1;
  s.sigma2 = sigma2;
  s.b_max = b_max;
  s.n_total = n_total;
  return s;
}

TailBoundSpec TailBoundSpec::comb_hoeffding_v2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n < 2 || b.size() != n) throw InvalidArgument("rank-one factors need equal length N >= 2");
  const auto nn = static_cast<double>(n);
  double abar = 0.0, bbar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    abar += a[i] / nn;
    bbar += b[i] / nn;
  }
  double a2 = 0.0, a4 = 0.0, b2 = 0.0, b4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = (a[i] - abar) * (a[i] - abar);
    const double db = (b[i] - bbar) * (b[i] - bbar);
    a2 += da;
    a4 += da * da;
    b2 += db;
    b4 += db * db;
  }
  TailBoundSpec s;
  s.kind = TailBoundKind::CombHoeffdingV2;
  s.sigma2 = a2 * b2 / (nn - 1.0);
  s.sigma_bar2 = std::sqrt(a4) * std::sqrt(b4);
  s.n_total = n;
  return s;
}

TailBoundSpec TailBoundSpec::comb_bernstein(const PermMatrix& m) { return comb_bernstein(m.sigma2(), m.b_max()); }

TailBoundSpec TailBoundSpec::comb_bernstein(double sigma2, double b_max) {
  TailBoundSpec s;
  s.kind = TailBoundKind::CombBernstein;
  s.sigma2 = sigma2;
  s.b_max = b_max;
  return s;
}

TailBoundSpec TailBoundSpec::matrix_hoeffding(std::size_t dim, std::size_t n_total, double m_bound) {
  TailBoundSpec s;
  s.kind = TailBoundKind::MatrixHoeffding;
  s.dim = dim;
  s.n_total = n_total;
  s.m_bound = m_bound;
  return s;
}

TailBoundSpec TailBoundSpec::matrix_bernstein(std::size_t dim, double sigma2, double m_bound) {
  TailBoundSpec s;
  s.kind = TailBoundKind::MatrixBernstein;
  s.dim = dim;
  s.sigma2 = sigma2;
  s.m_bound = m_bound;
  return s;
}

TailBoundSpec TailBoundSpec::tolstikhin_talagrand(std::size_t n_sample, std::size_t n_total, double sigma_f2) {
  TailBoundSpec s;
  s.kind = TailBoundKind::TolstikhinTalagrand;
  s.n_sample = n_sample;
  s.n_total = n_total;
  s.sigma_f2 = sigma_f2;
  return s;
}

double tail_bound(const TailBoundSpec& spec, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("tail bound threshold must be >= 0");
  const double t2 = t * t;
  switch (spec.kind) {
    case TailBoundKind::CombHoeffdingV1: {
      const double b = need(spec.b_max, "b_max");
      const auto n = static_cast<double>(need(spec.n_total, "n_total"));
      return gaussian_like(1.0, t2, 4.0 * n * b * b + 4.0 * need(spec.sigma2, "sigma2"));
    }
    case TailBoundKind::CombHoeffdingV2:
      return gaussian_like(1.0, t2, 4.0 * need(spec.sigma_bar2, "sigma_bar2") + 4.0 * need(spec.sigma2, "sigma2"));
    case TailBoundKind::CombBernstein:
      return gaussian_like(1.0, t2,
                           12.0 * need(spec.sigma2, "sigma2") +
                               4.0 * std::numbers::sqrt2 * need(spec.b_max, "b_max") * t);
    case TailBoundKind::MatrixHoeffding: {
      const double m = need(spec.m_bound, "m_bound");
      const auto d = static_cast<double>(need(spec.dim, "dim"));
      const auto n = static_cast<double>(need(spec.n_total, "n_total"));
      return gaussian_like(2.0 * d, t2, 24.0 * n * m * m);
    }
    case TailBoundKind::MatrixBernstein: {
      const auto d = static_cast<double>(need(spec.dim, "dim"));
      return gaussian_like(2.0 * d, t2,
                           12.0 * need(spec.sigma2, "sigma2") +
                               4.0 * std::numbers::sqrt2 * need(spec.m_bound, "m_bound") * t);
    }
    case TailBoundKind::TolstikhinTalagrand: {
      const auto n = static_cast<double>(need(spec.n_sample, "n_sample"));
      const auto big_n = static_cast<double>(need(spec.n_total, "n_total"));
      return gaussian_like(1.0, n * n * t2, 8.0 * big_n * need(spec.sigma_f2, "sigma_f2"));
    }
  }
  return 1.0;
}

double orlicz_bound(const OrliczBoundSpec& spec) {
  if (spec.n_sample < 1 || spec.n_sample > spec.n_total) throw InvalidSize("Orlicz bound needs 1 <= n <= N");
  if (spec.l2_norm < 0.0 || spec.sup_norm < 0.0) throw InvalidArgument("norms must be non-negative");
  const auto n = static_cast<double>(spec.n_sample);
  const auto big_n = static_cast<double>(spec.n_total);
  switch (spec.kind) {
    case OrliczKind::BobkovPsi2:
      return std::sqrt(12.0 / n * (1.0 + big_n / n)) * spec.l2_norm;
    case OrliczKind::BernsteinSerflingPsi1:
      return 24.0 * std::numbers::sqrt2 / n * spec.sup_norm + std::sqrt(72.0 / (n * std::numbers::ln2)) * spec.l2_norm;
  }
  return 0.0;
}

double orlicz_norm_estimate(std::span<const double> samples, int p) {
  if (samples.empty()) throw InvalidSize("Orlicz norm estimate needs at least one sample");
  if (p != 1 && p != 2) throw InvalidArgument("Orlicz norm order must be 1 or 2");
  double max_abs = 0.0;
  for (double x : samples) {
    if (!std::isfinite(x)) throw DataError("Orlicz norm estimate: non-finite sample");
    max_abs = std::max(max_abs, std::abs(x));
  }
  if (max_abs == 0.0) return 0.0;

  // Mean of psi_p(|x|/C) is decreasing in C.
  auto excess = [&](double c) {
    double s = 0.0;
    for (double x : samples) {
      const double u = std::abs(x) / c;
      s += std::expm1(p == 1 ? u : u * u);
    }
    return s / static_cast<double>(samples.size()) - 1.0;
  };
  double lo = max_abs / 50.0;
  double hi = max_abs * 50.0;
  if (excess(lo) <= 0.0) return lo;
  if (excess(hi) > 0.0) return hi;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

EmpiricalTail empirical_tail_from_samples(std::span<const double> samples, std::span<const double> thresholds) {
  if (thresholds.empty()) throw InvalidArgument("empirical tail needs a non-empty threshold grid");
  if (samples.empty()) throw InvalidSize("empirical tail needs samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  EmpiricalTail out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.n_draws = sorted.size();
  const auto b = static_cast<double>(sorted.size());
  for (double t : thresholds) {
    // Integer count of draws >= t.
    const auto count = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
    const double p = static_cast<double>(count) / b;
    out.survival.push_back(p);
    out.se.push_back(std::sqrt(p * (1.0 - p) / b));
  }
  return out;
}

EmpiricalTail empirical_tail(const std::function<double(Rng&)>& sampler, std::span<const double> thresholds,
                             const McConfig& cfg) {
  if (thresholds.empty()) throw InvalidArgument("empirical tail needs a non-empty threshold grid");
  if (cfg.draws < 100) throw InvalidSize("empirical tail needs B >= 100");
  const auto values = mc_collect<double>(cfg, sampler);
  return empirical_tail_from_samples(values, thresholds);
}

EmpiricalTail exact_tail(std::span<const double> support, std::span<const double> thresholds) {
  auto out = empirical_tail_from_samples(support, thresholds);
  std::fill(out.se.begin(), out.se.end(), 0.0);
  return out;
}

DominationResult domination_check(const std::function<double(double)>& bound, const EmpiricalTail& emp) {
  DominationResult out;
  for (std::size_t k = 0; k < emp.thresholds.size(); ++k) {
    DominationRow row;
    row.t = emp.thresholds[k];
    row.bound = bound(row.t);
    row.empirical = emp.survival[k];
    row.se = emp.se[k];
    row.slack = row.bound - (row.empirical - 3.0 * row.se);
    row.pass = row.slack >= -1e-12;
    out.pass = out.pass && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

DominationResult domination_check(const TailBoundSpec& spec, const EmpiricalTail& emp, double bound_scale) {
  return domination_check([&](double t) { return bound_scale * tail_bound(spec, t); }, emp);
}

ConvexOrderResult convex_order_check(std::span<const double> z, std::size_t n, const std::function<double(double)>& f,
                                     const ConvexOrderOptions& options) {
  const std::size_t big_n = z.size();
  if (big_n == 0) throw InvalidSize("convex ordering needs a non-empty population");
  if (n < 1 || n > big_n) throw InvalidSize("convex ordering needs 1 <= n <= N");
  ConvexOrderResult out;
  double scale = 1.0;

  if (options.mode == ConvexOrderMode::Exhaustive) {
    const double subsets = binomial_coefficient(big_n, n);
    const double tuples = std::pow(static_cast<double>(big_n), static_cast<double>(n));
    if (subsets > options.subset_cap || tuples > options.tuple_cap) {
      throw CapExceeded("convex ordering enumeration exceeds caps; use Monte Carlo mode");
    }
    double acc = 0.0;
    for_each_subset(big_n, n, [&](std::span<const std::size_t> s) {
      double sum = 0.0;
      for (auto i : s) sum += z[i];
      const double v = f(sum);
      acc += v;
      scale = std::max(scale, std::abs(v));
    });
    out.e_without = acc / subsets;

    std::vector<std::size_t> idx(n, 0);
    acc = 0.0;
    while (true) {
      double sum = 0.0;
      for (auto i : idx) sum += z[i];
      const double v = f(sum);
      acc += v;
      scale = std::max(scale, std::abs(v));
      std::size_t k = 0;
      while (k < n && ++idx[k] == big_n) idx[k++] = 0;
      if (k == n) break;
    }
    out.e_with = acc / tuples;
    out.tolerance = 1e-12 * scale;
  } else {
    McConfig without_cfg = options.mc;
    without_cfg.rng = options.mc.rng.substream(0);
    McConfig with_cfg = options.mc;
    with_cfg.rng = options.mc.rng.substream(1);
    const auto without = mc_collect<double>(without_cfg, [&](Rng& rng) {
      const auto mask = sample_without_replacement(big_n, n, rng);
      double sum = 0.0;
      for (std::size_t i = 0; i < big_n; ++i)
        if (mask.indicator[i]) sum += z[i];
      return f(sum);
    });
    const auto with = mc_collect<double>(with_cfg, [&](Rng& rng) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += z[rng.bounded(big_n)];
      return f(sum);
    });
    const auto a = mean_and_se(without);
    const auto b = mean_and_se(with);
    out.e_without = a.mean;
    out.e_with = b.mean;
    out.tolerance = 3.0 * std::hypot(a.se, b.se);
  }
  out.pass = out.e_without <= out.e_with + out.tolerance;
  return out;
}

}  // namespace permstat
