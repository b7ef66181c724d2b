#include "permstat/stein_clt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "permstat/error.hpp"

namespace permstat {

double normal_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

double upper_tail(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("normal_quantile needs p in (0, 1)");
  // Acklam's rational approximation (relative error ~1e-9).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement; the error is formed on the tail that keeps precision.
  for (int step = 0; step < 2; ++step) {
    const double err = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - upper_tail(x);
    const double u = err / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double standardized_sum(const PermMatrix& m, const Permutation& pi) {
  if (m.sigma2() <= 0.0) throw DegenerateInput("standardized sum undefined: sigma_A^2 = 0");
  return m.eval_centered(pi) / std::sqrt(m.sigma2());
}

double exchangeable_linearity_defect(const PermMatrix& m, std::size_t cap) {
  const std::size_t n = m.size();
  const Matrix& d = m.d();
  const auto nn = static_cast<double>(n);
  double worst = 0.0;
  PermutationEnumerator e(n, cap);
  do {
    const auto p = e.current().zero_based();
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += d(i, p[i]);
    // Average W' - W over all (I, J); swapping images of I and J changes W by
    // d(I, p[J]) + d(J, p[I]) - d(I, p[I]) - d(J, p[J]).
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc += d(i, p[j]) + d(j, p[i]) - d(i, p[i]) - d(j, p[j]);
    const double conditional = acc / (nn * nn);
    worst = std::max(worst, std::abs(conditional + 2.0 / nn * w));
  } while (e.advance());
  return worst;
}

CLTCertificate clt_certificate(const PermMatrix& m) {
  if (m.sigma2() <= 0.0) throw DegenerateInput("CLT certificate undefined: sigma_A^2 = 0");
  const double sigma = std::sqrt(m.sigma2());
  CLTCertificate c;
  c.r3 = m.d3() / (static_cast<double>(m.size()) * sigma * sigma * sigma);
  c.ratio = m.b_max() / sigma;
  c.weak_rate = std::sqrt(c.ratio);
  return c;
}

double ks_distance_to_normal(std::span<const double> samples) {
  if (samples.empty()) throw InvalidSize("KS distance needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const auto b = static_cast<double>(x.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phi = normal_cdf(x[i]);
    sup = std::max({sup, std::abs(static_cast<double>(i + 1) / b - phi), std::abs(static_cast<double>(i) / b - phi)});
  }
  return sup;
}

namespace {

// Antiderivatives: G' = Phi, H' = 1 - Phi.
double g_int(double x) { return x * normal_cdf(x) + normal_pdf(x); }
double h_int(double x) { return x * upper_tail(x) - normal_pdf(x); }

// Integral of Phi over [a, b], choosing the antiderivative with less
// cancellation on each side of zero.
double integral_phi(double a, double b) {
  if (b <= 0.0) return g_int(b) - g_int(a);
  if (a >= 0.0) return (b - a) - (h_int(b) - h_int(a));
  return integral_phi(a, 0.0) + integral_phi(0.0, b);
}

// Integral of |c - Phi(x)| over [a, b] for constant c in [0, 1].
double integral_abs_gap(double c, double a, double b) {
  if (b <= a) return 0.0;
  if (c <= 0.0) return integral_phi(a, b);
  if (c >= 1.0) return (b - a) - integral_phi(a, b);
  const double cross = std::clamp(normal_quantile(c), a, b);
  // Phi < c left of the crossing, Phi > c to the right.
  const double left = c * (cross - a) - integral_phi(a, cross);
  const double right = integral_phi(cross, b) - c * (b - cross);
  return left + right;
}

}  // namespace

double wasserstein1_to_normal(std::span<const double> samples) {
  if (samples.empty()) throw InvalidSize("Wasserstein distance needs at least one sample");
  constexpr double kWindow = 8.0;
  std::vector<double> x(samples.begin(), samples.end());
  for (double& v : x) v = std::clamp(v, -kWindow, kWindow);
  std::sort(x.begin(), x.end());
  const auto b = static_cast<double>(x.size());
  double total = integral_abs_gap(0.0, -kWindow, x.front());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    total += integral_abs_gap(static_cast<double>(i + 1) / b, x[i], x[i + 1]);
  }
  total += integral_abs_gap(1.0, x.back(), kWindow);
  return total;
}

std::vector<double> normalize_population(std::span<const double> z) {
  if (z.empty()) throw InvalidSize("population must be non-empty");
  double mean = 0.0;
  for (double v : z) mean += v / static_cast<double>(z.size());
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw DegenerateInput("population has zero spread and cannot be normalized");
  const double scale = 1.0 / std::sqrt(ss);
  std::vector<double> out;
  out.reserve(z.size());
  for (double v : z) out.push_back((v - mean) * scale);
  return out;
}

namespace {

void require_normalized(std::span<const double> z) {
  if (z.size() < 2) throw InvalidSize("Rosen process needs N >= 2");
  double s = 0.0;
  double s2 = 0.0;
  for (double v : z) {
    s += v;
    s2 += v * v;
  }
  if (std::abs(s) > 1e-9 || std::abs(s2 - 1.0) > 1e-9) {
    throw InvalidArgument("Rosen process needs a normalized population (sum 0, sum of squares 1)");
  }
}

}  // namespace

std::size_t rosen_index(std::size_t n_total, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("Rosen grid times must lie in [0, 1]");
  const double x = static_cast<double>(n_total) * t;
  const double k = std::ceil(x - 1e-9 * std::max(1.0, x));
  return std::min(n_total, static_cast<std::size_t>(std::max(0.0, k)));
}

RosenPath rosen_path(std::span<const double> z, const Permutation& pi, std::span<const double> grid) {
  require_normalized(z);
  if (pi.size() != z.size()) throw InvalidArgument("permutation size does not match population");
  RosenPath path{std::vector<double>(z.begin(), z.end()), std::vector<double>(grid.begin(), grid.end()), {}};
  // prefix[k] = sum of z_i with pi(i) <= k.
  const auto p = pi.zero_based();
  std::vector<double> by_rank(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) by_rank[p[i]] = z[i];
  std::vector<double> prefix(z.size() + 1, 0.0);
  for (std::size_t k = 0; k < z.size(); ++k) prefix[k + 1] = prefix[k] + by_rank[k];
  for (double t : grid) path.values.push_back(prefix[rosen_index(z.size(), t)]);
  return path;
}

double rosen_variance(std::span<const double> z, std::size_t k) {
  require_normalized(z);
  if (k > z.size()) throw InvalidArgument("Rosen index exceeds N");
  if (k == 0) return 0.0;
  const auto s = survey_mean_moments(z, k);
  const auto kk = static_cast<double>(k);
  return kk * kk * s.variance;
}

double rosen_covariance(std::size_t n_total, std::size_t k, std::size_t l) {
  if (n_total < 2) throw InvalidSize("Rosen process needs N >= 2");
  if (k > n_total || l > n_total) throw InvalidArgument("Rosen index exceeds N");
  const auto lo = static_cast<double>(std::min(k, l));
  const auto hi = static_cast<double>(std::max(k, l));
  const auto n = static_cast<double>(n_total);
  return lo * (n - hi) / (n * (n - 1.0));
}

}  // namespace permstat
