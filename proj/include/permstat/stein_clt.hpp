#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "permstat/comb_moments.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

// Standard normal distribution. The CDF goes through std::erfc, which is
// accurate to a few ulp across the real line.
double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
// Inverse CDF for p in (0, 1): rational initial guess refined by Halley steps.
double normal_quantile(double p);

// (Y - mu_A) / sigma_A. Throws DegenerateInput when sigma_A^2 = 0.
double standardized_sum(const PermMatrix& m, const Permutation& pi);

// max over pi in S_N of |E[W' - W | pi] + (2/N) W(pi)| where W = Y - mu_A and
// (W, W') is the transposition coupling, averaged over all N^2 (I, J).
double exchangeable_linearity_defect(const PermMatrix& m, std::size_t cap = kDefaultEnumerationCap);

// Berry-Esseen style rate quantities.
struct CLTCertificate {
  double r3 = 0.0;         // sum |d|^3 / (N sigma^3)
  double ratio = 0.0;      // B_A / sigma_A
  double weak_rate = 0.0;  // sqrt(B_A / sigma_A)
};

CLTCertificate clt_certificate(const PermMatrix& m);

// sup_t |F_B(t) - Phi(t)| for the empirical CDF of the samples.
double ks_distance_to_normal(std::span<const double> samples);

// Integral of |F_B(x) - Phi(x)| over [-8, 8], computed exactly between
// consecutive order statistics (samples outside are clipped to the window).
double wasserstein1_to_normal(std::span<const double> samples);

// Centers and scales z so that sum z = 0 and sum z^2 = 1.
std::vector<double> normalize_population(std::span<const double> z);

struct RosenPath {
  std::vector<double> z;
  std::vector<double> grid;
  std::vector<double> values;  // Z_N(t) = sum_{pi(i) <= ceil(N t)} z_i
};

// z must already be normalized (see normalize_population).
RosenPath rosen_path(std::span<const double> z, const Permutation& pi, std::span<const double> grid);

// ceil(N t) with a small guard against representation error (N * 0.25 etc.).
std::size_t rosen_index(std::size_t n_total, double t);

// Var Z_N(k/N) for normalized z, obtained as k^2 Var(abar_{k, pi}).
double rosen_variance(std::span<const double> z, std::size_t k);
// Cov(Z_N(k/N), Z_N(l/N)) = min(k,l) (N - max(k,l)) / (N (N - 1)).
double rosen_covariance(std::size_t n_total, std::size_t k, std::size_t l);

}  // namespace permstat
