#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permstat/comb_moments.hpp"
#include "permstat/monte_carlo.hpp"

namespace permstat {

enum class TailBoundKind {
  CombHoeffdingV1,
  CombHoeffdingV2,
  CombBernstein,
  MatrixHoeffding,
  MatrixBernstein,
  TolstikhinTalagrand,
};

std::string to_string(TailBoundKind kind);

// An analytic upper bound on a right tail, evaluable at any t >= 0.
//
//   CombHoeffdingV1      exp(-t^2 / (4 N B^2 + 4 sigma^2))
//   CombHoeffdingV2      exp(-t^2 / (4 sigma_bar^2 + 4 sigma^2))      (a_ij = a_i b_j)
//   CombBernstein        exp(-t^2 / (12 sigma^2 + 4 sqrt2 B t))
//   MatrixHoeffding      2d exp(-t^2 / (24 N M^2))
//   MatrixBernstein      2d exp(-t^2 / (12 sigma^2 + 4 sqrt2 M t))
//   TolstikhinTalagrand  exp(-n^2 t^2 / (8 N Sigma_F^2))
//
// The scalar kinds bound P(Y - EY >= t), the matrix kinds
// P(||sum A_{i,pi(i)}||_op >= t), and the last one the upward deviation of
// the sup over a finite class from its mean.
struct TailBoundSpec {
  TailBoundKind kind = TailBoundKind::CombHoeffdingV1;
  std::optional<double> sigma2;      // sigma_A^2, matrix sigma^2
  std::optional<double> b_max;       // B_A
  std::optional<double> sigma_bar2;  // rank-one variance proxy
  std::optional<double> m_bound;     // max ||A_ij||_op
  std::optional<double> sigma_f2;    // Sigma_F^2
  std::optional<std::size_t> n_total;
  std::optional<std::size_t> n_sample;
  std::optional<std::size_t> dim;

  static TailBoundSpec comb_hoeffding_v1(const PermMatrix& m);
  static TailBoundSpec comb_hoeffding_v1(double sigma2, double b_max, std::size_t n_total);
  // Features of a_ij = a_i b_j: sigma^2 exactly and sigma_bar^2 through the
  // Cauchy-Schwarz relaxation sqrt(sum (a - abar)^4) sqrt(sum (b - bbar)^4).
  static TailBoundSpec comb_hoeffding_v2(std::span<const double> a, std::span<const double> b);
  static TailBoundSpec comb_bernstein(const PermMatrix& m);
  static TailBoundSpec comb_bernstein(double sigma2, double b_max);
  static TailBoundSpec matrix_hoeffding(std::size_t dim, std::size_t n_total, double m_bound);
  static TailBoundSpec matrix_bernstein(std::size_t dim, double sigma2, double m_bound);
  static TailBoundSpec tolstikhin_talagrand(std::size_t n_sample, std::size_t n_total, double sigma_f2);
};

// Throws InvalidArgument for t < 0 or when a parameter needed by the kind is
// missing. A vanishing denominator gives the prefactor at t = 0 and 0 above.
double tail_bound(const TailBoundSpec& spec, double t);

enum class OrliczKind { BobkovPsi2, BernsteinSerflingPsi1 };

struct OrliczBoundSpec {
  OrliczKind kind = OrliczKind::BobkovPsi2;
  std::size_t n_sample = 1;
  std::size_t n_total = 1;
  double l2_norm = 0.0;   // ||f - P_N f||_{L2(P_N)}
  double sup_norm = 0.0;  // ||f - P_N f||_inf, psi_1 only
};

// Upper bound on the psi_2 (Bobkov) or psi_1 (Bernstein-Serfling) norm of
// (P_{pi,n} - P_N) f:
//   psi_2: sqrt(12/n (1 + N/n)) ||f - P_N f||_2
//   psi_1: 24 sqrt2 / n ||f - P_N f||_inf + sqrt(72 / (n log 2)) ||f - P_N f||_2
double orlicz_bound(const OrliczBoundSpec& spec);

// Plug-in Orlicz norm inf{C > 0 : mean psi_p(|x_i| / C) <= 1} with
// psi_p(x) = exp(x^p) - 1, p in {1, 2}. Bisection to 1e-9 relative, with the
// bracket clipped to [max|x|/50, 50 max|x|]; the clip biases the estimate
// for heavy-tailed samples at small sizes.
double orlicz_norm_estimate(std::span<const double> samples, int p);

struct EmpiricalTail {
  std::vector<double> thresholds;
  std::vector<double> survival;  // P(X >= t)
  std::vector<double> se;        // sqrt(p(1 - p) / B); 0 for exact tails
  std::size_t n_draws = 0;
};

// Survival estimates from i.i.d. draws of sampler(Rng&). Requires B >= 100.
EmpiricalTail empirical_tail(const std::function<double(Rng&)>& sampler, std::span<const double> thresholds,
                             const McConfig& cfg);
EmpiricalTail empirical_tail_from_samples(std::span<const double> samples, std::span<const double> thresholds);
// Exact survival of an equally weighted finite support (SE = 0).
EmpiricalTail exact_tail(std::span<const double> support, std::span<const double> thresholds);

struct DominationRow {
  double t = 0.0;
  double bound = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double slack = 0.0;  // bound - (empirical - 3 se)
  bool pass = false;
};

struct DominationResult {
  std::vector<DominationRow> rows;
  bool pass = true;
};

// PASS at t iff bound(t) >= survival(t) - 3 se(t) - 1e-12.
DominationResult domination_check(const std::function<double(double)>& bound, const EmpiricalTail& emp);
DominationResult domination_check(const TailBoundSpec& spec, const EmpiricalTail& emp, double bound_scale = 1.0);

enum class ConvexOrderMode { Exhaustive, MonteCarlo };

struct ConvexOrderOptions {
  ConvexOrderMode mode = ConvexOrderMode::Exhaustive;
  double subset_cap = 1e6;  // C(N, n)
  double tuple_cap = 1e7;   // N^n
  McConfig mc{};
};

struct ConvexOrderResult {
  double e_without = 0.0;  // E f(sum of n draws without replacement)
  double e_with = 0.0;     // E f(sum of n i.i.d. draws with replacement)
  double tolerance = 0.0;
  bool pass = false;
};

ConvexOrderResult convex_order_check(std::span<const double> z, std::size_t n, const std::function<double(double)>& f,
                                     const ConvexOrderOptions& options = {});

}  // namespace permstat
