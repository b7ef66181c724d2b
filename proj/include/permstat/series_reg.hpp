#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "permstat/linalg.hpp"
#include "permstat/monte_carlo.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

enum class BasisKind { Polynomial, PiecewiseConstant };

struct BasisSpec {
  BasisKind kind = BasisKind::Polynomial;
  std::size_t k = 1;
  std::vector<double> knots;  // piecewise only; k = knots.size() - 1 cells

  static BasisSpec polynomial(std::size_t k);
  static BasisSpec piecewise_constant(std::vector<double> knots);
};

// Polynomial: (1, x, ..., x^{K-1}). Piecewise: one-hot over [k_j, k_{j+1}),
// with the last cell closed. Throws InvalidArgument outside the knot range.
std::vector<double> basis_eval(const BasisSpec& spec, double x);

// N x K matrix whose i-th row is basis_eval(spec, x_i).
Matrix design_matrix(const BasisSpec& spec, std::span<const double> x);

struct SeriesFit {
  std::vector<double> beta;
  Matrix q;
  double lambda_min = 0.0;
  double zeta = 0.0;  // max row norm of the design
  bool rank_deficient = false;
};

// Least squares on the rows selected by the mask, or all rows when null.
SeriesFit fit_design(const Matrix& p, std::span<const double> y, const SampleMask* mask = nullptr);

SeriesFit population_fit(std::span<const double> x, std::span<const double> y, const BasisSpec& spec);
SeriesFit sample_fit(std::span<const double> x, std::span<const double> y, const SampleMask& mask,
                     const BasisSpec& spec);

// (beta_hat - beta)' Q (beta_hat - beta) with Q from the population fit.
double reg_loss(const SeriesFit& fit_hat, const SeriesFit& fit_pop);

struct RegDiagnostics {
  double lambda_k = 0.0;
  double zeta_k = 0.0;
  double a_n = 0.0;
  double b_n2 = 0.0;
  double gamma_n = 0.0;
  double envelope = 0.0;  // (A_N^2 gamma_N + B_N^2) / lambda_K
};

// Throws DegenerateInput when the population design is rank deficient.
RegDiagnostics reg_diagnostics(std::span<const double> x, std::span<const double> y, const BasisSpec& spec,
                               std::size_t n);

struct LossRow {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;
  double envelope = 0.0;
  std::size_t rank_deficient = 0;  // samples whose design needed the pseudoinverse
};

// MC loss of the sample fit at each n; row r uses stream cfg.rng.substream(r).
std::vector<LossRow> loss_experiment(std::span<const double> x, std::span<const double> y, const BasisSpec& spec,
                                     std::span<const std::size_t> n_grid, const McConfig& cfg);

std::string to_string(BasisKind kind);

}  // namespace permstat
