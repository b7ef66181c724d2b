#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "permstat/linalg.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Score matrix A = [a_ij] together with its doubly centered version
//   d_ij = a_ij - a_.j - a_i. + a_..
// and the features every bound consumes:
//   mu     = (1/N) sum a_ij            (= E Y)
//   sigma2 = sum d_ij^2 / (N - 1)      (= Var Y)
//   b_max  = max |d_ij|
//   d3     = sum |d_ij|^3, d4 = sum d_ij^4.
// Immutable after construction.
class PermMatrix {
 public:
  // Throws InvalidSize for N < 2 and DataError for non-square or non-finite input.
  explicit PermMatrix(Matrix a);

  [[nodiscard]] std::size_t size() const noexcept { return a_.rows(); }
  [[nodiscard]] const Matrix& a() const noexcept { return a_; }
  [[nodiscard]] const Matrix& d() const noexcept { return d_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double sigma2() const noexcept { return sigma2_; }
  [[nodiscard]] double b_max() const noexcept { return b_max_; }
  [[nodiscard]] double d3() const noexcept { return d3_; }
  [[nodiscard]] double d4() const noexcept { return d4_; }

  // Y = sum_i a_{i, pi(i)}.
  [[nodiscard]] double eval(const Permutation& pi) const;
  // sum_i d_{i, pi(i)} = Y - mu.
  [[nodiscard]] double eval_centered(const Permutation& pi) const;
  // Same as eval on a raw 0-based map; no size check.
  [[nodiscard]] double eval_zero_based(std::span<const std::uint32_t> map) const noexcept;

 private:
  Matrix a_;
  Matrix d_;
  double mu_ = 0.0;
  double sigma2_ = 0.0;
  double b_max_ = 0.0;
  double d3_ = 0.0;
  double d4_ = 0.0;
};

// Doubly centered matrix of a square input.
Matrix double_center(const Matrix& a);

double comb_sum_eval(const PermMatrix& m, const Permutation& pi);
Moments comb_sum_moments(const PermMatrix& m);

// W = sum_{i=1}^N a_{pi(i), pi(i+1)} with pi(N+1) = pi(1).
double oscillation_sum(const Matrix& a, const Permutation& pi);
// Closed-form mean and variance of W; requires N >= 3.
Moments oscillation_moments(const PermMatrix& m);

struct SurveyMoments {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> covariance;
};

// Moments of the sample mean of n draws without replacement from `a`, and
// its covariance with the paired sample mean of `b` when supplied.
SurveyMoments survey_mean_moments(std::span<const double> a, std::size_t n,
                                  std::optional<std::span<const double>> b = std::nullopt);

// N x N array of m-vectors a_{ij}; mean vector and covariance of
// Y = sum_i a_{i, pi(i)}.
class VectorPermMatrix {
 public:
  // entries[i * N + j] is the vector a_{ij}; all must have the same length.
  VectorPermMatrix(std::size_t n, std::vector<std::vector<double>> entries);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return m_; }
  [[nodiscard]] std::span<const double> entry(std::size_t i, std::size_t j) const noexcept {
    return {values_.data() + (i * n_ + j) * m_, m_};
  }
  [[nodiscard]] const std::vector<double>& mu() const noexcept { return mu_; }
  [[nodiscard]] const Matrix& sigma() const noexcept { return sigma_; }

  [[nodiscard]] std::vector<double> eval(const Permutation& pi) const;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> values_;
  std::vector<double> mu_;
  Matrix sigma_;
};

struct VectorMoments {
  std::vector<double> mean;
  Matrix covariance;
};

VectorMoments multivariate_moments(const VectorPermMatrix& v);

// Built-in score matrices (1-based labels i, j).
Matrix footrule_matrix(std::size_t n);          // |i - j|
Matrix rho_matrix(std::size_t n);               // i * j
Matrix squared_distance_matrix(std::size_t n);  // (i - j)^2
Matrix rank_one_matrix(std::span<const double> a, std::span<const double> b);
// a_i = i^2, b_j = j.
Matrix rank_one_builtin(std::size_t n);
// Integer entries uniform on [lo, hi].
Matrix random_integer_matrix(std::size_t n, RngState state, int lo = 0, int hi = 9);

}  // namespace permstat
