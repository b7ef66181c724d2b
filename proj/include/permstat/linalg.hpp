#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace permstat {

// Dense row-major real matrix. Small and deliberately minimal: the library
// only needs products, transposes and symmetric eigendecompositions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  [[nodiscard]] Matrix transpose() const;
  [[nodiscard]] double trace() const;
  [[nodiscard]] double frobenius_norm() const;
  [[nodiscard]] double max_abs() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

// max |a_ij - a_ji|.
double asymmetry(const Matrix& a);

inline constexpr std::size_t kMaxJacobiDimension = 64;

struct SymEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
// 1e-12 * ||S||_F. Throws InvalidArgument on asymmetric input or d > 64.
SymEigen sym_eigen_decompose(const Matrix& s);
std::vector<double> sym_eigen(const Matrix& s);

// max |lambda| of a symmetric matrix.
double op_norm_sym(const Matrix& s);

// Moore-Penrose inverse of a symmetric PSD matrix: eigenvalues at or below
// rel_tol * lambda_max are treated as zero.
Matrix pinv_psd(const Matrix& s, double rel_tol = 1e-10);

// Symmetric square root of a PSD matrix; negative eigenvalues are clipped to 0.
Matrix sqrt_psd(const Matrix& s);

}  // namespace permstat
