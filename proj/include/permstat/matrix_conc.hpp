#pragma once

#include <cstddef>
#include <vector>

#include "permstat/comb_moments.hpp"
#include "permstat/concentration.hpp"
#include "permstat/linalg.hpp"
#include "permstat/monte_carlo.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

// N x N array of d x d symmetric matrices, stored row-major by (i, j).
class SymMatrixFamily {
 public:
  SymMatrixFamily(std::size_t n, std::vector<Matrix> blocks);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  const Matrix& at(std::size_t i, std::size_t j) const { return blocks_[i * n_ + j]; }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  double m_bound() const { return m_bound_; }
  double sigma2() const { return sigma2_; }
  bool centered() const { return centered_; }
  // Largest entry magnitude across blocks; reference scale for tolerances.
  double scale() const { return scale_; }
  Matrix total() const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<Matrix> blocks_;
  double m_bound_ = 0.0;
  double sigma2_ = 0.0;
  double scale_ = 0.0;
  bool centered_ = false;
};

SymMatrixFamily center_family(const SymMatrixFamily& f);

// d = 1 family with A_{i,j} = a(i, j).
SymMatrixFamily scalar_family(const Matrix& a);

// Entries of each block uniform on [-1, 1], symmetrized by mirroring.
SymMatrixFamily random_sym_family(std::size_t n, std::size_t d, RngState rng);

Matrix matrix_comb_sum(const SymMatrixFamily& f, const Permutation& pi);
Matrix matrix_comb_sum_zero_based(const SymMatrixFamily& f, std::span<const std::uint32_t> map);

enum class MatrixBoundKind { Hoeffding, Bernstein };

TailBoundSpec matrix_bound_spec(MatrixBoundKind kind, const SymMatrixFamily& f);

// Throws InvalidArgument for an uncentered family or t < 0.
double matrix_tail_bound(MatrixBoundKind kind, const SymMatrixFamily& f, double t);

// MC survival of the operator norm of the combinatorial sum.
EmpiricalTail matrix_op_norm_tail(const SymMatrixFamily& f, std::span<const double> thresholds, const McConfig& cfg);

}  // namespace permstat
