#include "permstat/matrix_conc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "permstat/error.hpp"

namespace permstat {

SymMatrixFamily::SymMatrixFamily(std::size_t n, std::vector<Matrix> blocks) : n_(n), blocks_(std::move(blocks)) {
  if (n < 1) throw InvalidSize("matrix family needs N >= 1");
  if (blocks_.size() != n * n) throw DataError("matrix family needs N^2 blocks");
  d_ = blocks_.front().rows();
  if (d_ < 1) throw InvalidSize("matrix family needs d >= 1");
  if (d_ > kMaxJacobiDimension) throw InvalidSize("matrix dimension exceeds the eigensolver cap");
  for (const Matrix& b : blocks_) {
    if (b.rows() != d_ || b.cols() != d_) throw DataError("matrix family blocks have inconsistent dimensions");
    for (double v : b.data()) {
      if (!std::isfinite(v)) throw DataError("matrix family contains a non-finite entry");
    }
    scale_ = std::max(scale_, b.max_abs());
  }
  const double tol = 1e-12 * std::max(scale_, 1.0);
  Matrix sq(d_, d_);
  for (const Matrix& b : blocks_) {
    if (asymmetry(b) > tol) throw InvalidArgument("matrix family blocks must be symmetric");
    m_bound_ = std::max(m_bound_, op_norm_sym(b));
    sq += b * b;
  }
  // Products of symmetric blocks are symmetric up to rounding.
  sq = (sq + sq.transpose()) * 0.5;
  sigma2_ = op_norm_sym(sq) / static_cast<double>(n_);
  centered_ = total().max_abs() <= 1e-10 * std::max(scale_, 1.0) * static_cast<double>(n_ * n_);
}

Matrix SymMatrixFamily::total() const {
  Matrix s(d_, d_);
  for (const Matrix& b : blocks_) s += b;
  return s;
}

SymMatrixFamily center_family(const SymMatrixFamily& f) {
  const std::size_t n = f.size();
  const Matrix shift = f.total() * (1.0 / static_cast<double>(n * n));
  std::vector<Matrix> out;
  out.reserve(n * n);
  for (const Matrix& b : f.blocks()) out.push_back(b - shift);
  return SymMatrixFamily(n, std::move(out));
}

SymMatrixFamily scalar_family(const Matrix& a) {
  if (a.rows() != a.cols()) throw DataError("score matrix must be square");
  std::vector<Matrix> blocks;
  blocks.reserve(a.rows() * a.cols());
  for (double v : a.data()) blocks.push_back(Matrix(1, 1, v));
  return SymMatrixFamily(a.rows(), std::move(blocks));
}

SymMatrixFamily random_sym_family(std::size_t n, std::size_t d, RngState state) {
  Rng rng(state);
  std::vector<Matrix> blocks;
  blocks.reserve(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    Matrix b(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = r; c < d; ++c) {
        b(r, c) = 2.0 * rng.uniform01() - 1.0;
        b(c, r) = b(r, c);
      }
    }
    blocks.push_back(std::move(b));
  }
  return SymMatrixFamily(n, std::move(blocks));
}

Matrix matrix_comb_sum_zero_based(const SymMatrixFamily& f, std::span<const std::uint32_t> map) {
  if (map.size() != f.size()) throw InvalidSize("permutation size does not match the matrix family");
  Matrix s(f.dim(), f.dim());
  for (std::size_t i = 0; i < map.size(); ++i) s += f.at(i, map[i]);
  return s;
}

Matrix matrix_comb_sum(const SymMatrixFamily& f, const Permutation& pi) {
  return matrix_comb_sum_zero_based(f, pi.zero_based());
}

TailBoundSpec matrix_bound_spec(MatrixBoundKind kind, const SymMatrixFamily& f) {
  if (!f.centered()) throw InvalidArgument("matrix tail bounds need a centered family");
  return kind == MatrixBoundKind::Hoeffding ? TailBoundSpec::matrix_hoeffding(f.dim(), f.size(), f.m_bound())
                                            : TailBoundSpec::matrix_bernstein(f.dim(), f.sigma2(), f.m_bound());
}

double matrix_tail_bound(MatrixBoundKind kind, const SymMatrixFamily& f, double t) {
  return tail_bound(matrix_bound_spec(kind, f), t);
}

EmpiricalTail matrix_op_norm_tail(const SymMatrixFamily& f, std::span<const double> thresholds, const McConfig& cfg) {
  const std::size_t n = f.size();
  return empirical_tail(
      [&f, n](Rng& rng) {
        std::vector<std::uint32_t> map(n);
        std::iota(map.begin(), map.end(), 0U);
        shuffle_in_place(map, rng);
        return op_norm_sym(matrix_comb_sum_zero_based(f, map));
      },
      thresholds, cfg);
}

}  // namespace permstat
