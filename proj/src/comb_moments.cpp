#include "permstat/comb_moments.hpp"

#include <cmath>
#include <string>

#include "permstat/error.hpp"

namespace permstat {

Matrix double_center(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      row_mean[i] += a(i, j);
      col_mean[j] += a(i, j);
      grand += a(i, j);
    }
  const auto nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    row_mean[k] /= nn;
    col_mean[k] /= nn;
  }
  grand /= nn * nn;
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = a(i, j) - col_mean[j] - row_mean[i] + grand;
  return d;
}

PermMatrix::PermMatrix(Matrix a) : a_(std::move(a)) {
  if (!a_.square()) throw DataError("score matrix must be square");
  const std::size_t n = a_.rows();
  if (n < 2) throw InvalidSize("score matrix needs N >= 2");
  double total = 0.0;
  for (double v : a_.data()) {
    if (!std::isfinite(v)) throw DataError("score matrix has a non-finite entry");
    total += v;
  }
  mu_ = total / static_cast<double>(n);
  d_ = double_center(a_);
  double ss = 0.0;
  for (double v : d_.data()) {
    const double av = std::abs(v);
    ss += v * v;
    b_max_ = std::max(b_max_, av);
    d3_ += av * av * av;
    d4_ += v * v * v * v;
  }
  sigma2_ = ss / static_cast<double>(n - 1);
}

double PermMatrix::eval_zero_based(std::span<const std::uint32_t> map) const noexcept {
  double y = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) y += a_(i, map[i]);
  return y;
}

double PermMatrix::eval(const Permutation& pi) const {
  if (pi.size() != size()) throw InvalidArgument("permutation size does not match score matrix");
  return eval_zero_based(pi.zero_based());
}

double PermMatrix::eval_centered(const Permutation& pi) const {
  if (pi.size() != size()) throw InvalidArgument("permutation size does not match score matrix");
  double w = 0.0;
  const auto z = pi.zero_based();
  for (std::size_t i = 0; i < z.size(); ++i) w += d_(i, z[i]);
  return w;
}

double comb_sum_eval(const PermMatrix& m, const Permutation& pi) { return m.eval(pi); }

Moments comb_sum_moments(const PermMatrix& m) { return {m.mu(), m.sigma2()}; }

double oscillation_sum(const Matrix& a, const Permutation& pi) {
  if (!a.square() || a.rows() != pi.size()) throw InvalidArgument("permutation size does not match score matrix");
  const auto z = pi.zero_based();
  const std::size_t n = z.size();
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i) w += a(z[i], z[(i + 1) % n]);
  return w;
}

Moments oscillation_moments(const PermMatrix& m) {
  const std::size_t n = m.size();
  if (n < 3) throw InvalidSize("oscillation moments need N >= 3");
  const auto nn = static_cast<double>(n);
  const Matrix& a = m.a();
  const Matrix& d = m.d();

  double off_diag = 0.0;
  double sum_d2 = 0.0;
  double sum_dd_t = 0.0;
  double trace_d = 0.0;
  double sum_diag2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) off_diag += a(i, j);
      sum_d2 += d(i, j) * d(i, j);
      sum_dd_t += d(i, j) * d(j, i);
    }
    trace_d += d(i, i);
    sum_diag2 += d(i, i) * d(i, i);
  }
  Moments out;
  out.mean = off_diag / (nn - 1.0);
  out.variance = sum_d2 / (nn - 2.0) - sum_dd_t / ((nn - 1.0) * (nn - 2.0)) +
                 trace_d * trace_d / ((nn - 1.0) * (nn - 1.0) * (nn - 2.0)) -
                 nn * sum_diag2 / ((nn - 1.0) * (nn - 2.0));
  // Rounding can push an exactly-zero variance slightly negative.
  if (out.variance < 0.0 && out.variance > -1e-10 * (1.0 + sum_d2)) out.variance = 0.0;
  return out;
}

SurveyMoments survey_mean_moments(std::span<const double> a, std::size_t n,
                                  std::optional<std::span<const double>> b) {
  const std::size_t big_n = a.size();
  if (big_n == 0) throw InvalidSize("population must be non-empty");
  if (n < 1 || n > big_n) throw InvalidSize("sample size must satisfy 1 <= n <= N");
  if (b && b->size() != big_n) throw InvalidArgument("paired series must have length N");

  const auto nn = static_cast<double>(big_n);
  const auto ns = static_cast<double>(n);
  auto mean_of = [&](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / nn;
  };
  const double abar = mean_of(a);
  SurveyMoments out;
  out.mean = abar;
  if (big_n == 1) {
    out.variance = 0.0;
    if (b) out.covariance = 0.0;
    return out;
  }
  const double fpc = (nn - ns) / (nn * ns);
  double saa = 0.0;
  for (double x : a) saa += (x - abar) * (x - abar);
  out.variance = fpc * saa / (nn - 1.0);
  if (b) {
    const double bbar = mean_of(*b);
    double sab = 0.0;
    for (std::size_t i = 0; i < big_n; ++i) sab += (a[i] - abar) * ((*b)[i] - bbar);
    out.covariance = fpc * sab / (nn - 1.0);
  }
  return out;
}

VectorPermMatrix::VectorPermMatrix(std::size_t n, std::vector<std::vector<double>> entries) : n_(n) {
  if (n < 2) throw InvalidSize("vector score matrix needs N >= 2");
  if (entries.size() != n * n) throw InvalidArgument("expected N*N vector entries");
  m_ = entries.front().size();
  if (m_ == 0) throw InvalidArgument("entry vectors must be non-empty");
  values_.reserve(n * n * m_);
  for (const auto& e : entries) {
    if (e.size() != m_) throw InvalidArgument("entry vectors have mismatched dimensions");
    for (double v : e) {
      if (!std::isfinite(v)) throw DataError("vector score matrix has a non-finite entry");
      values_.push_back(v);
    }
  }

  // Center each coordinate separately, then Sigma = sum d d^T / (N - 1).
  mu_.assign(m_, 0.0);
  sigma_ = Matrix(m_, m_);
  std::vector<Matrix> centered;
  centered.reserve(m_);
  for (std::size_t c = 0; c < m_; ++c) {
    Matrix coord(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) coord(i, j) = entry(i, j)[c];
    double total = 0.0;
    for (double v : coord.data()) total += v;
    mu_[c] = total / static_cast<double>(n);
    centered.push_back(double_center(coord));
  }
  for (std::size_t r = 0; r < m_; ++r)
    for (std::size_t c = r; c < m_; ++c) {
      double s = 0.0;
      const auto dr = centered[r].data();
      const auto dc = centered[c].data();
      for (std::size_t k = 0; k < dr.size(); ++k) s += dr[k] * dc[k];
      sigma_(r, c) = sigma_(c, r) = s / static_cast<double>(n - 1);
    }
}

std::vector<double> VectorPermMatrix::eval(const Permutation& pi) const {
  if (pi.size() != n_) throw InvalidArgument("permutation size does not match score matrix");
  std::vector<double> y(m_, 0.0);
  const auto z = pi.zero_based();
  for (std::size_t i = 0; i < n_; ++i) {
    const auto e = entry(i, z[i]);
    for (std::size_t c = 0; c < m_; ++c) y[c] += e[c];
  }
  return y;
}

VectorMoments multivariate_moments(const VectorPermMatrix& v) { return {v.mu(), v.sigma()}; }

Matrix footrule_matrix(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
  return a;
}

Matrix rho_matrix(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<double>(i + 1) * static_cast<double>(j + 1);
  return a;
}

Matrix squared_distance_matrix(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = static_cast<double>(i) - static_cast<double>(j);
      a(i, j) = diff * diff;
    }
  return a;
}

Matrix rank_one_matrix(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("rank-one factors must have equal length");
  Matrix m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

Matrix rank_one_builtin(std::size_t n) {
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>((i + 1) * (i + 1));
    b[i] = static_cast<double>(i + 1);
  }
  return rank_one_matrix(a, b);
}

Matrix random_integer_matrix(std::size_t n, RngState state, int lo, int hi) {
  if (hi < lo) throw InvalidArgument("random matrix range is empty");
  Rng rng(state);
  Matrix a(n, n);
  const auto width = static_cast<std::uint64_t>(hi - lo + 1);
  for (double& v : a.data()) v = static_cast<double>(lo + static_cast<int>(rng.bounded(width)));
  return a;
}

}  // namespace permstat
