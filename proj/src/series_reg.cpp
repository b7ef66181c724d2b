#include "permstat/series_reg.hpp"

#include <algorithm>
#include <cmath>

#include "permstat/error.hpp"

namespace permstat {

namespace {

constexpr double kRankTol = 1e-10;

void check_xy(std::span<const double> x, std::span<const double> y) {
  if (x.empty()) throw InvalidSize("regression data must be non-empty");
  if (x.size() != y.size()) throw DataError("x and y must have equal length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("regression data contains a non-finite value");
  }
}

}  // namespace

BasisSpec BasisSpec::polynomial(std::size_t k) {
  if (k < 1) throw InvalidArgument("basis needs K >= 1");
  return {BasisKind::Polynomial, k, {}};
}

BasisSpec BasisSpec::piecewise_constant(std::vector<double> knots) {
  if (knots.size() < 2) throw InvalidArgument("piecewise basis needs at least two knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw InvalidArgument("knots must be strictly increasing");
  }
  const std::size_t k = knots.size() - 1;
  return {BasisKind::PiecewiseConstant, k, std::move(knots)};
}

std::vector<double> basis_eval(const BasisSpec& spec, double x) {
  std::vector<double> out(spec.k, 0.0);
  if (spec.kind == BasisKind::Polynomial) {
    double v = 1.0;
    for (std::size_t j = 0; j < spec.k; ++j, v *= x) out[j] = v;
    return out;
  }
  if (x < spec.knots.front() || x > spec.knots.back()) throw InvalidArgument("x lies outside the knot range");
  const auto it = std::upper_bound(spec.knots.begin(), spec.knots.end(), x);
  const auto cell = std::min<std::size_t>(static_cast<std::size_t>(it - spec.knots.begin()) - 1, spec.k - 1);
  out[cell] = 1.0;
  return out;
}

Matrix design_matrix(const BasisSpec& spec, std::span<const double> x) {
  Matrix p(x.size(), spec.k);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto row = basis_eval(spec, x[i]);
    std::copy(row.begin(), row.end(), p.data().begin() + static_cast<std::ptrdiff_t>(i * spec.k));
  }
  return p;
}

SeriesFit fit_design(const Matrix& p, std::span<const double> y, const SampleMask* mask) {
  const std::size_t n_rows = p.rows();
  const std::size_t k = p.cols();
  if (n_rows == 0 || k == 0) throw InvalidSize("design must be non-empty");
  if (y.size() != n_rows) throw DataError("design and response lengths differ");
  if (mask && mask->n_total != n_rows) throw InvalidSize("sample mask does not match the data size");
  if (mask && mask->n_sample < 1) throw InvalidArgument("sample size must be at least 1");

  SeriesFit fit;
  fit.q = Matrix(k, k);
  std::vector<double> rhs(k, 0.0);
  double used = 0.0;
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (mask && !mask->indicator[i]) continue;
    const auto row = p.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      rhs[a] += y[i] * row[a];
      for (std::size_t b = 0; b < k; ++b) fit.q(a, b) += row[a] * row[b];
    }
    double norm2 = 0.0;
    for (double v : row) norm2 += v * v;
    fit.zeta = std::max(fit.zeta, std::sqrt(norm2));
    used += 1.0;
  }
  fit.q *= 1.0 / used;
  for (double& v : rhs) v /= used;

  const auto eig = sym_eigen(fit.q);
  fit.lambda_min = std::max(eig.back(), 0.0);
  fit.rank_deficient = eig.back() <= kRankTol * std::max(eig.front(), 0.0);
  fit.beta = pinv_psd(fit.q, kRankTol) * std::span<const double>(rhs);
  return fit;
}

SeriesFit population_fit(std::span<const double> x, std::span<const double> y, const BasisSpec& spec) {
  check_xy(x, y);
  return fit_design(design_matrix(spec, x), y);
}

SeriesFit sample_fit(std::span<const double> x, std::span<const double> y, const SampleMask& mask,
                     const BasisSpec& spec) {
  check_xy(x, y);
  return fit_design(design_matrix(spec, x), y, &mask);
}

double reg_loss(const SeriesFit& fit_hat, const SeriesFit& fit_pop) {
  const std::size_t k = fit_pop.beta.size();
  if (fit_hat.beta.size() != k) throw InvalidArgument("fits have different numbers of basis functions");
  std::vector<double> diff(k);
  for (std::size_t j = 0; j < k; ++j) diff[j] = fit_hat.beta[j] - fit_pop.beta[j];
  const auto qd = fit_pop.q * std::span<const double>(diff);
  double loss = 0.0;
  for (std::size_t j = 0; j < k; ++j) loss += diff[j] * qd[j];
  return std::max(loss, 0.0);
}

RegDiagnostics reg_diagnostics(std::span<const double> x, std::span<const double> y, const BasisSpec& spec,
                               std::size_t n) {
  check_xy(x, y);
  if (n < 1 || n > x.size()) throw InvalidArgument("sample size must satisfy 1 <= n <= N");
  const Matrix p = design_matrix(spec, x);
  const SeriesFit pop = fit_design(p, y);
  if (pop.rank_deficient) throw DegenerateInput("population design is rank deficient; lambda_K is zero");

  const std::size_t nt = x.size();
  const std::size_t k = spec.k;
  const auto dn = static_cast<double>(n);
  RegDiagnostics d;
  d.lambda_k = pop.lambda_min;
  d.zeta_k = pop.zeta;
  d.a_n = (1.0 + d.zeta_k / std::sqrt(d.lambda_k)) * std::sqrt(std::log(static_cast<double>(k)) / dn);

  double var_sum = 0.0;
  double mean_norm2 = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < nt; ++i) m += y[i] * p(i, j);
    m /= static_cast<double>(nt);
    double v = 0.0;
    for (std::size_t i = 0; i < nt; ++i) v += (y[i] * p(i, j) - m) * (y[i] * p(i, j) - m);
    var_sum += v / static_cast<double>(nt);
    mean_norm2 += m * m;
  }
  d.b_n2 = var_sum / dn;
  d.gamma_n = 2.0 * (d.b_n2 + mean_norm2);
  d.envelope = (d.a_n * d.a_n * d.gamma_n + d.b_n2) / d.lambda_k;
  return d;
}

std::vector<LossRow> loss_experiment(std::span<const double> x, std::span<const double> y, const BasisSpec& spec,
                                     std::span<const std::size_t> n_grid, const McConfig& cfg) {
  check_xy(x, y);
  const Matrix p = design_matrix(spec, x);
  const SeriesFit pop = fit_design(p, y);
  std::vector<LossRow> rows;
  for (std::size_t r = 0; r < n_grid.size(); ++r) {
    const std::size_t n = n_grid[r];
    LossRow row;
    row.n = n;
    row.envelope = reg_diagnostics(x, y, spec, n).envelope;
    McConfig row_cfg = cfg;
    row_cfg.rng = cfg.rng.substream(r);
    struct Draw {
      double loss = 0.0;
      bool deficient = false;
    };
    const auto draws = mc_collect<Draw>(row_cfg, [&](Rng& rng) {
      const SampleMask mask = sample_without_replacement(x.size(), n, rng);
      const SeriesFit fit = fit_design(p, y, &mask);
      return Draw{reg_loss(fit, pop), fit.rank_deficient};
    });
    std::vector<double> losses;
    losses.reserve(draws.size());
    for (const auto& dr : draws) {
      losses.push_back(dr.loss);
      row.rank_deficient += dr.deficient ? 1 : 0;
    }
    const MeanSe ms = mean_and_se(losses);
    row.mean = ms.mean;
    row.se = ms.se;
    rows.push_back(row);
  }
  return rows;
}

std::string to_string(BasisKind kind) {
  return kind == BasisKind::Polynomial ? "polynomial" : "piecewise";
}

}  // namespace permstat
