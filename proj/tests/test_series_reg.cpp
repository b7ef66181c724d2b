#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "permstat/error.hpp"
#include "permstat/series_reg.hpp"

using namespace permstat;

namespace {

SampleMask mask_from_subset(std::size_t n_total, std::span<const std::size_t> zero_based) {
  std::vector<std::size_t> sel;
  for (std::size_t i : zero_based) sel.push_back(i + 1);
  return SampleMask::from_selected(n_total, sel);
}

const std::vector<double> kX4{1, 2, 3, 4};
const std::vector<double> kLin{3, 5, 7, 9};

}  // namespace

TEST_CASE("basis_eval") {
  CHECK(basis_eval(BasisSpec::polynomial(2), 3.0) == std::vector<double>{1, 3});
  CHECK(basis_eval(BasisSpec::polynomial(4), 2.0) == std::vector<double>{1, 2, 4, 8});
  const auto pc = BasisSpec::piecewise_constant({0, 1, 2});
  CHECK(pc.k == 2);
  CHECK(basis_eval(pc, 0.5) == std::vector<double>{1, 0});
  CHECK(basis_eval(pc, 1.0) == std::vector<double>{0, 1});
  CHECK(basis_eval(pc, 2.0) == std::vector<double>{0, 1});
  CHECK_THROWS_AS(basis_eval(pc, 2.5), InvalidArgument);
  CHECK_THROWS_AS(basis_eval(pc, -0.1), InvalidArgument);
  CHECK_THROWS_AS(BasisSpec::piecewise_constant({0, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(BasisSpec::polynomial(0), InvalidArgument);
  CHECK(population_fit(kX4, kLin, BasisSpec::polynomial(2)).zeta == doctest::Approx(std::sqrt(17.0)));
}

TEST_CASE("population_fit") {
  const auto fit = population_fit(kX4, kLin, BasisSpec::polynomial(2));
  CHECK(fit.beta[0] == doctest::Approx(1.0));
  CHECK(fit.beta[1] == doctest::Approx(2.0));
  CHECK(fit.q(0, 0) == 1.0);
  CHECK(fit.q(0, 1) == 2.5);
  CHECK(fit.q(1, 1) == 7.5);
  CHECK(fit.lambda_min == doctest::Approx((8.5 - std::sqrt(67.25)) / 2).epsilon(1e-12));
  CHECK(fit.lambda_min == doctest::Approx(0.1497).epsilon(1e-3));
  CHECK_FALSE(fit.rank_deficient);

  const std::vector<double> y{1, 2, 3, 10};
  CHECK(population_fit(kX4, y, BasisSpec::polynomial(1)).beta[0] == doctest::Approx(4.0));
  CHECK_THROWS_AS(population_fit(std::vector<double>{}, std::vector<double>{}, BasisSpec::polynomial(1)), InvalidSize);
  CHECK_THROWS_AS(population_fit(kX4, std::vector<double>{1, 2}, BasisSpec::polynomial(1)), DataError);
}

TEST_CASE("sample_fit") {
  const auto pop = population_fit(kX4, kLin, BasisSpec::polynomial(2));
  for (std::size_t n = 2; n <= 4; ++n) {
    for_each_subset(4, n, [&](std::span<const std::size_t> s) {
      const auto fit = sample_fit(kX4, kLin, mask_from_subset(4, s), BasisSpec::polynomial(2));
      CHECK(std::abs(fit.beta[0] - 1.0) <= 1e-10);
      CHECK(std::abs(fit.beta[1] - 2.0) <= 1e-10);
      CHECK(reg_loss(fit, pop) <= 1e-12);
    });
  }
  const std::vector<double> y{0.5, -1.0, 4.0, 2.0};
  const auto full = sample_fit(kX4, y, mask_from_subset(4, std::vector<std::size_t>{0, 1, 2, 3}), BasisSpec::polynomial(2));
  const auto popy = population_fit(kX4, y, BasisSpec::polynomial(2));
  for (std::size_t j = 0; j < 2; ++j) CHECK(full.beta[j] == doctest::Approx(popy.beta[j]).epsilon(1e-12));

  // Only x = 2 sampled: the minimum-norm solution lies along (1, 2).
  const std::vector<double> xd{1, 2, 2, 3};
  const std::vector<double> yd{0, 8, 8, 1};
  const auto deg = sample_fit(xd, yd, SampleMask::from_selected(4, std::vector<std::size_t>{2, 3}), BasisSpec::polynomial(2));
  CHECK(deg.rank_deficient);
  CHECK(deg.beta[0] == doctest::Approx(8.0 / 5));
  CHECK(deg.beta[1] == doctest::Approx(16.0 / 5));
  CHECK_THROWS_AS(sample_fit(kX4, kLin, SampleMask::from_selected(3, std::vector<std::size_t>{1}), BasisSpec::polynomial(2)),
                  InvalidSize);
}

TEST_CASE("reg_loss") {
  const auto pop = population_fit(kX4, kLin, BasisSpec::polynomial(2));
  CHECK(reg_loss(pop, pop) == 0.0);
  SeriesFit shifted = pop;
  shifted.beta[1] += 0.1;
  CHECK(reg_loss(shifted, pop) == doctest::Approx(0.01 * 7.5));
  CHECK_THROWS_AS(reg_loss(population_fit(kX4, kLin, BasisSpec::polynomial(3)), pop), InvalidArgument);
}

TEST_CASE("reg_diagnostics") {
  CHECK(reg_diagnostics(kX4, std::vector<double>(4, 0.0), BasisSpec::polynomial(2), 2).b_n2 == 0.0);
  const auto d1 = reg_diagnostics(kX4, kX4, BasisSpec::polynomial(1), 2);
  CHECK(d1.b_n2 == doctest::Approx(0.625));
  CHECK(d1.a_n == 0.0);  // log 1
  CHECK(d1.gamma_n == doctest::Approx(2.0 * (0.625 + 2.5 * 2.5)));

  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = double(i + 1) / 40;
    y[i] = x[i] * x[i] + 0.1 * std::sin(13.0 * double(i + 1));
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    double prev = 1e300;
    for (std::size_t n : {5u, 10u, 20u, 40u}) {
      const auto d = reg_diagnostics(x, y, BasisSpec::polynomial(k), n);
      CHECK(d.a_n < prev);
      CHECK(d.b_n2 >= 0.0);
      CHECK(d.envelope == doctest::Approx((d.a_n * d.a_n * d.gamma_n + d.b_n2) / d.lambda_k));
      prev = d.a_n;
      if (k < 4) CHECK(d.a_n < reg_diagnostics(x, y, BasisSpec::polynomial(k + 1), n).a_n);
    }
  }
  CHECK_THROWS_AS(reg_diagnostics(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}, BasisSpec::polynomial(2), 2),
                  DegenerateInput);
}

TEST_CASE("expectations over all samples") {
  const std::vector<double> x{0.1, 0.4, 0.5, 0.9, 1.3, 1.7, 2.0};
  const std::vector<double> y{1.0, -0.5, 2.0, 0.3, 1.1, 4.0, -2.0};
  for (std::size_t nt = 3; nt <= 7; ++nt) {
    const auto xs = std::span(x).first(nt);
    const auto ys = std::span(y).first(nt);
    const auto spec = BasisSpec::polynomial(3);
    const auto pop = population_fit(xs, ys, spec);
    const Matrix p = design_matrix(spec, xs);
    std::vector<double> rhs(3, 0.0);
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < 3; ++j) rhs[j] += ys[i] * p(i, j) / double(nt);
    for (std::size_t n = 1; n <= nt; ++n) {
      Matrix qbar(3, 3);
      double dev = 0.0, count = 0.0;
      for_each_subset(nt, n, [&](std::span<const std::size_t> s) {
        const auto fit = sample_fit(xs, ys, mask_from_subset(nt, s), spec);
        qbar += fit.q;
        for (std::size_t j = 0; j < 3; ++j) {
          double r = 0.0;
          for (std::size_t i : s) r += ys[i] * p(i, j) / double(n);
          dev += (r - rhs[j]) * (r - rhs[j]);
        }
        count += 1.0;
      });
      qbar *= 1.0 / count;
      CHECK((qbar - pop.q).max_abs() <= 1e-10 * pop.q.max_abs());
      CHECK(dev / count <= reg_diagnostics(xs, ys, spec, n).b_n2 * (1 + 1e-12));
    }
  }
}

TEST_CASE("loss is invariant to reparameterizing the basis") {
  std::vector<double> x(12), y(12);
  for (std::size_t i = 0; i < 12; ++i) {
    x[i] = double(i) / 4;
    y[i] = std::cos(x[i]) + 0.05 * double(i % 3);
  }
  const Matrix p = design_matrix(BasisSpec::polynomial(3), x);
  const Matrix t{{2.0, 0.5, -1.0}, {0.0, 1.5, 0.3}, {1.0, 0.0, 0.7}};
  const Matrix pt = p * t;
  const auto pop = fit_design(p, y);
  const auto popt = fit_design(pt, y);
  Rng rng(RngState{8, 0});
  for (int rep = 0; rep < 20; ++rep) {
    const auto mask = sample_without_replacement(12, 5, rng);
    const double l1 = reg_loss(fit_design(p, y, &mask), pop);
    const double l2 = reg_loss(fit_design(pt, y, &mask), popt);
    CHECK(std::abs(l1 - l2) <= 1e-8 * std::max(1.0, l1));
  }
}

TEST_CASE("MC loss decays and stays in the calibrated envelope") {
  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = double(i + 1) / 40;
    y[i] = x[i] * x[i] + 0.1 * std::sin(13.0 * double(i + 1));
  }
  const std::vector<std::size_t> grid{10, 20};
  const auto rows = loss_experiment(x, y, BasisSpec::polynomial(2), grid, McConfig{2000, RngState{40, 0}, 0});
  CHECK(rows[0].mean - rows[1].mean > 3 * std::hypot(rows[0].se, rows[1].se));
  const double c = rows[0].mean / rows[0].envelope;
  MESSAGE("calibration constant " << c);
  CHECK(rows[1].mean <= c * rows[1].envelope + 3 * rows[1].se);
}
