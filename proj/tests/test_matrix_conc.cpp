#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "permstat/error.hpp"
#include "permstat/matrix_conc.hpp"

using namespace permstat;

namespace {

SymMatrixFamily diag_family(std::size_t n, const Matrix& a, const Matrix& b) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) blocks.push_back(Matrix::diagonal(std::vector<double>{a(i, j), b(i, j)}));
  return SymMatrixFamily(n, std::move(blocks));
}

}  // namespace

TEST_CASE("family validation") {
  CHECK_THROWS_AS(SymMatrixFamily(2, std::vector<Matrix>(3, Matrix(2, 2))), DataError);
  std::vector<Matrix> mixed(4, Matrix(2, 2));
  mixed[3] = Matrix(3, 3);
  CHECK_THROWS_AS(SymMatrixFamily(2, mixed), DataError);
  std::vector<Matrix> asym(4, Matrix(2, 2));
  asym[1](0, 1) = 1.0;
  CHECK_THROWS_AS(SymMatrixFamily(2, asym), InvalidArgument);
}

TEST_CASE("center_family") {
  const PermMatrix f3(footrule_matrix(3));
  const auto fam = scalar_family(f3.d());
  CHECK(fam.centered());
  CHECK(fam.sigma2() == doctest::Approx(40.0 / 27));
  CHECK(fam.m_bound() == doctest::Approx(10.0 / 9));
  const auto again = center_family(fam);
  for (std::size_t k = 0; k < 9; ++k) CHECK(again.blocks()[k](0, 0) == doctest::Approx(fam.blocks()[k](0, 0)));

  const auto constant = center_family(SymMatrixFamily(3, std::vector<Matrix>(9, Matrix{{1.0, 2.0}, {2.0, -4.0}})));
  CHECK(constant.m_bound() == 0.0);
  CHECK(constant.sigma2() == 0.0);
  CHECK(constant.centered());

  const auto raw = random_sym_family(6, 3, RngState{1, 0});
  CHECK_FALSE(raw.centered());
  const auto cen = center_family(raw);
  CHECK(cen.centered());
  CHECK(cen.total().max_abs() <= 1e-12);
}

TEST_CASE("sigma2 and M against direct evaluation") {
  const auto fam = center_family(random_sym_family(5, 2, RngState{2, 0}));
  Matrix sq(2, 2);
  double m = 0.0;
  for (const Matrix& b : fam.blocks()) {
    sq += b * b;
    // 2x2 symmetric spectral radius in closed form.
    const double tr = b(0, 0) + b(1, 1), det = b(0, 0) * b(1, 1) - b(0, 1) * b(0, 1);
    const double disc = std::sqrt(tr * tr / 4 - det);
    m = std::max({m, std::abs(tr / 2 + disc), std::abs(tr / 2 - disc)});
  }
  const double tr = sq(0, 0) + sq(1, 1), det = sq(0, 0) * sq(1, 1) - sq(0, 1) * sq(1, 0);
  CHECK(fam.sigma2() == doctest::Approx((tr / 2 + std::sqrt(tr * tr / 4 - det)) / 5).epsilon(1e-12));
  CHECK(fam.m_bound() == doctest::Approx(m).epsilon(1e-12));
}

TEST_CASE("matrix_comb_sum") {
  const PermMatrix m(random_integer_matrix(5, RngState{3, 0}));
  const auto fam = scalar_family(m.d());
  for_each_permutation(5, [&](const Permutation& p) {
    CHECK(matrix_comb_sum(fam, p)(0, 0) == doctest::Approx(m.eval_centered(p)).epsilon(1e-12));
  });

  const Matrix a = random_integer_matrix(3, RngState{4, 0});
  const Matrix b = footrule_matrix(3);
  const auto dfam = diag_family(3, a, b);
  for_each_permutation(3, [&](const Permutation& p) {
    const Matrix s = matrix_comb_sum(dfam, p);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 1; i <= 3; ++i) {
      sa += a(i - 1, p(i) - 1);
      sb += b(i - 1, p(i) - 1);
    }
    CHECK(s(0, 0) == sa);
    CHECK(s(1, 1) == sb);
    CHECK(s(0, 1) == 0.0);
  });

  const auto cen = center_family(random_sym_family(4, 2, RngState{5, 0}));
  Matrix mean(2, 2);
  for_each_permutation(4, [&](const Permutation& p) { mean += matrix_comb_sum(cen, p) * (1.0 / 24); });
  CHECK(mean.max_abs() <= 1e-12);
  CHECK_THROWS_AS(matrix_comb_sum(cen, Permutation::identity(3)), InvalidSize);
}

TEST_CASE("matrix_tail_bound") {
  const auto cen = center_family(random_sym_family(10, 3, RngState{6, 0}));
  CHECK(matrix_tail_bound(MatrixBoundKind::Hoeffding, cen, 0.0) == 6.0);
  CHECK(matrix_tail_bound(MatrixBoundKind::Bernstein, cen, 0.0) == 6.0);
  const double t = 3.0;
  CHECK(matrix_tail_bound(MatrixBoundKind::Hoeffding, cen, t) ==
        doctest::Approx(6.0 * std::exp(-t * t / (24.0 * 10 * cen.m_bound() * cen.m_bound()))));
  CHECK_THROWS_AS(matrix_tail_bound(MatrixBoundKind::Bernstein, random_sym_family(4, 2, RngState{7, 0}), 1.0),
                  InvalidArgument);
  CHECK_THROWS_AS(matrix_tail_bound(MatrixBoundKind::Bernstein, cen, -1.0), InvalidArgument);

  // d = 1 reduction and the footrule fixture.
  const auto f3 = scalar_family(PermMatrix(footrule_matrix(3)).d());
  for (double s : {0.0, 0.5, 2.0, 7.0}) {
    CHECK(std::abs(matrix_tail_bound(MatrixBoundKind::Bernstein, f3, s) -
                   2.0 * tail_bound(TailBoundSpec::comb_bernstein(f3.sigma2(), f3.m_bound()), s)) <= 1e-12);
  }
  const double expected = 2.0 * std::exp(-4.0 / (12.0 * 40 / 27 + 4 * std::sqrt(2.0) * (10.0 / 9) * 2));
  CHECK(matrix_tail_bound(MatrixBoundKind::Bernstein, f3, 2.0) == doctest::Approx(expected).epsilon(1e-14));
  std::vector<double> support;
  const PermMatrix pm(footrule_matrix(3));
  for_each_permutation(3, [&](const Permutation& p) { support.push_back(std::abs(pm.eval_centered(p))); });
  const std::vector<double> ts{2.0};
  CHECK(domination_check(matrix_bound_spec(MatrixBoundKind::Bernstein, f3), exact_tail(support, ts)).pass);
}

TEST_CASE("matrix bounds dominate the MC tail") {
  for (std::size_t d : {2u, 3u}) {
    for (std::size_t n : {20u, 50u}) {
      const auto fam = center_family(random_sym_family(n, d, RngState{100 + n, d}));
      const double s = std::sqrt(fam.sigma2());
      const std::vector<double> grid{0.5 * s, s, 2 * s, 3 * s, 4 * s};
      const auto emp = matrix_op_norm_tail(fam, grid, McConfig{20000, RngState{7, n * d}, 0});
      CHECK(domination_check(matrix_bound_spec(MatrixBoundKind::Hoeffding, fam), emp).pass);
      CHECK(domination_check(matrix_bound_spec(MatrixBoundKind::Bernstein, fam), emp).pass);
    }
  }
}
