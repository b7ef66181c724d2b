#include "permstat/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "permstat/comb_moments.hpp"
#include "permstat/concentration.hpp"
#include "permstat/emp_process.hpp"
#include "permstat/matrix_conc.hpp"
#include "permstat/perm_test.hpp"
#include "permstat/rank_stats.hpp"
#include "permstat/series_reg.hpp"
#include "permstat/stein_clt.hpp"

namespace permstat {

namespace {

struct Named {
  std::string name;
  Matrix a;
};

std::vector<Named> corpus(std::size_t n, std::uint64_t seed) {
  std::vector<Named> out{{"footrule", footrule_matrix(n)}, {"rho", rho_matrix(n)}, {"rank1", rank_one_builtin(n)}};
  for (std::uint64_t k = 0; k < 3; ++k) {
    out.push_back({"random" + std::to_string(k), random_integer_matrix(n, RngState{seed, 1000 + k})});
  }
  return out;
}

// Relative error whose denominator never drops below `scale`, so exact
// zeros (a variance that vanishes) are judged against the size of the data.
double rel_gap(double a, double b, double scale) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

struct PopMoments {
  double mean = 0.0;
  double var = 0.0;
};

PopMoments pop_moments(const std::vector<double>& v) {
  PopMoments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size());
  return m;
}

McConfig mc(const AcceptanceConfig& cfg, std::size_t draws, std::uint64_t stream) {
  return McConfig{draws, RngState{cfg.seed, stream}, cfg.threads};
}

double centered_draw(const PermMatrix& m, Rng& rng) {
  std::vector<std::uint32_t> map(m.size());
  std::iota(map.begin(), map.end(), 0U);
  shuffle_in_place(map, rng);
  return m.eval_zero_based(map) - m.mu();
}

std::vector<double> sigma_grid(double sigma) {
  return {0.5 * sigma, sigma, 2.0 * sigma, 3.0 * sigma, 4.0 * sigma};
}

double min_slack(const DominationResult& r) {
  double s = r.rows.front().slack;
  for (const auto& row : r.rows) s = std::min(s, row.slack);
  return s;
}

}  // namespace

Json acceptance_config_json(const AcceptanceConfig& cfg) { return {{"seed", cfg.seed}, {"reps", cfg.reps}}; }

CheckRecord criterion_exact_moments(const AcceptanceConfig& cfg) {
  constexpr double kTol = 1e-10;
  double worst_comb = 0.0;
  double worst_osc = 0.0;
  double worst_survey = 0.0;
  std::size_t cases = 0;
  for (std::size_t n = 3; n <= 7; ++n) {
    for (const auto& [name, a] : corpus(n, cfg.seed)) {
      const PermMatrix m(a);
      const double ys_scale = static_cast<double>(n) * a.max_abs();
      const double vs_scale = ys_scale * ys_scale;
      std::vector<double> ys;
      std::vector<double> os;
      for_each_permutation(n, [&](const Permutation& p) {
        ys.push_back(m.eval(p));
        if (n <= 6) os.push_back(oscillation_sum(a, p));
      });
      const auto e = pop_moments(ys);
      const auto mom = comb_sum_moments(m);
      worst_comb = std::max({worst_comb, rel_gap(e.mean, mom.mean, ys_scale), rel_gap(e.var, mom.variance, vs_scale)});
      ++cases;
      if (n <= 6) {
        const auto eo = pop_moments(os);
        const auto om = oscillation_moments(m);
        worst_osc = std::max({worst_osc, rel_gap(eo.mean, om.mean, ys_scale), rel_gap(eo.var, om.variance, vs_scale)});
        ++cases;
      }
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = a(i, 0);
      for (std::size_t k = 1; k <= n; ++k) {
        std::vector<double> means;
        for_each_subset(n, k, [&](std::span<const std::size_t> s) {
          double t = 0.0;
          for (std::size_t i : s) t += z[i];
          means.push_back(t / static_cast<double>(k));
        });
        const auto es = pop_moments(means);
        const auto sm = survey_mean_moments(z, k);
        const double s = a.max_abs();
        worst_survey = std::max({worst_survey, rel_gap(es.mean, sm.mean, s), rel_gap(es.var, sm.variance, s * s)});
        ++cases;
      }
    }
  }
  CheckRecord r;
  r.name = "1_exact_moment_oracle";
  r.inputs = {{"matrices", {"footrule", "rho", "rank1", "random0", "random1", "random2"}},
              {"comb_sum_N", {3, 7}},
              {"oscillation_N", {3, 6}},
              {"survey_N", {3, 7}},
              {"cases", cases}};
  r.analytic = {{"tolerance_rel", kTol}, {"zero_floor", "N max|a| for means, its square for variances"}};
  r.empirical = {{"max_rel_error_comb_sum", worst_comb},
                 {"max_rel_error_oscillation", worst_osc},
                 {"max_rel_error_survey", worst_survey}};
  r.pass = worst_comb <= kTol && worst_osc <= kTol && worst_survey <= kTol;
  return r;
}

CheckRecord criterion_rank_moments(const AcceptanceConfig&) {
  bool ok = true;
  Json rows = Json::array();
  for (std::size_t n = 3; n <= 8; ++n) {
    const double target = static_cast<double>(n * n - 1) / 3.0;
    const Permutation id = Permutation::identity(n);
    double foot = 0.0;
    double xi = 0.0;
    std::vector<double> wil(n, 0.0);
    double count = 0.0;
    for_each_permutation(n, [&](const Permutation& p) {
      foot += rank_statistic(RankStat::footrule(), p, id);
      xi += rank_statistic(RankStat::chatterjee_xi(), p, id);
      for (std::size_t m = 1; m < n; ++m) wil[m] += rank_statistic(RankStat::wilcoxon(m), p, id);
      count += 1.0;
    });
    foot /= count;
    xi /= count;
    const double foot_closed = rank_moments(RankStat::footrule(), n).mean;
    const double xi_closed = rank_moments(RankStat::chatterjee_xi(), n).mean;
    bool row_ok = foot == target && xi == target && foot_closed == target && xi_closed == target;
    for (std::size_t m = 1; m < n; ++m) {
      const double w_target = static_cast<double>(m * (n + 1)) / 2.0;
      row_ok = row_ok && wil[m] / count == w_target && rank_moments(RankStat::wilcoxon(m), n).mean == w_target;
    }
    ok = ok && row_ok;
    rows.push_back({{"N", n},
                    {"target", target},
                    {"footrule_enumerated", foot},
                    {"xi_enumerated", xi},
                    {"footrule_closed_form", foot_closed},
                    {"xi_closed_form", xi_closed},
                    {"wilcoxon_all_m_exact", row_ok}});
  }
  CheckRecord r;
  r.name = "2_rank_statistic_moments";
  r.inputs = {{"N", {3, 8}}, {"statistics", {"footrule", "chatterjee_xi", "wilcoxon"}}};
  r.analytic = {{"mean_formula", "(N^2-1)/3; wilcoxon m(N+1)/2"}, {"tolerance", 0.0}};
  r.empirical = rows;
  r.pass = ok;
  return r;
}

CheckRecord criterion_stein_linearity(const AcceptanceConfig& cfg) {
  constexpr double kTol = 1e-12;
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const auto& [name, a] : corpus(n, cfg.seed)) {
      worst = std::max(worst, exchangeable_linearity_defect(PermMatrix(a)));
      ++cases;
    }
  }
  CheckRecord r;
  r.name = "3_stein_linearity";
  r.inputs = {{"matrices", {"footrule", "rho", "rank1", "random0", "random1", "random2"}},
              {"N", {2, 6}},
              {"cases", cases}};
  r.analytic = {{"tolerance", kTol}};
  r.empirical = {{"max_defect", worst}};
  r.pass = worst <= kTol;
  return r;
}

CheckRecord criterion_tail_domination(const AcceptanceConfig& cfg) {
  Json rows = Json::array();
  bool ok = true;
  std::uint64_t stream = 4000;
  auto record = [&](const std::string& family, std::size_t n, std::size_t d, const std::string& bound,
                    const DominationResult& res) {
    ok = ok && res.pass;
    rows.push_back({{"family", family}, {"N", n}, {"d", d}, {"bound", bound}, {"min_slack", min_slack(res)},
                    {"pass", res.pass}});
  };
  for (std::size_t n : {20u, 50u}) {
    std::vector<Named> scalars{{"footrule", footrule_matrix(n)},
                               {"rank1", rank_one_builtin(n)},
                               {"random0", random_integer_matrix(n, RngState{cfg.seed, 1000})}};
    for (const auto& [name, a] : scalars) {
      const PermMatrix m(a);
      const auto grid = sigma_grid(std::sqrt(m.sigma2()));
      const auto emp = empirical_tail([&m](Rng& rng) { return centered_draw(m, rng); }, grid,
                                      mc(cfg, cfg.reps, stream++));
      record(name, n, 1, "comb_hoeffding_v1", domination_check(TailBoundSpec::comb_hoeffding_v1(m), emp));
      record(name, n, 1, "comb_bernstein", domination_check(TailBoundSpec::comb_bernstein(m), emp));
      if (name == "rank1") {
        std::vector<double> av(n);
        std::vector<double> bv(n);
        for (std::size_t i = 0; i < n; ++i) {
          av[i] = static_cast<double>((i + 1) * (i + 1));
          bv[i] = static_cast<double>(i + 1);
        }
        record(name, n, 1, "comb_hoeffding_v2", domination_check(TailBoundSpec::comb_hoeffding_v2(av, bv), emp));
      }
    }
    for (std::size_t d : {2u, 3u}) {
      const auto fam = center_family(random_sym_family(n, d, RngState{cfg.seed, 4100 + 10 * n + d}));
      const auto grid = sigma_grid(std::sqrt(fam.sigma2()));
      const auto emp = matrix_op_norm_tail(fam, grid, mc(cfg, cfg.reps, stream++));
      record("random_sym", n, d, "matrix_hoeffding",
             domination_check(matrix_bound_spec(MatrixBoundKind::Hoeffding, fam), emp));
      record("random_sym", n, d, "matrix_bernstein",
             domination_check(matrix_bound_spec(MatrixBoundKind::Bernstein, fam), emp));
    }
  }
  CheckRecord r;
  r.name = "4_tail_domination";
  r.inputs = {{"N", {20, 50}}, {"grid_in_sigma", {0.5, 1, 2, 3, 4}}, {"B", cfg.reps}};
  r.analytic = {{"rule", "bound >= survival - 3 se"}};
  r.empirical = rows;
  r.pass = ok;
  return r;
}

CheckRecord criterion_clt_rate(const AcceptanceConfig& cfg) {
  const std::vector<std::size_t> grid{20, 50, 200};
  constexpr int kRepeats = 5;
  std::vector<double> ks;
  Json rows = Json::array();
  std::vector<CLTCertificate> certs;
  for (std::size_t n : grid) {
    const PermMatrix m(footrule_matrix(n));
    const double s = std::sqrt(m.sigma2());
    std::vector<double> est;
    for (int e = 0; e < kRepeats; ++e) {
      McConfig c = mc(cfg, cfg.reps, 5000 + n);
      c.rng = c.rng.substream(static_cast<std::uint64_t>(e));
      const auto draws = mc_collect<double>(c, [&](Rng& rng) { return centered_draw(m, rng) / s; });
      est.push_back(ks_distance_to_normal(draws));
    }
    std::sort(est.begin(), est.end());
    ks.push_back(est[kRepeats / 2]);
    certs.push_back(clt_certificate(m));
    rows.push_back({{"N", n}, {"ks_median_of_5", ks.back()}, {"r3", certs.back().r3}, {"ratio", certs.back().ratio}});
  }
  const bool ks_ok = ks[2] < ks[1] && ks[1] < ks[0] && ks[2] < 0.05;
  bool cert_ok = true;
  for (std::size_t i = 1; i < certs.size(); ++i) {
    cert_ok = cert_ok && certs[i].r3 < certs[i - 1].r3 && certs[i].ratio < certs[i - 1].ratio;
  }
  CheckRecord r;
  r.name = "5_clt_rate";
  r.inputs = {{"matrix", "footrule"}, {"N", grid}, {"B", cfg.reps}, {"ks_repeats", kRepeats}};
  r.analytic = {{"ks_limit_at_N200", 0.05}, {"certificates_decreasing", cert_ok}};
  r.empirical = rows;
  r.pass = ks_ok && cert_ok;
  return r;
}

CheckRecord criterion_donsker(const AcceptanceConfig& cfg) {
  std::vector<double> z(100);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = static_cast<double>(i + 1) / 100.0;
  const auto pop = FinitePopulation::scalar(z);
  const std::vector<NamedFunction> fs{NamedFunction::power(1), NamedFunction::power(2)};
  Json rows = Json::array();
  bool ok = true;
  std::uint64_t stream = 6000;
  for (std::size_t a = 0; a < fs.size(); ++a) {
    for (std::size_t b = a; b < fs.size(); ++b) {
      const double exact = donsker_cov(pop, 50, fs[a], fs[b]);
      const auto est = donsker_cov_mc(pop, 50, fs[a], fs[b], mc(cfg, cfg.reps, stream++));
      const bool pass = std::abs(est.mean - exact) <= 3.0 * est.se;
      ok = ok && pass;
      rows.push_back({{"f", fs[a].name}, {"g", fs[b].name}, {"analytic", exact}, {"empirical", est.mean},
                      {"se", est.se}, {"pass", pass}});
    }
  }

  const std::vector<double> base{0.3, -1.2, 2.0, 4.5, 0.0, 1.1, -0.7};
  double worst = 0.0;
  for (std::size_t nt = 2; nt <= 7; ++nt) {
    const auto p = FinitePopulation::scalar(std::span(base).first(nt));
    for (std::size_t n = 1; n <= nt; ++n) {
      for (const auto& f : fs) {
        for (const auto& g : fs) {
          const double fm = population_apply(p, f);
          const double gm = population_apply(p, g);
          double s = 0.0;
          double count = 0.0;
          for_each_subset(nt, n, [&](std::span<const std::size_t> sel) {
            double fa = 0.0;
            double ga = 0.0;
            for (std::size_t i : sel) {
              fa += f.eval(p.point(i), i);
              ga += g.eval(p.point(i), i);
            }
            const double dn = static_cast<double>(n);
            s += dn * (fa / dn - fm) * (ga / dn - gm);
            count += 1.0;
          });
          const double v = donsker_cov(p, n, f, g);
          worst = std::max(worst, std::abs(s / count - v) / std::max(1.0, std::abs(v)));
        }
      }
    }
  }
  ok = ok && worst <= 1e-10;
  CheckRecord r;
  r.name = "6_donsker_covariance";
  r.inputs = {{"N", 100}, {"n", 50}, {"B", cfg.reps}, {"functions", {"id", "id^2"}}, {"enumeration_N", {2, 7}}};
  r.analytic = {{"enumeration_tolerance", 1e-10}};
  r.empirical = {{"monte_carlo", rows}, {"enumeration_max_error", worst}};
  r.pass = ok;
  return r;
}

CheckRecord criterion_rosen(const AcceptanceConfig& cfg) {
  double worst = 0.0;
  for (std::size_t n = 2; n <= 50; ++n) {
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = std::sin(0.9 * static_cast<double>(i)) + static_cast<double>(i % 4);
    const auto z = normalize_population(raw);
    for (std::size_t k = 0; k <= n; ++k) {
      const double nn = static_cast<double>(n);
      const double kk = static_cast<double>(k);
      worst = std::max(worst, std::abs(rosen_variance(z, k) - kk * (nn - kk) / (nn * (nn - 1.0))));
    }
  }

  const std::size_t n = 400;
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = std::sqrt(static_cast<double>(i + 1)) + std::sin(static_cast<double>(i));
  const auto z = normalize_population(raw);
  const std::vector<double> grid{0.25, 0.5};
  const auto prods = mc_collect<double>(mc(cfg, cfg.reps, 7000), [&](Rng& rng) {
    const auto path = rosen_path(z, random_permutation(n, rng), grid);
    return path.values[0] * path.values[1];
  });
  const MeanSe est = mean_and_se(prods);
  const double exact = rosen_covariance(n, rosen_index(n, 0.25), rosen_index(n, 0.5));
  const bool mc_ok = std::abs(est.mean - exact) <= 3.0 * est.se;

  CheckRecord r;
  r.name = "7_rosen_process";
  r.inputs = {{"variance_N", {2, 50}}, {"covariance_N", n}, {"t", grid}, {"B", cfg.reps}};
  r.analytic = {{"variance_tolerance", 1e-12}, {"covariance_exact", exact}, {"bridge_limit", 0.25 * (1.0 - 0.5)}};
  r.empirical = {{"variance_max_error", worst}, {"covariance_mc", est.mean}};
  r.se = est.se;
  r.pass = worst <= 1e-12 && mc_ok;
  return r;
}

CheckRecord criterion_convex_order(const AcceptanceConfig&) {
  bool ok = true;
  std::size_t cases = 0;
  double worst_gap = 0.0;  // most negative e_with - e_without
  for (std::size_t n_total = 2; n_total <= 5; ++n_total) {
    const double nt = static_cast<double>(n_total);
    std::vector<std::vector<double>> pops(2, std::vector<double>(n_total));
    for (std::size_t i = 0; i < n_total; ++i) {
      pops[0][i] = static_cast<double>(i + 1);
      pops[1][i] = 1.3 * (static_cast<double>(i + 1) - (nt + 1.0) / 2.0) + 0.2;
    }
    const std::vector<std::function<double(double)>> fs{[](double x) { return x * x; },
                                                         [](double x) { return std::abs(x); },
                                                         [nt](double x) { return std::exp(x / nt); }};
    for (const auto& z : pops) {
      for (std::size_t n = 1; n <= n_total; ++n) {
        for (const auto& f : fs) {
          const auto res = convex_order_check(z, n, f);
          ok = ok && res.pass;
          worst_gap = std::min(worst_gap, res.e_with - res.e_without);
          ++cases;
        }
      }
    }
  }
  const std::vector<double> z4{1, 2, 3, 4};
  const auto fixture = convex_order_check(z4, 2, [](double x) { return x * x; });
  const bool fixture_ok = std::abs(fixture.e_without - 80.0 / 3.0) <= 1e-12 && std::abs(fixture.e_with - 27.5) <= 1e-12;
  CheckRecord r;
  r.name = "8_convex_ordering";
  r.inputs = {{"N", {2, 5}}, {"functions", {"x^2", "|x|", "exp(x/N)"}}, {"cases", cases}};
  r.analytic = {{"fixture_expected", {80.0 / 3.0, 27.5}}};
  r.empirical = {{"fixture", {fixture.e_without, fixture.e_with}}, {"min_gap", worst_gap}};
  r.pass = ok && fixture_ok;
  return r;
}

CheckRecord criterion_perm_test(const AcceptanceConfig& cfg) {
  const TwoSampleData data({1, 2}, {3, 4});
  const auto exact = exact_perm_test(data, "mean_diff", TestSide::TwoSided);
  const bool exact_ok = std::abs(exact.p_value - 1.0 / 3.0) <= 1e-15;
  constexpr std::size_t kB = 9999;
  const auto mcr = mc_perm_test(data, "mean_diff", TestSide::TwoSided, mc(cfg, kB, 9000));
  const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / static_cast<double>(kB));
  const bool mc_ok = std::abs(mcr.p_value - 1.0 / 3.0) <= 3.0 * se;
  const auto null = null_super_uniformity(4, 4, "mean_diff", TestSide::TwoSided, 0.05, mc(cfg, 2000, 9100));
  CheckRecord r;
  r.name = "9_permutation_test";
  r.inputs = {{"x", data.x}, {"y", data.y}, {"statistic", "mean_diff"}, {"side", "two"}, {"B", kB},
              {"null_m", 4}, {"null_n", 4}, {"null_reps", null.reps}, {"alpha", null.alpha}};
  r.analytic = {{"p_exact_expected", 1.0 / 3.0}, {"null_rate_limit", null.limit}};
  r.empirical = {{"p_exact", exact.p_value}, {"p_mc", mcr.p_value}, {"null_rejection_rate", null.rate}};
  r.se = se;
  r.pass = exact_ok && mc_ok && null.pass;
  return r;
}

CheckRecord criterion_series_reg(const AcceptanceConfig& cfg) {
  const std::vector<double> x4{1, 2, 3, 4};
  const std::vector<double> y4{3, 5, 7, 9};
  const auto lin = BasisSpec::polynomial(2);
  const auto pop4 = population_fit(x4, y4, lin);
  double worst_fit = 0.0;
  for (std::size_t n = 2; n <= 4; ++n) {
    for_each_subset(4, n, [&](std::span<const std::size_t> s) {
      std::vector<std::size_t> sel;
      for (std::size_t i : s) sel.push_back(i + 1);
      worst_fit = std::max(worst_fit, reg_loss(sample_fit(x4, y4, SampleMask::from_selected(4, sel), lin), pop4));
    });
  }

  const std::vector<double> xs{0.1, 0.4, 0.5, 0.9, 1.3, 1.7, 2.0};
  const std::vector<double> ys{1.0, -0.5, 2.0, 0.3, 1.1, 4.0, -2.0};
  const auto quad = BasisSpec::polynomial(3);
  double worst_q = 0.0;
  for (std::size_t nt = 3; nt <= 7; ++nt) {
    const auto xv = std::span(xs).first(nt);
    const auto yv = std::span(ys).first(nt);
    const auto pop = population_fit(xv, yv, quad);
    for (std::size_t n = 1; n <= nt; ++n) {
      Matrix qbar(quad.k, quad.k);
      double count = 0.0;
      for_each_subset(nt, n, [&](std::span<const std::size_t> s) {
        std::vector<std::size_t> sel;
        for (std::size_t i : s) sel.push_back(i + 1);
        qbar += sample_fit(xv, yv, SampleMask::from_selected(nt, sel), quad).q;
        count += 1.0;
      });
      qbar *= 1.0 / count;
      worst_q = std::max(worst_q, (qbar - pop.q).max_abs() / pop.q.max_abs());
    }
  }

  std::vector<double> x(40);
  std::vector<double> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = static_cast<double>(i + 1) / 40.0;
    y[i] = x[i] * x[i] + 0.1 * std::sin(13.0 * static_cast<double>(i + 1));
  }
  const std::vector<std::size_t> grid{10, 20};
  const auto rows = loss_experiment(x, y, lin, grid, mc(cfg, 2000, 10000));
  const bool decays = rows[0].mean - rows[1].mean > 3.0 * std::hypot(rows[0].se, rows[1].se);
  const double c = rows[0].mean / rows[0].envelope;
  const bool in_envelope = rows[1].mean <= c * rows[1].envelope + 3.0 * rows[1].se;

  Json mc_rows = Json::array();
  for (const auto& row : rows) {
    mc_rows.push_back({{"n", row.n}, {"mean_loss", row.mean}, {"se", row.se}, {"envelope", row.envelope},
                       {"rank_deficient_samples", row.rank_deficient}});
  }
  CheckRecord r;
  r.name = "10_series_regression";
  r.inputs = {{"exact_fit", "x=(1,2,3,4), y=2x+1, K=2"}, {"expectation_N", {3, 7}}, {"mc_N", 40}, {"K", 2},
              {"n", grid}, {"B", 2000}};
  r.analytic = {{"exact_fit_tolerance", 1e-12}, {"expectation_tolerance", 1e-10}, {"calibration_constant", c}};
  r.empirical = {{"exact_fit_max_loss", worst_fit}, {"expectation_max_rel_error", worst_q}, {"loss", mc_rows},
                 {"decreases", decays}, {"within_envelope", in_envelope}};
  r.pass = worst_fit <= 1e-12 && worst_q <= 1e-10 && decays && in_envelope;
  return r;
}

std::vector<CheckRecord> run_criteria(const AcceptanceConfig& cfg) {
  return {criterion_exact_moments(cfg), criterion_rank_moments(cfg), criterion_stein_linearity(cfg),
          criterion_tail_domination(cfg), criterion_clt_rate(cfg),    criterion_donsker(cfg),
          criterion_rosen(cfg),           criterion_convex_order(cfg), criterion_perm_test(cfg),
          criterion_series_reg(cfg)};
}

namespace {

std::string render(const AcceptanceConfig& cfg) {
  Report report("verify-all", acceptance_config_json(cfg));
  for (auto& c : run_criteria(cfg)) report.add(std::move(c));
  return report.dump();
}

}  // namespace

CheckRecord criterion_reproducibility(const AcceptanceConfig& cfg, const std::string& reference) {
  AcceptanceConfig single = cfg;
  single.threads = 1;
  AcceptanceConfig multi = cfg;
  multi.threads = 4;
  const std::string a = render(single);
  const std::string b = render(multi);
  CheckRecord r;
  r.name = "11_reproducibility";
  r.inputs = {{"runs", 3}, {"thread_counts_compared", {1, 4}}};
  r.analytic = {{"bytes", reference.size()}};
  r.empirical = {{"identical_single_thread", a == reference}, {"identical_four_threads", b == reference}};
  r.pass = a == reference && b == reference;
  return r;
}

Report verify_all(const AcceptanceConfig& cfg) {
  Report report("verify-all", acceptance_config_json(cfg));
  for (auto& c : run_criteria(cfg)) report.add(std::move(c));
  const std::string reference = report.dump();
  report.add(criterion_reproducibility(cfg, reference));
  return report;
}

}  // namespace permstat
