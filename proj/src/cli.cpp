#include "permstat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "permstat/acceptance.hpp"
#include "permstat/comb_moments.hpp"
#include "permstat/concentration.hpp"
#include "permstat/csv.hpp"
#include "permstat/emp_process.hpp"
#include "permstat/error.hpp"
#include "permstat/matrix_conc.hpp"
#include "permstat/perm_test.hpp"
#include "permstat/report.hpp"
#include "permstat/series_reg.hpp"
#include "permstat/stein_clt.hpp"

namespace permstat::cli {

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string format = "json";
  std::string output;
};

struct MatrixSource {
  std::string name = "footrule";
  std::string csv;
  std::size_t n = 6;
};

unsigned resolve_cli_threads(const Common& c) {
  if (c.threads) return *c.threads;
  if (const char* env = std::getenv("PERMSTAT_THREADS")) {
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(env, &pos);
      if (pos == std::string(env).size()) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("PERMSTAT_THREADS must be a non-negative integer");
  }
  return 0;
}

std::uint64_t require_seed(const Common& c, const std::string& command) {
  if (!c.seed) throw InvalidArgument(command + " is stochastic and needs --seed");
  return *c.seed;
}

McConfig mc_config(const Common& c, const std::string& command, std::size_t draws, std::uint64_t stream) {
  return McConfig{draws, RngState{require_seed(c, command), stream}, resolve_cli_threads(c)};
}

Matrix load_matrix(const MatrixSource& src, const Common& c, Json& config) {
  if (!src.csv.empty()) {
    config["matrix_csv"] = std::filesystem::path(src.csv).filename().string();
    return read_matrix_csv(src.csv);
  }
  config["matrix"] = src.name;
  config["N"] = src.n;
  if (src.name == "footrule") return footrule_matrix(src.n);
  if (src.name == "rho") return rho_matrix(src.n);
  if (src.name == "rank1") return rank_one_builtin(src.n);
  if (src.name == "random") {
    config["seed"] = require_seed(c, "a random matrix");
    return random_integer_matrix(src.n, RngState{*c.seed, 1000});
  }
  throw InvalidArgument("unknown matrix '" + src.name + "' (known: footrule, rho, rank1, random)");
}

void add_matrix_options(CLI::App* sub, MatrixSource& src) {
  sub->add_option("--matrix", src.name, "Built-in score matrix: footrule, rho, rank1, random")->capture_default_str();
  sub->add_option("--matrix-csv", src.csv, "Dense square score matrix as CSV");
  sub->add_option("--N", src.n, "Size of a built-in matrix")->capture_default_str();
}

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

CheckRecord exact_record(const std::string& name, double analytic, std::optional<double> enumerated, double scale,
                         Json inputs = Json::object()) {
  CheckRecord r;
  r.name = name;
  r.inputs = std::move(inputs);
  r.analytic = analytic;
  if (enumerated) {
    r.empirical = *enumerated;
    r.se = 0.0;
    r.pass = rel_gap(analytic, *enumerated, scale) <= 1e-10;
  }
  return r;
}

// One verdict row per threshold.
void add_domination(Report& rep, const std::string& kind, const DominationResult& d,
                    const Json& extra = Json::object()) {
  for (const auto& row : d.rows) {
    CheckRecord r;
    r.name = kind + " t=" + Json(row.t).dump();
    r.inputs = {{"kind", kind}, {"t", row.t}};
    for (const auto& [k, v] : extra.items()) r.inputs[k] = v;
    r.analytic = row.bound;
    r.empirical = row.empirical;
    r.se = row.se;
    r.pass = row.pass;
    rep.add(r);
  }
}

double centered_draw(const PermMatrix& m, Rng& rng) {
  std::vector<std::uint32_t> map(m.size());
  std::iota(map.begin(), map.end(), 0U);
  shuffle_in_place(map, rng);
  return m.eval_zero_based(map) - m.mu();
}

std::vector<double> scaled(const std::vector<double>& grid, double s) {
  std::vector<double> out;
  for (double g : grid) out.push_back(g * s);
  return out;
}

// ---- moments ----

struct MomentsOpts {
  MatrixSource src;
  std::size_t cap = 8;
};

Report cmd_moments(const MomentsOpts& o, const Common& c) {
  Json config = Json::object();
  const Matrix a = load_matrix(o.src, c, config);
  config["enumeration_cap"] = o.cap;
  const PermMatrix m(a);
  const std::size_t n = m.size();
  Report rep("moments", config);

  std::optional<double> e_mean;
  std::optional<double> e_var;
  std::optional<double> o_mean;
  std::optional<double> o_var;
  if (n <= o.cap) {
    std::vector<double> ys;
    std::vector<double> os;
    for_each_permutation(
        n,
        [&](const Permutation& p) {
          ys.push_back(m.eval(p));
          if (n >= 3) os.push_back(oscillation_sum(a, p));
        },
        o.cap);
    const auto e = pop_moments(ys);
    e_mean = e.mean;
    e_var = e.var;
    if (n >= 3) {
      const auto eo = pop_moments(os);
      o_mean = eo.mean;
      o_var = eo.var;
    }
  }
  const double y_scale = static_cast<double>(n) * a.max_abs();
  const auto mom = comb_sum_moments(m);
  rep.add(exact_record("mean", mom.mean, e_mean, y_scale,
                       {{"mu_A", m.mu()}, {"sigma2_A", m.sigma2()}, {"B_A", m.b_max()}, {"sum_abs_d3", m.d3()},
                        {"sum_d4", m.d4()}}));
  rep.add(exact_record("variance", mom.variance, e_var, y_scale * y_scale));
  if (o.src.csv.empty() && o.src.name == "footrule") {
    rep.add(exact_record("footrule_mean_formula", static_cast<double>(n * n - 1) / 3.0, m.mu(), y_scale,
                         {{"formula", "(N^2-1)/3"}}));
  }
  if (n >= 3) {
    const auto om = oscillation_moments(m);
    rep.add(exact_record("oscillation_mean", om.mean, o_mean, y_scale));
    rep.add(exact_record("oscillation_variance", om.variance, o_var, y_scale * y_scale));
  }
  return rep;
}

// ---- tail-check ----

struct TailOpts {
  MatrixSource src;
  std::string bound = "all";
  std::vector<double> grid{0.5, 1, 2, 3, 4};
  std::size_t reps = 100000;
};

Report cmd_tail(const TailOpts& o, const Common& c) {
  Json config = Json::object();
  const Matrix a = load_matrix(o.src, c, config);
  const PermMatrix m(a);
  config["bound"] = o.bound;
  config["grid_in_sigma"] = o.grid;
  config["reps"] = o.reps;
  config["seed"] = require_seed(c, "tail-check");
  const bool rank_one = o.src.csv.empty() && o.src.name == "rank1";
  if (o.bound == "v2" && !rank_one) throw InvalidArgument("the v2 bound needs a rank-one matrix (--matrix rank1)");
  if (o.bound != "all" && o.bound != "v1" && o.bound != "v2" && o.bound != "bernstein") {
    throw InvalidArgument("--bound must be one of v1, v2, bernstein, all");
  }
  Report rep("tail-check", config);
  const auto grid = scaled(o.grid, std::sqrt(m.sigma2()));
  const auto emp = empirical_tail([&m](Rng& rng) { return centered_draw(m, rng); }, grid,
                                  mc_config(c, "tail-check", o.reps, 4000));
  if (o.bound == "all" || o.bound == "v1") {
    add_domination(rep, "comb_hoeffding_v1", domination_check(TailBoundSpec::comb_hoeffding_v1(m), emp));
  }
  if ((o.bound == "all" && rank_one) || o.bound == "v2") {
    std::vector<double> av(m.size());
    std::vector<double> bv(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      av[i] = static_cast<double>((i + 1) * (i + 1));
      bv[i] = static_cast<double>(i + 1);
    }
    add_domination(rep, "comb_hoeffding_v2", domination_check(TailBoundSpec::comb_hoeffding_v2(av, bv), emp));
  }
  if (o.bound == "all" || o.bound == "bernstein") {
    add_domination(rep, "comb_bernstein", domination_check(TailBoundSpec::comb_bernstein(m), emp));
  }
  return rep;
}

// ---- clt-check ----

struct CltOpts {
  MatrixSource src;
  std::size_t reps = 100000;
  std::size_t linearity_cap = 7;
};

Report cmd_clt(const CltOpts& o, const Common& c) {
  Json config = Json::object();
  const Matrix a = load_matrix(o.src, c, config);
  const PermMatrix m(a);
  config["reps"] = o.reps;
  config["linearity_cap"] = o.linearity_cap;
  config["seed"] = require_seed(c, "clt-check");
  Report rep("clt-check", config);

  const auto cert = clt_certificate(m);
  CheckRecord cr;
  cr.name = "certificate";
  cr.inputs = {{"N", m.size()}, {"rule", "r3 <= B_A / sigma_A"}};
  cr.analytic = {{"r3", cert.r3}, {"ratio", cert.ratio}, {"weak_rate", cert.weak_rate}};
  cr.pass = cert.r3 <= cert.ratio * (1.0 + 1e-12);
  rep.add(cr);

  if (m.size() <= o.linearity_cap) {
    CheckRecord lr;
    lr.name = "stein_linearity";
    lr.analytic = 1e-12;
    lr.empirical = exchangeable_linearity_defect(m, o.linearity_cap);
    lr.pass = lr.empirical.get<double>() <= 1e-12;
    rep.add(lr);
  }

  const double s = std::sqrt(m.sigma2());
  const auto draws = mc_collect<double>(mc_config(c, "clt-check", o.reps, 5000),
                                        [&](Rng& rng) { return centered_draw(m, rng) / s; });
  CheckRecord nr;
  nr.name = "normal_approximation";
  nr.inputs = {{"N", m.size()}, {"B", o.reps}, {"note", "distances of the standardized sum to N(0,1); informational"}};
  nr.empirical = {{"ks", ks_distance_to_normal(draws)}, {"w1", wasserstein1_to_normal(draws)}};
  rep.add(nr);
  return rep;
}

// ---- matrix-check ----

struct MatrixOpts {
  std::string family = "random";
  std::string json_path;
  std::string dir;
  std::size_t n = 20;
  std::size_t d = 2;
  std::vector<double> grid{0.5, 1, 2, 3, 4};
  std::size_t reps = 100000;
};

SymMatrixFamily family_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  // Expected layout: N x N array of d x d arrays.
  if (!j.is_array() || j.empty()) throw DataError(path + ": expected an N x N array of matrices");
  const std::size_t n = j.size();
  std::vector<Matrix> blocks;
  try {
    for (const auto& row : j) {
      if (!row.is_array() || row.size() != n) throw DataError(path + ": family must be N x N");
      for (const auto& block : row) {
        const std::size_t d = block.size();
        Matrix b(d, d);
        for (std::size_t r = 0; r < d; ++r) {
          if (block[r].size() != d) throw DataError(path + ": blocks must be square");
          for (std::size_t col = 0; col < d; ++col) b(r, col) = block[r][col].get<double>();
        }
        blocks.push_back(std::move(b));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": non-numeric entry: " + e.what());
  }
  return SymMatrixFamily(n, std::move(blocks));
}

// Files A_i_j.csv with 1-based i, j.
SymMatrixFamily family_from_dir(const std::string& dir) {
  std::size_t n = 0;
  while (std::filesystem::exists(std::filesystem::path(dir) / ("A_" + std::to_string(n + 1) + "_1.csv"))) ++n;
  if (n == 0) throw DataError(dir + ": no A_1_1.csv block found");
  std::vector<Matrix> blocks;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const auto p = std::filesystem::path(dir) / ("A_" + std::to_string(i) + "_" + std::to_string(j) + ".csv");
      if (!std::filesystem::exists(p)) throw DataError(p.string() + ": missing block");
      blocks.push_back(read_matrix_csv(p.string()));
    }
  }
  return SymMatrixFamily(n, std::move(blocks));
}

Report cmd_matrix(const MatrixOpts& o, const Common& c) {
  Json config = Json::object();
  std::optional<SymMatrixFamily> raw;
  if (!o.json_path.empty()) {
    config["family_json"] = std::filesystem::path(o.json_path).filename().string();
    raw = family_from_json(o.json_path);
  } else if (!o.dir.empty()) {
    config["family_dir"] = std::filesystem::path(o.dir).filename().string();
    raw = family_from_dir(o.dir);
  } else {
    if (o.family != "random") throw InvalidArgument("--family must be random (or use --family-json/--family-dir)");
    config["family"] = o.family;
    config["N"] = o.n;
    config["d"] = o.d;
    raw = random_sym_family(o.n, o.d, RngState{require_seed(c, "matrix-check"), 4100});
  }
  config["grid_in_sigma"] = o.grid;
  config["reps"] = o.reps;
  config["seed"] = require_seed(c, "matrix-check");
  const bool was_centered = raw->centered();
  const SymMatrixFamily fam = was_centered ? *raw : center_family(*raw);
  Report rep("matrix-check", config);
  const Json inputs = {{"N", fam.size()}, {"d", fam.dim()}, {"sigma2", fam.sigma2()}, {"M", fam.m_bound()},
                       {"centered_input", was_centered}};
  const auto grid = scaled(o.grid, std::sqrt(fam.sigma2()));
  const auto emp = matrix_op_norm_tail(fam, grid, mc_config(c, "matrix-check", o.reps, 4200));
  add_domination(rep, "matrix_hoeffding", domination_check(matrix_bound_spec(MatrixBoundKind::Hoeffding, fam), emp),
                 inputs);
  add_domination(rep, "matrix_bernstein", domination_check(matrix_bound_spec(MatrixBoundKind::Bernstein, fam), emp),
                 inputs);
  return rep;
}

// ---- populations ----

struct PopulationSource {
  std::string csv;
  std::size_t n = 100;
};

std::vector<double> load_population(const PopulationSource& src, Json& config,
                                    const std::function<double(std::size_t)>& synthetic) {
  if (!src.csv.empty()) {
    config["population_csv"] = std::filesystem::path(src.csv).filename().string();
    return read_column_csv(src.csv);
  }
  config["N"] = src.n;
  std::vector<double> z(src.n);
  for (std::size_t i = 0; i < src.n; ++i) z[i] = synthetic(i);
  return z;
}

// ---- gc-check ----

struct GcOpts {
  PopulationSource pop;
  std::vector<std::size_t> n_grid{16, 32, 64};
  std::size_t reps = 10000;
  std::optional<std::size_t> talagrand_n;
  std::vector<double> t_grid{0.0, 0.05, 0.1, 0.15, 0.2};
};

Report cmd_gc(const GcOpts& o, const Common& c) {
  Json config = Json::object();
  const auto z = load_population(o.pop, config, [](std::size_t i) { return static_cast<double>(i); });
  const auto pop = FinitePopulation::scalar(z);
  const std::size_t tn = o.talagrand_n.value_or(std::max<std::size_t>(1, pop.size() / 2));
  config["n_grid"] = o.n_grid;
  config["reps"] = o.reps;
  config["talagrand_n"] = tn;
  config["t_grid"] = o.t_grid;
  config["seed"] = require_seed(c, "gc-check");
  Report rep("gc-check", config);

  const auto rows = gc_decay_experiment(pop, o.n_grid, mc_config(c, "gc-check", o.reps, 6100));
  CheckRecord gr;
  gr.name = "gc_decay";
  Json est = Json::array();
  Json se = Json::array();
  bool ok = true;
  for (const auto& row : rows) {
    est.push_back(row.mean);
    se.push_back(row.se);
    ok = ok && row.mean <= 1.0 && (row.n != pop.size() || row.mean == 0.0);
  }
  if (rows.size() >= 2 && rows.back().n > rows.front().n) {
    ok = ok && rows.front().mean - rows.back().mean > 3.0 * std::hypot(rows.front().se, rows.back().se);
  }
  gr.inputs = {{"n", o.n_grid}, {"class", "indicators"},
               {"rule", "estimates <= 1, zero at n = N, first minus last > 3 SE"}};
  gr.empirical = est;
  gr.se = se;
  gr.pass = ok;
  rep.add(gr);

  std::vector<NamedFunction> ind;
  for (double t : z) ind.push_back(NamedFunction::indicator_le(t));
  const auto tal = talagrand_sup_bound_check(pop, ind, tn, o.t_grid, mc_config(c, "gc-check", o.reps, 6200));
  add_domination(rep, "talagrand_sup_bound", tal.domination,
                 {{"n", tn}, {"sigma_f2", tal.sigma_f2}, {"mean_sup", tal.mean_sup}, {"mean_sup_se", tal.mean_sup_se}});
  return rep;
}

// ---- sup-dev ----

struct SupDevOpts {
  PopulationSource pop;
  std::vector<std::size_t> sample;
  std::optional<std::size_t> n;
  std::size_t poly = 0;
  std::string functions_csv;
};

Report cmd_sup_dev(const SupDevOpts& o, const Common& c) {
  Json config = Json::object();
  const auto z = load_population(o.pop, config, [](std::size_t i) { return static_cast<double>(i + 1); });
  const auto pop = FinitePopulation::scalar(z);
  SampleMask mask;
  if (!o.sample.empty()) {
    if (o.n) throw InvalidArgument("use either --sample or --n, not both");
    config["sample"] = o.sample;
    mask = SampleMask::from_selected(pop.size(), o.sample);
  } else if (o.n) {
    config["n"] = *o.n;
    config["seed"] = require_seed(c, "sup-dev with a random sample");
    Rng rng(RngState{*c.seed, 6300});
    mask = sample_without_replacement(pop.size(), *o.n, rng);
  } else {
    throw InvalidArgument("sup-dev needs --sample or --n");
  }
  const PermMeasure m(pop, mask);
  Report rep("sup-dev", config);

  std::vector<NamedFunction> ind;
  for (double t : z) ind.push_back(NamedFunction::indicator_le(t));
  const double sup = sup_dev_indicator(m);
  const SupDev via_class = sup_dev_class(m, ind);
  CheckRecord ir;
  ir.name = "sup_dev_indicator";
  ir.inputs = {{"rule", "atom scan equals the sup over indicators at every atom"}, {"n", mask.n_sample}};
  ir.analytic = via_class.value;
  ir.empirical = sup;
  ir.pass = sup == via_class.value;
  rep.add(ir);

  std::vector<NamedFunction> cls;
  for (std::size_t k = 1; k <= o.poly; ++k) cls.push_back(NamedFunction::power(static_cast<int>(k)));
  if (!o.functions_csv.empty()) {
    const auto table = read_csv(o.functions_csv);
    if (table.size() != pop.size()) throw DataError(o.functions_csv + ": needs one row per population point");
    for (std::size_t col = 0; col < table.front().size(); ++col) {
      std::vector<double> v;
      for (const auto& row : table) v.push_back(row[col]);
      cls.push_back(NamedFunction::tabulated("f" + std::to_string(col + 1), std::move(v)));
    }
    config["functions_csv"] = std::filesystem::path(o.functions_csv).filename().string();
  }
  if (!cls.empty()) {
    const SupDev r = sup_dev_class(m, cls);
    Json names = Json::array();
    Json devs = Json::array();
    for (const auto& f : cls) {
      names.push_back(f.name);
      devs.push_back(std::abs(measure_apply(m, f) - population_apply(pop, f)));
    }
    CheckRecord cr;
    cr.name = "sup_dev_class";
    cr.inputs = {{"class", names}, {"deviations", devs}};
    cr.empirical = {{"value", r.value}, {"index", r.index}, {"argmax", cls[r.index - 1].name}};
    rep.add(cr);
  }
  const auto id = NamedFunction::power(1);
  CheckRecord dr;
  dr.name = "donsker_variance_id";
  dr.inputs = {{"n", mask.n_sample}, {"formula", "(N-n)/(N-1) (P_N f^2 - (P_N f)^2)"}};
  dr.analytic = donsker_cov(pop, mask.n_sample, id, id);
  rep.add(dr);
  return rep;
}

// ---- rosen ----

struct RosenOpts {
  PopulationSource pop{"", 400};
  std::vector<double> grid{0.25, 0.5};
  std::size_t reps = 100000;
};

Report cmd_rosen(const RosenOpts& o, const Common& c) {
  Json config = Json::object();
  const auto raw = load_population(o.pop, config, [](std::size_t i) {
    return std::sqrt(static_cast<double>(i + 1)) + std::sin(static_cast<double>(i));
  });
  const auto z = normalize_population(raw);
  const std::size_t n = z.size();
  config["grid"] = o.grid;
  config["reps"] = o.reps;
  config["seed"] = require_seed(c, "rosen");
  Report rep("rosen", config);
  for (double t : o.grid) {
    if (t < 0.0 || t > 1.0) throw InvalidArgument("rosen grid points must lie in [0, 1]");
  }

  const double nn = static_cast<double>(n);
  for (double t : o.grid) {
    const std::size_t k = rosen_index(n, t);
    const double kk = static_cast<double>(k);
    CheckRecord r;
    r.name = "variance_t=" + Json(t).dump();
    r.inputs = {{"k", k}, {"bridge_limit", t * (1.0 - t)}};
    r.analytic = kk * (nn - kk) / (nn * (nn - 1.0));
    r.empirical = rosen_variance(z, k);
    r.se = 0.0;
    r.pass = std::abs(r.analytic.get<double>() - r.empirical.get<double>()) <= 1e-12;
    rep.add(r);
  }

  const auto paths = mc_collect<std::vector<double>>(
      mc_config(c, "rosen", o.reps, 7000),
      [&](Rng& rng) { return rosen_path(z, random_permutation(n, rng), o.grid).values; });
  for (std::size_t a = 0; a < o.grid.size(); ++a) {
    for (std::size_t b = a + 1; b < o.grid.size(); ++b) {
      std::vector<double> prods;
      prods.reserve(paths.size());
      for (const auto& p : paths) prods.push_back(p[a] * p[b]);
      const MeanSe est = mean_and_se(prods);
      const std::size_t k = rosen_index(n, o.grid[a]);
      const std::size_t l = rosen_index(n, o.grid[b]);
      CheckRecord r;
      r.name = "covariance_t=" + Json(o.grid[a]).dump() + "," + Json(o.grid[b]).dump();
      const double lo = std::min(o.grid[a], o.grid[b]);
      const double hi = std::max(o.grid[a], o.grid[b]);
      r.inputs = {{"k", k}, {"l", l}, {"bridge_limit", lo * (1.0 - hi)}};
      r.analytic = rosen_covariance(n, k, l);
      r.empirical = est.mean;
      r.se = est.se;
      r.pass = std::abs(est.mean - r.analytic.get<double>()) <= 3.0 * est.se;
      rep.add(r);
    }
  }
  return rep;
}

// ---- series-reg ----

struct SeriesOpts {
  std::string data;
  std::string basis = "poly";
  std::size_t k = 2;
  std::vector<double> knots;
  std::vector<std::size_t> n_grid{10, 20};
  std::size_t reps = 2000;
};

Report cmd_series(const SeriesOpts& o, const Common& c) {
  Json config = Json::object();
  std::vector<double> x;
  std::vector<double> y;
  if (!o.data.empty()) {
    config["data_csv"] = std::filesystem::path(o.data).filename().string();
    auto xy = read_xy_csv(o.data);
    x = std::move(xy.x);
    y = std::move(xy.y);
  } else {
    config["data"] = "synthetic: N=40, x=i/40, y=x^2+0.1 sin(13 i)";
    for (std::size_t i = 1; i <= 40; ++i) {
      x.push_back(static_cast<double>(i) / 40.0);
      y.push_back(x.back() * x.back() + 0.1 * std::sin(13.0 * static_cast<double>(i)));
    }
  }
  BasisSpec spec;
  if (o.basis == "poly") {
    spec = BasisSpec::polynomial(o.k);
    config["basis"] = "polynomial";
    config["K"] = o.k;
  } else if (o.basis == "piecewise") {
    spec = BasisSpec::piecewise_constant(o.knots);
    config["basis"] = "piecewise";
    config["knots"] = o.knots;
  } else {
    throw InvalidArgument("--basis must be poly or piecewise");
  }
  config["n_grid"] = o.n_grid;
  config["reps"] = o.reps;
  config["seed"] = require_seed(c, "series-reg");
  Report rep("series-reg", config);

  const auto pop = population_fit(x, y, spec);
  CheckRecord pr;
  pr.name = "population_fit";
  pr.inputs = {{"rule", "population design has full rank"}};
  pr.analytic = {{"beta", pop.beta}, {"lambda_K", pop.lambda_min}, {"zeta_K", pop.zeta}};
  pr.pass = !pop.rank_deficient;
  rep.add(pr);

  const auto rows = loss_experiment(x, y, spec, o.n_grid, mc_config(c, "series-reg", o.reps, 10000));
  const double calib = rows.front().mean / rows.front().envelope;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto d = reg_diagnostics(x, y, spec, rows[r].n);
    CheckRecord lr;
    lr.name = "loss_n=" + std::to_string(rows[r].n);
    lr.inputs = {{"A_N", d.a_n}, {"B_N2", d.b_n2}, {"gamma_N", d.gamma_n},
                 {"rank_deficient_samples", rows[r].rank_deficient}};
    lr.analytic = {{"envelope", d.envelope}, {"calibrated_envelope", calib * d.envelope}};
    lr.empirical = rows[r].mean;
    lr.se = rows[r].se;
    lr.pass = rows[r].mean <= calib * d.envelope + 3.0 * rows[r].se;
    if (r > 0 && rows[r].n > rows[r - 1].n) {
      lr.pass = lr.pass && rows[r - 1].mean - rows[r].mean > 3.0 * std::hypot(rows[r - 1].se, rows[r].se);
      lr.inputs["rule"] = "below the envelope calibrated at the first n; decreases from the previous n by 3 SE";
    } else {
      lr.inputs["rule"] = "calibration point for the envelope constant";
    }
    rep.add(lr);
  }
  return rep;
}

// ---- perm-test ----

struct PermTestOpts {
  std::string x;
  std::string y;
  std::string stat = "mean_diff";
  std::string side = "two";
  std::string mode = "exact";
  std::size_t b = 9999;
  double cap = kDefaultExactCap;
};

Report cmd_perm_test(const PermTestOpts& o, const Common& c) {
  Json config = {{"x", std::filesystem::path(o.x).filename().string()},
                 {"y", std::filesystem::path(o.y).filename().string()},
                 {"stat", o.stat},
                 {"side", o.side},
                 {"mode", o.mode}};
  const TwoSampleData data(read_column_csv(o.x), read_column_csv(o.y));
  const TestSide side = parse_side(o.side);
  TestResult res;
  if (o.mode == "exact") {
    res = exact_perm_test(data, o.stat, side, o.cap);
  } else if (o.mode == "mc") {
    config["B"] = o.b;
    config["seed"] = require_seed(c, "perm-test --mode mc");
    res = mc_perm_test(data, o.stat, side, mc_config(c, "perm-test", o.b, 9000));
  } else {
    throw InvalidArgument("--mode must be exact or mc");
  }
  Report rep("perm-test", config);
  CheckRecord r;
  r.name = "perm_test";
  r.inputs = {{"statistic_id", res.statistic_id}, {"side", to_string(res.side)}, {"mode", to_string(res.mode)},
              {"m", data.m()}, {"n", data.n()}};
  r.empirical = {{"observed", res.observed}, {"p_value", res.p_value}, {"n_resamples", res.n_resamples},
                 {"n_extreme", res.n_extreme}};
  r.se = res.se;
  rep.add(r);
  return rep;
}

// ---- verify-all ----

Report cmd_verify_all(std::size_t reps, const Common& c) {
  AcceptanceConfig cfg;
  cfg.seed = require_seed(c, "verify-all");
  cfg.reps = reps;
  cfg.threads = resolve_cli_threads(c);
  return verify_all(cfg);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorial probability and permutation statistics toolkit", "permstat"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub, bool stochastic) {
    if (stochastic) sub->add_option("--seed", common.seed, "Seed for the random streams (required)");
    else sub->add_option("--seed", common.seed, "Seed, needed only by random inputs");
    sub->add_option("--threads", common.threads, "Worker threads; 0 = all cores (env PERMSTAT_THREADS)");
    sub->add_option("--format", common.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--output", common.output, "Write the report to this file");
  };

  MomentsOpts mo;
  auto* moments = app.add_subcommand("moments", "Exact moments of a combinatorial sum");
  add_matrix_options(moments, mo.src);
  moments->add_option("--cap", mo.cap, "Enumerate S_N up to this N")->capture_default_str();
  add_common(moments, false);

  TailOpts to;
  auto* tail = app.add_subcommand("tail-check", "Scalar tail bounds against the Monte Carlo tail");
  add_matrix_options(tail, to.src);
  tail->add_option("--bound", to.bound, "v1, v2, bernstein or all")->capture_default_str();
  tail->add_option("--grid", to.grid, "Thresholds in units of sigma_A")->delimiter(',');
  tail->add_option("--reps", to.reps, "Monte Carlo draws")->capture_default_str();
  add_common(tail, true);

  CltOpts co;
  auto* clt = app.add_subcommand("clt-check", "Normal approximation certificate and distances");
  add_matrix_options(clt, co.src);
  clt->add_option("--reps", co.reps, "Monte Carlo draws")->capture_default_str();
  clt->add_option("--linearity-cap", co.linearity_cap, "Check Stein linearity up to this N")->capture_default_str();
  add_common(clt, true);

  MatrixOpts mx;
  auto* matrix = app.add_subcommand("matrix-check", "Matrix Hoeffding and Bernstein bounds");
  matrix->add_option("--family", mx.family, "Built-in family: random")->capture_default_str();
  matrix->add_option("--family-json", mx.json_path, "N x N array of d x d matrices");
  matrix->add_option("--family-dir", mx.dir, "Directory of A_i_j.csv blocks");
  matrix->add_option("--N", mx.n, "Family size")->capture_default_str();
  matrix->add_option("--d", mx.d, "Block dimension")->capture_default_str();
  matrix->add_option("--grid", mx.grid, "Thresholds in units of sigma")->delimiter(',');
  matrix->add_option("--reps", mx.reps, "Monte Carlo draws")->capture_default_str();
  add_common(matrix, true);

  GcOpts go;
  auto* gc = app.add_subcommand("gc-check", "Glivenko-Cantelli decay and sup-deviation tail bound");
  gc->add_option("--population", go.pop.csv, "Single-column CSV population");
  gc->add_option("--N", go.pop.n, "Size of the equispaced default population")->capture_default_str();
  gc->add_option("--n-grid", go.n_grid, "Sample sizes")->delimiter(',');
  gc->add_option("--reps", go.reps, "Monte Carlo draws per sample size")->capture_default_str();
  gc->add_option("--talagrand-n", go.talagrand_n, "Sample size for the sup-deviation bound (default N/2)");
  gc->add_option("--t-grid", go.t_grid, "Thresholds for the sup-deviation bound")->delimiter(',');
  add_common(gc, true);

  SupDevOpts so;
  auto* supdev = app.add_subcommand("sup-dev", "Sup-deviation of one sample from the population");
  supdev->add_option("--population", so.pop.csv, "Single-column CSV population");
  supdev->add_option("--N", so.pop.n, "Size of the default population 1..N")->capture_default_str();
  supdev->add_option("--sample", so.sample, "1-based labels of the sampled units")->delimiter(',');
  supdev->add_option("--n", so.n, "Draw a random sample of this size (needs --seed)");
  supdev->add_option("--poly", so.poly, "Add z, z^2, ..., z^K to the function class");
  supdev->add_option("--functions", so.functions_csv, "CSV with one column per tabulated function");
  add_common(supdev, false);

  RosenOpts ro;
  auto* rosen = app.add_subcommand("rosen", "Rosen partial-sum process moments");
  rosen->add_option("--population", ro.pop.csv, "Single-column CSV population");
  rosen->add_option("--N", ro.pop.n, "Size of the default population")->capture_default_str();
  rosen->add_option("--grid", ro.grid, "Time points in [0, 1]")->delimiter(',');
  rosen->add_option("--reps", ro.reps, "Monte Carlo draws")->capture_default_str();
  add_common(rosen, true);

  SeriesOpts se;
  auto* series = app.add_subcommand("series-reg", "Series regression under sampling without replacement");
  series->add_option("--data", se.data, "Two-column CSV (x, y)");
  series->add_option("--basis", se.basis, "poly or piecewise")->capture_default_str();
  series->add_option("--K", se.k, "Number of polynomial basis functions")->capture_default_str();
  series->add_option("--knots", se.knots, "Knots of the piecewise basis")->delimiter(',');
  series->add_option("--n", se.n_grid, "Sample sizes")->delimiter(',');
  series->add_option("--reps", se.reps, "Monte Carlo replications")->capture_default_str();
  add_common(series, true);

  PermTestOpts po;
  auto* perm = app.add_subcommand("perm-test", "Two-sample permutation test");
  perm->add_option("--x", po.x, "Single-column CSV, first sample")->required();
  perm->add_option("--y", po.y, "Single-column CSV, second sample")->required();
  perm->add_option("--stat", po.stat, "mean_diff, ks_two_sample, wilcoxon, mann_whitney")->capture_default_str();
  perm->add_option("--side", po.side, "two, greater or less")->capture_default_str();
  perm->add_option("--mode", po.mode, "exact or mc")->capture_default_str();
  perm->add_option("--B", po.b, "Monte Carlo resamples")->capture_default_str();
  perm->add_option("--cap", po.cap, "Largest number of splits enumerated in exact mode");
  add_common(perm, false);

  std::size_t verify_reps = 100000;
  auto* verify = app.add_subcommand("verify-all", "Run the full acceptance suite");
  verify->add_option("--reps", verify_reps, "Monte Carlo draws for the sampling criteria")->capture_default_str();
  add_common(verify, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::CallForVersion& e) {
    out << tool_version() << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::optional<Report> rep;
    if (moments->parsed()) rep = cmd_moments(mo, common);
    else if (tail->parsed()) rep = cmd_tail(to, common);
    else if (clt->parsed()) rep = cmd_clt(co, common);
    else if (matrix->parsed()) rep = cmd_matrix(mx, common);
    else if (gc->parsed()) rep = cmd_gc(go, common);
    else if (supdev->parsed()) rep = cmd_sup_dev(so, common);
    else if (rosen->parsed()) rep = cmd_rosen(ro, common);
    else if (series->parsed()) rep = cmd_series(se, common);
    else if (perm->parsed()) rep = cmd_perm_test(po, common);
    else rep = cmd_verify_all(verify_reps, common);

    const std::string text = common.format == "text" ? rep->to_text() : rep->dump();
    if (common.output.empty()) {
      out << text;
    } else {
      std::ofstream f(common.output, std::ios::binary);
      if (!f) throw DataError(common.output + ": cannot open for writing");
      f << text;
    }
    return rep->all_pass() ? kExitPass : kExitFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace permstat::cli
