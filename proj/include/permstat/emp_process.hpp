#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "permstat/concentration.hpp"
#include "permstat/monte_carlo.hpp"
#include "permstat/permutation.hpp"

namespace permstat {

// N points, each a real vector of a common dimension (1 for scalar data).
class FinitePopulation {
 public:
  explicit FinitePopulation(std::vector<std::vector<double>> points);
  static FinitePopulation scalar(std::span<const double> z);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.front().size(); }
  bool is_scalar() const { return dim() == 1; }
  std::span<const double> point(std::size_t i) const { return points_[i]; }
  // First coordinate of every point.
  std::vector<double> scalars() const;

 private:
  std::vector<std::vector<double>> points_;
};

// A real function on the population. The index argument lets tabulated
// functions look up their value; analytic ones ignore it.
struct NamedFunction {
  std::string name;
  std::function<double(std::span<const double>, std::size_t)> eval;

  static NamedFunction constant(double c);
  static NamedFunction power(int k, std::size_t coord = 0);  // z^k; k = 1 is the identity
  static NamedFunction indicator_le(double t, std::size_t coord = 0);
  static NamedFunction tabulated(std::string name, std::vector<double> values);
};

// Values of f at every population point.
std::vector<double> tabulate(const FinitePopulation& pop, const NamedFunction& f);

// The empirical law of the points selected by a sample mask. Holds a
// reference to the population, which must outlive it.
struct PermMeasure {
  const FinitePopulation& population;
  SampleMask mask;

  PermMeasure(const FinitePopulation& pop, SampleMask m);
};

double measure_apply(const PermMeasure& m, const NamedFunction& f);
double population_apply(const FinitePopulation& pop, const NamedFunction& f);

// Exact sup_t |F_{pi,n}(t) - F_N(t)| over the indicator class.
double sup_dev_indicator(const PermMeasure& m);

struct SupDev {
  double value = 0.0;
  std::size_t index = 0;  // 1-based position of the maximizer; lowest on ties
};

SupDev sup_dev_class(const PermMeasure& m, std::span<const NamedFunction> fs);

double donsker_cov(const FinitePopulation& pop, std::size_t n, const NamedFunction& f, const NamedFunction& g);

// Sample mean of G f * G g over random samples; both processes have mean
// zero exactly, so this estimates the covariance without bias.
MeanSe donsker_cov_mc(const FinitePopulation& pop, std::size_t n, const NamedFunction& f, const NamedFunction& g,
                      const McConfig& cfg);

struct GcRow {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;
};

// Row r uses stream cfg.rng.substream(r).
std::vector<GcRow> gc_decay_experiment(const FinitePopulation& pop, std::span<const std::size_t> n_grid,
                                       const McConfig& cfg);

// Sup of squared L2(P_N) norms of f - P_N f over the class.
double class_variance_sup(const FinitePopulation& pop, std::span<const NamedFunction> fs);

struct TalagrandCheck {
  double sigma_f2 = 0.0;
  double mean_sup = 0.0;
  double mean_sup_se = 0.0;
  DominationResult domination;
};

// Compares exp(-n^2 t^2 / (8 N Sigma^2)), optionally scaled, with the MC tail
// of the sup-deviation minus its MC mean.
TalagrandCheck talagrand_sup_bound_check(const FinitePopulation& pop, std::span<const NamedFunction> fs,
                                         std::size_t n, std::span<const double> thresholds, const McConfig& cfg,
                                         double bound_scale = 1.0);

}  // namespace permstat
