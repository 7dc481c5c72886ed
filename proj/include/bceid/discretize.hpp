#pragma once

#include <functional>
#include <string>

#include "bceid/model.hpp"

namespace bceid::discretize {

/// Continuous univariate family feeding the grid construction.
struct ContinuousFamilySpec {
  enum class Family { Normal, Gumbel, CardellNested, BetaTruncated, Custom };
  Family family = Family::Normal;
  Vec params;  // Normal: mu,sigma; Gumbel: loc,scale; Cardell: lambda;
               // BetaTruncated: a,b,lo,hi
  std::function<double(double)> density;   // Custom only
  std::function<double(double)> quantile;  // Custom only (optional)

  double pdf(double x) const;
  double icdf(double p) const;
  void check() const;

  static ContinuousFamilySpec normal(double mu, double sigma);
  static ContinuousFamilySpec gumbel(double loc = 0.0, double scale = 1.0);
  static ContinuousFamilySpec cardell(double lambda);
  static ContinuousFamilySpec beta_truncated(double a, double b, double lo, double hi);
  static ContinuousFamilySpec custom(std::function<double(double)> density,
                                     std::function<double(double)> quantile = {});
};

/// One-dimensional grid construction rule.
struct GridSpec {
  enum class Mode { ExplicitPoints, EquispacedQuantiles, EquispacedValues };
  Mode mode = Mode::EquispacedQuantiles;
  Vec points;                    // ExplicitPoints
  size_t count = 15;             // points per dimension
  double q_lo = 0.001, q_hi = 0.999;  // quantile bounds
  double v_lo = 0.0, v_hi = 1.0;      // value bounds

  Vec materialize(const ContinuousFamilySpec& family) const;
  std::string describe() const;

  static GridSpec explicit_points(Vec pts);
  static GridSpec quantiles(size_t count, double lo = 0.001, double hi = 0.999);
  static GridSpec values(size_t count, double lo, double hi);
};

/// Density renormalised over the grid points: pmf(e) = f(e) / sum_grid f.
std::pair<model::FiniteSupport, Vec> discretize_pmf(const ContinuousFamilySpec& spec,
                                                    const GridSpec& grid);

/// Cartesian product of per-dimension point sets in lexicographic order
/// (first axis slowest). Throws GridTooLarge above `cap` points.
model::FiniteSupport product_grid(const std::vector<Vec>& axes, size_t cap = 1000000);

/// Renormalised pmf of a multivariate density over an existing product grid.
Vec pmf_on_support(const model::FiniteSupport& support,
                   const std::function<double(const Vec&)>& density);

}  // namespace bceid::discretize
