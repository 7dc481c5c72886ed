#include "bceid/discretize.hpp"

#include <cmath>
#include <sstream>

#include "bceid/stats.hpp"

namespace bceid::discretize {

using model::FiniteSupport;

ContinuousFamilySpec ContinuousFamilySpec::normal(double mu, double sigma) {
  ContinuousFamilySpec s;
  s.family = Family::Normal;
  s.params = {mu, sigma};
  return s;
}

ContinuousFamilySpec ContinuousFamilySpec::gumbel(double loc, double scale) {
  ContinuousFamilySpec s;
  s.family = Family::Gumbel;
  s.params = {loc, scale};
  return s;
}

ContinuousFamilySpec ContinuousFamilySpec::cardell(double lambda) {
  ContinuousFamilySpec s;
  s.family = Family::CardellNested;
  s.params = {lambda};
  return s;
}

ContinuousFamilySpec ContinuousFamilySpec::beta_truncated(double a, double b, double lo,
                                                          double hi) {
  ContinuousFamilySpec s;
  s.family = Family::BetaTruncated;
  s.params = {a, b, lo, hi};
  return s;
}

ContinuousFamilySpec ContinuousFamilySpec::custom(std::function<double(double)> density,
                                                  std::function<double(double)> quantile) {
  ContinuousFamilySpec s;
  s.family = Family::Custom;
  s.density = std::move(density);
  s.quantile = std::move(quantile);
  return s;
}

void ContinuousFamilySpec::check() const {
  switch (family) {
    case Family::Normal:
    case Family::Gumbel:
      if (params.size() != 2 || params[1] <= 0.0)
        throw std::invalid_argument("location-scale family needs scale > 0");
      break;
    case Family::CardellNested:
      if (params.size() != 1 || params[0] <= 0.0 || params[0] >= 1.0)
        throw std::invalid_argument("Cardell family needs lambda in (0,1)");
      break;
    case Family::BetaTruncated:
      if (params.size() != 4 || params[0] <= 0.0 || params[1] <= 0.0 ||
          params[2] >= params[3])
        throw std::invalid_argument("truncated Beta needs shapes > 0 and lo < hi");
      break;
    case Family::Custom:
      if (!density) throw std::invalid_argument("custom family needs a density");
      break;
  }
}

double ContinuousFamilySpec::pdf(double x) const {
  switch (family) {
    case Family::Normal:
      return stats::norm_pdf((x - params[0]) / params[1]) / params[1];
    case Family::Gumbel:
      return stats::gumbel_pdf((x - params[0]) / params[1]) / params[1];
    case Family::CardellNested:
      return stats::cardell_pdf(x, params[0]);
    case Family::BetaTruncated: {
      double a = params[0], b = params[1], lo = params[2], hi = params[3];
      if (x < lo || x > hi) return 0.0;
      // truncation constant cancels in the grid renormalisation
      return stats::beta_pdf(x, a, b);
    }
    case Family::Custom:
      return density(x);
  }
  return 0.0;
}

double ContinuousFamilySpec::icdf(double p) const {
  switch (family) {
    case Family::Normal:
      return params[0] + params[1] * stats::norm_quantile(p);
    case Family::Gumbel:
      return params[0] + params[1] * stats::gumbel_quantile(p);
    case Family::CardellNested:
      return stats::cardell_quantile(p, params[0]);
    case Family::BetaTruncated: {
      double a = params[0], b = params[1], lo = params[2], hi = params[3];
      double plo = stats::beta_cdf(lo, a, b), phi = stats::beta_cdf(hi, a, b);
      return stats::beta_quantile(plo + p * (phi - plo), a, b);
    }
    case Family::Custom:
      if (!quantile) throw std::invalid_argument("custom family has no quantile function");
      return quantile(p);
  }
  return 0.0;
}

GridSpec GridSpec::explicit_points(Vec pts) {
  GridSpec g;
  g.mode = Mode::ExplicitPoints;
  g.points = std::move(pts);
  return g;
}

GridSpec GridSpec::quantiles(size_t count, double lo, double hi) {
  GridSpec g;
  g.mode = Mode::EquispacedQuantiles;
  g.count = count;
  g.q_lo = lo;
  g.q_hi = hi;
  return g;
}

GridSpec GridSpec::values(size_t count, double lo, double hi) {
  GridSpec g;
  g.mode = Mode::EquispacedValues;
  g.count = count;
  g.v_lo = lo;
  g.v_hi = hi;
  return g;
}

Vec GridSpec::materialize(const ContinuousFamilySpec& family) const {
  switch (mode) {
    case Mode::ExplicitPoints: {
      if (points.empty()) throw std::invalid_argument("explicit grid needs points");
      return points;
    }
    case Mode::EquispacedQuantiles: {
      if (count < 2) throw std::invalid_argument("quantile grid needs count >= 2");
      if (!(q_lo > 0.0 && q_hi < 1.0 && q_lo < q_hi))
        throw std::invalid_argument("quantile bounds must satisfy 0 < lo < hi < 1");
      Vec pts(count);
      for (size_t i = 0; i < count; ++i) {
        double p = q_lo + (q_hi - q_lo) * static_cast<double>(i) / (count - 1);
        pts[i] = family.icdf(p);
      }
      return pts;
    }
    case Mode::EquispacedValues: {
      if (count < 2) throw std::invalid_argument("value grid needs count >= 2");
      Vec pts(count);
      for (size_t i = 0; i < count; ++i)
        pts[i] = v_lo + (v_hi - v_lo) * static_cast<double>(i) / (count - 1);
      return pts;
    }
  }
  return {};
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  switch (mode) {
    case Mode::ExplicitPoints:
      os << "explicit[" << points.size() << "]";
      break;
    case Mode::EquispacedQuantiles:
      os << "quantiles[" << count << "," << q_lo << "," << q_hi << "]";
      break;
    case Mode::EquispacedValues:
      os << "values[" << count << "," << v_lo << "," << v_hi << "]";
      break;
  }
  return os.str();
}

std::pair<FiniteSupport, Vec> discretize_pmf(const ContinuousFamilySpec& spec,
                                             const GridSpec& grid) {
  spec.check();
  Vec pts = grid.materialize(spec);
  Vec pmf(pts.size());
  double total = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    double f = spec.pdf(pts[i]);
    if (!std::isfinite(f) || f < 0.0)
      throw std::invalid_argument("density not finite/nonnegative at grid point");
    pmf[i] = f;
    total += f;
  }
  if (total <= 0.0) throw AllZeroMass("density vanishes on the entire grid");
  for (double& p : pmf) p /= total;
  return {FiniteSupport::scalar(pts), pmf};
}

FiniteSupport product_grid(const std::vector<Vec>& axes, size_t cap) {
  if (axes.empty()) throw std::invalid_argument("product grid needs >= 1 axis");
  size_t total = 1;
  for (const Vec& a : axes) {
    if (a.empty()) throw std::invalid_argument("empty axis");
    if (a.size() > cap / total)
      throw GridTooLarge("product grid exceeds cap of " + std::to_string(cap));
    total *= a.size();
  }
  FiniteSupport s;
  s.labels.reserve(total);
  s.values.reserve(total);
  std::vector<size_t> idx(axes.size(), 0);
  for (size_t k = 0; k < total; ++k) {
    Vec pt(axes.size());
    std::string label;
    for (size_t d = 0; d < axes.size(); ++d) {
      pt[d] = axes[d][idx[d]];
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", pt[d]);
      label += (d ? "," : "") + std::string(buf);
    }
    s.values.push_back(std::move(pt));
    s.labels.push_back("(" + label + ")");
    for (size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  return s;
}

Vec pmf_on_support(const FiniteSupport& support,
                   const std::function<double(const Vec&)>& density) {
  Vec pmf(support.size());
  double total = 0.0;
  for (size_t i = 0; i < support.size(); ++i) {
    double f = density(support.values[i]);
    if (!std::isfinite(f) || f < 0.0)
      throw std::invalid_argument("density not finite/nonnegative at grid point");
    pmf[i] = f;
    total += f;
  }
  if (total <= 0.0) throw AllZeroMass("density vanishes on the entire grid");
  for (double& p : pmf) p /= total;
  return pmf;
}

}  // namespace bceid::discretize
