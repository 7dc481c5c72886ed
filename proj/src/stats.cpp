#include "bceid/stats.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_randist.h>

#include <algorithm>
#include <cmath>

namespace bceid::stats {

namespace {
const int kGslQuiet = [] {
  gsl_set_error_handler_off();
  return 0;
}();
}  // namespace

double norm_pdf(double x) { return gsl_ran_ugaussian_pdf(x); }
double norm_cdf(double x) { return gsl_cdf_ugaussian_P(x); }
double norm_quantile(double p) { return gsl_cdf_ugaussian_Pinv(p); }

double gumbel_pdf(double x) { return std::exp(-x - std::exp(-x)); }
double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }
double gumbel_quantile(double p) { return -std::log(-std::log(p)); }

double beta_pdf(double x, double a, double b) { return gsl_ran_beta_pdf(x, a, b); }
double beta_cdf(double x, double a, double b) { return gsl_cdf_beta_P(x, a, b); }
double beta_quantile(double p, double a, double b) { return gsl_cdf_beta_Pinv(p, a, b); }

namespace {

// Zolotarev kernel for the one-sided stable law with E[e^{-tS}] = e^{-t^alpha}:
//   A(phi) = sin(a*phi)^{a/(1-a)} * sin((1-a)*phi) / sin(phi)^{1/(1-a)},
// monotone increasing on (0, pi), A(0+) = a^{a/(1-a)} (1-a).
double zolotarev_kernel(double phi, double a) {
  if (phi <= 0.0) return std::pow(a, a / (1.0 - a)) * (1.0 - a);
  double la = std::log(std::sin(a * phi)) * (a / (1.0 - a)) +
              std::log(std::sin((1.0 - a) * phi)) -
              std::log(std::sin(phi)) / (1.0 - a);
  return std::exp(la);
}

template <typename F>
double simpson(const F& f, double lo, double hi, double fl, double fm, double fh,
               double tol, int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = f(lm), frm = f(rm);
  double whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fh);
  double left = (mid - lo) / 6.0 * (fl + 4.0 * flm + fm);
  double right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fh);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, lo, mid, fl, flm, fm, tol * 0.5, depth - 1) +
         simpson(f, mid, hi, fm, frm, fh, tol * 0.5, depth - 1);
}

template <typename F>
double integrate(const F& f, double lo, double hi, double tol) {
  double mid = 0.5 * (lo + hi);
  return simpson(f, lo, hi, f(lo), f(mid), f(hi), tol, 40);
}

// Splits (0, pi) at the point where c*A(phi) = 1 so the quadrature resolves
// the boundary layer of exp(-c*A) for both small and large c.
double split_point(double c, double a) {
  double lo = 1e-12, hi = M_PI - 1e-12;
  if (c * zolotarev_kernel(lo, a) >= 1.0) return lo;
  if (c * zolotarev_kernel(hi, a) <= 1.0) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (c * zolotarev_kernel(mid, a) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double positive_stable_pdf(double s, double alpha) {
  if (s <= 0.0) return 0.0;
  double a = alpha;
  double c = std::pow(s, -a / (1.0 - a));
  auto f = [&](double phi) {
    double A = zolotarev_kernel(phi, a);
    double e = c * A;
    return e > 700.0 ? 0.0 : A * std::exp(-e);
  };
  double star = split_point(c, a);
  double tol = 1e-13;
  double I = integrate(f, 1e-12, star, tol) + integrate(f, star, M_PI - 1e-12, tol);
  return (a / (1.0 - a)) * std::pow(s, -1.0 / (1.0 - a)) * I / M_PI;
}

double positive_stable_cdf(double s, double alpha) {
  if (s <= 0.0) return 0.0;
  double a = alpha;
  double c = std::pow(s, -a / (1.0 - a));
  auto f = [&](double phi) {
    double e = c * zolotarev_kernel(phi, a);
    return e > 700.0 ? 0.0 : std::exp(-e);
  };
  double star = split_point(c, a);
  double tol = 1e-13;
  double I = integrate(f, 1e-12, star, tol) + integrate(f, star, M_PI - 1e-12, tol);
  return std::min(1.0, std::max(0.0, I / M_PI));
}

double positive_stable_sample(double alpha, double u_angle, double w_exp) {
  // Kanter's method: S = (A(pi*u)/W)^{(1-a)/a}, W ~ Exp(1), U ~ Unif(0,1).
  double A = zolotarev_kernel(M_PI * u_angle, alpha);
  return std::pow(A / w_exp, (1.0 - alpha) / alpha);
}

double cardell_pdf(double x, double lambda) {
  double s = std::exp(x / lambda);
  return positive_stable_pdf(s, lambda) * s / lambda;
}

double cardell_cdf(double x, double lambda) {
  return positive_stable_cdf(std::exp(x / lambda), lambda);
}

double cardell_quantile(double p, double lambda) {
  if (p <= 0.0 || p >= 1.0) throw ConfigError("cardell_quantile: p outside (0,1)");
  double lo = -1.0, hi = 1.0;
  while (cardell_cdf(lo, lambda) > p) lo -= std::max(1.0, -lo);
  while (cardell_cdf(hi, lambda) < p) hi += std::max(1.0, hi);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (cardell_cdf(mid, lambda) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double cardell_sample(double lambda, std::mt19937_64& rng) {
  double u = uniform01(rng);
  double w = -std::log(uniform01(rng));
  return lambda * std::log(positive_stable_sample(lambda, u, w));
}

double ks_statistic(Vec sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  size_t n = sample.size();
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double F = cdf(sample[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace bceid::stats
