#pragma once

#include <cstdint>
#include <random>

#include "bceid/common.hpp"

namespace bceid::stats {

// Standard normal
double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

// Gumbel (location 0, scale 1), CDF exp(-exp(-x))
double gumbel_pdf(double x);
double gumbel_cdf(double x);
double gumbel_quantile(double p);
constexpr double kEulerMascheroni = 0.57721566490153286;

// Beta(a,b) on [0,1]
double beta_pdf(double x, double a, double b);
double beta_cdf(double x, double a, double b);
double beta_quantile(double p, double a, double b);

/// One-sided (positive) stable law with Laplace transform E[e^{-tS}] = e^{-t^alpha},
/// 0 < alpha < 1. Density and CDF via the Zolotarev integral representation,
/// sampling via Kanter's method.
double positive_stable_pdf(double s, double alpha);
double positive_stable_cdf(double s, double alpha);
double positive_stable_sample(double alpha, double u_angle, double w_exp);

/// Cardell C(lambda) distribution: the law of xi such that xi + lambda*eta is
/// standard Gumbel when eta is standard Gumbel independent of xi. Equals
/// lambda * log S with S one-sided stable(lambda).
double cardell_pdf(double x, double lambda);
double cardell_cdf(double x, double lambda);
double cardell_quantile(double p, double lambda);
double cardell_sample(double lambda, std::mt19937_64& rng);

/// Kolmogorov-Smirnov one-sample statistic of `sample` against `cdf`.
double ks_statistic(Vec sample, const std::function<double(double)>& cdf);

}  // namespace bceid::stats
