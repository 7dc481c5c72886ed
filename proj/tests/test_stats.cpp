#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bceid/stats.hpp"

using namespace bceid;
namespace st = bceid::stats;

TEST_CASE("standard normal values") {
  CHECK(st::norm_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(st::norm_pdf(1.0) == doctest::Approx(0.2419707245).epsilon(1e-9));
  CHECK(st::norm_cdf(0.0) == doctest::Approx(0.5));
  CHECK(st::norm_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-8));
  CHECK(st::norm_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
  CHECK(st::norm_quantile(st::norm_cdf(-1.234)) == doctest::Approx(-1.234).epsilon(1e-10));
}

TEST_CASE("gumbel round trips") {
  for (double p : {0.001, 0.25, 0.5, 0.9, 0.999})
    CHECK(st::gumbel_cdf(st::gumbel_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK(st::gumbel_quantile(0.999) == doctest::Approx(6.9072550705).epsilon(1e-9));
}

TEST_CASE("beta values") {
  // Beta(2,3): f(x) = 12 x (1-x)^2, F(0.5) = 0.6875
  CHECK(st::beta_pdf(0.5, 2, 3) == doctest::Approx(12 * 0.5 * 0.25).epsilon(1e-12));
  CHECK(st::beta_cdf(0.5, 2, 3) == doctest::Approx(0.6875).epsilon(1e-12));
  CHECK(st::beta_quantile(0.6875, 2, 3) == doctest::Approx(0.5).epsilon(1e-9));
  // Beta(1,10): f(x) = 10 (1-x)^9
  CHECK(st::beta_pdf(0.01, 1, 10) == doctest::Approx(10 * std::pow(0.99, 9)).epsilon(1e-12));
}

namespace {
double trapz(const std::function<double(double)>& f, double lo, double hi, int n) {
  double h = (hi - lo) / n, s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) s += f(lo + i * h);
  return s * h;
}
}  // namespace

TEST_CASE("positive stable half law matches levy closed form") {
  // alpha = 1/2 is the Levy law with cdf erfc(1/(2 sqrt(s)))
  for (double s : {0.05, 0.2, 1.0, 5.0, 40.0}) {
    double levy_cdf = std::erfc(1.0 / (2.0 * std::sqrt(s)));
    double levy_pdf = std::exp(-1.0 / (4.0 * s)) / (2.0 * std::sqrt(M_PI) * std::pow(s, 1.5));
    CHECK(st::positive_stable_cdf(s, 0.5) == doctest::Approx(levy_cdf).epsilon(1e-8));
    CHECK(st::positive_stable_pdf(s, 0.5) == doctest::Approx(levy_pdf).epsilon(1e-8));
  }
}

TEST_CASE("positive stable density matches cdf derivative") {
  for (double a : {0.3, 0.7}) {
    for (double s : {0.3, 1.0, 4.0}) {
      double h = 1e-5 * s;
      double num = (st::positive_stable_cdf(s + h, a) - st::positive_stable_cdf(s - h, a)) /
                   (2.0 * h);
      CHECK(st::positive_stable_pdf(s, a) == doctest::Approx(num).epsilon(1e-5));
    }
  }
}

TEST_CASE("stable law laplace transform") {
  // E[e^{-tS}] = e^{-t^alpha}, checked by quadrature against the density
  for (double a : {0.4, 0.6}) {
    double t = 1.0;
    double lt = trapz([&](double s) { return std::exp(-t * s) * st::positive_stable_pdf(s, a); },
                      1e-8, 60.0, 4000);
    CHECK(lt == doctest::Approx(std::exp(-std::pow(t, a))).epsilon(2e-3));
  }
}

TEST_CASE("cardell plus scaled gumbel is gumbel (KS)") {
  // the defining property of C(lambda); validates Kanter sampling end to end
  for (double lam : {0.3, 0.5, 0.8}) {
    auto rng = stream_rng(20240601, static_cast<uint64_t>(lam * 1000));
    size_t n = 20000;
    Vec sample(n);
    for (size_t i = 0; i < n; ++i) {
      double xi = st::cardell_sample(lam, rng);
      double eta = st::gumbel_quantile(uniform01(rng));
      sample[i] = xi + lam * eta;
    }
    double d = st::ks_statistic(sample, [](double x) { return st::gumbel_cdf(x); });
    // 1% critical value ~ 1.63/sqrt(n) = 0.0115
    CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("cardell cdf/quantile round trip and sampler agreement") {
  double lam = 0.5;
  for (double p : {0.05, 0.3, 0.5, 0.9})
    CHECK(st::cardell_cdf(st::cardell_quantile(p, lam), lam) ==
          doctest::Approx(p).epsilon(1e-8));
  auto rng = stream_rng(7, 7);
  size_t n = 20000;
  Vec sample(n);
  for (size_t i = 0; i < n; ++i) sample[i] = st::cardell_sample(lam, rng);
  double d = st::ks_statistic(sample, [&](double x) { return st::cardell_cdf(x, lam); });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}
