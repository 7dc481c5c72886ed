#include <doctest.h>

#include <cmath>
#include <thread>

#include "bceid/solver.hpp"

using namespace bceid;
using namespace bceid::solver;

TEST_CASE("lp basics") {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = {1.0};
  lp.ineq_rows = {{1.0}};
  lp.ineq_rhs = {1.0};
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lp infeasible") {
  // x >= 1 and x <= 0
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = {0.0};
  lp.ineq_rows = {{-1.0}, {1.0}};
  lp.ineq_rhs = {-1.0, 0.0};
  auto r = solve_lp(lp);
  CHECK(r.status == LpStatus::Infeasible);
  // Farkas certificate: w >= 0 on ineq rows, A'w >= 0, rhs'w < 0
  REQUIRE(r.ineq_duals.size() == 2);
  double colsum = -r.ineq_duals[0] + r.ineq_duals[1];
  double rhssum = -r.ineq_duals[0];
  CHECK(r.ineq_duals[0] >= -1e-12);
  CHECK(r.ineq_duals[1] >= -1e-12);
  CHECK(colsum >= -1e-9);
  CHECK(rhssum < -1e-9);
}

TEST_CASE("lp unbounded") {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = {1.0};
  auto r = solve_lp(lp);
  CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("lp with free variables and equalities") {
  // min x + y  s.t. x + y = 2, x - y <= 4, y free, x >= 0
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  lp.objective = {1.0, 1.0};
  lp.eq_rows = {{1.0, 1.0}};
  lp.eq_rhs = {2.0};
  lp.ineq_rows = {{1.0, -1.0}};
  lp.ineq_rhs = {4.0};
  lp.signs = {VarSign::NonNegative, VarSign::Free};
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("random feasible systems have small residuals and exact duals") {
  for (int trial = 0; trial < 60; ++trial) {
    auto rng = stream_rng(42, trial);
    int m = 2 + static_cast<int>(rng() % 5);
    int n = m + 1 + static_cast<int>(rng() % 7);
    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.objective.resize(n);
    for (auto& c : lp.objective) c = 2.0 * uniform01(rng) - 1.0;
    Vec x0(n);
    for (auto& v : x0) v = uniform01(rng);
    for (int i = 0; i < m; ++i) {
      Vec row(n);
      for (auto& a : row) a = 2.0 * uniform01(rng) - 1.0;
      lp.eq_rhs.push_back(dot(row, x0));
      lp.eq_rows.push_back(std::move(row));
    }
    auto r = solve_lp(lp);
    if (r.status == LpStatus::Unbounded) continue;
    REQUIRE(r.status == LpStatus::Optimal);
    for (size_t i = 0; i < lp.eq_rows.size(); ++i)
      CHECK(std::abs(dot(lp.eq_rows[i], r.x) - lp.eq_rhs[i]) < 1e-8);
    // strong duality: value = rhs' * duals
    double dualval = dot(lp.eq_rhs, r.eq_duals);
    CHECK(dualval == doctest::Approx(r.value).epsilon(1e-7));
  }
}

TEST_CASE("row scaling leaves optimum unchanged") {
  auto rng = stream_rng(99, 1);
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  int n = 6;
  lp.objective.resize(n);
  for (auto& c : lp.objective) c = uniform01(rng);
  for (int i = 0; i < 4; ++i) {
    Vec row(n);
    for (auto& a : row) a = uniform01(rng);
    lp.ineq_rows.push_back(row);
    lp.ineq_rhs.push_back(1.0 + uniform01(rng));
  }
  auto r1 = solve_lp(lp);
  REQUIRE(r1.status == LpStatus::Optimal);
  LinearProgram lp2 = lp;
  for (size_t i = 0; i < lp2.ineq_rows.size(); ++i) {
    double s = 0.1 + 10.0 * uniform01(rng);
    for (auto& a : lp2.ineq_rows[i]) a *= s;
    lp2.ineq_rhs[i] *= s;
  }
  auto r2 = solve_lp(lp2);
  REQUIRE(r2.status == LpStatus::Optimal);
  CHECK(r2.value == doctest::Approx(r1.value).epsilon(1e-9));
}

TEST_CASE("concurrent solves match sequential bit for bit") {
  auto make = [](int k) {
    auto rng = stream_rng(1234, k);
    LinearProgram lp;
    lp.sense = Sense::Maximize;
    int n = 5;
    lp.objective.resize(n);
    for (auto& c : lp.objective) c = uniform01(rng);
    for (int i = 0; i < 3; ++i) {
      Vec row(n);
      for (auto& a : row) a = uniform01(rng);
      lp.ineq_rows.push_back(row);
      lp.ineq_rhs.push_back(1.0);
    }
    return lp;
  };
  std::vector<double> seq(8), par(8);
  for (int k = 0; k < 8; ++k) seq[k] = solve_lp(make(k)).value;
  parallel_for(8, 4, [&](size_t k) { par[k] = solve_lp(make(static_cast<int>(k))).value; });
  for (int k = 0; k < 8; ++k) CHECK(seq[k] == par[k]);
}

TEST_CASE("ball constrained: pure direction gives the norm") {
  NormConstrainedProgram p;
  p.lp.sense = Sense::Maximize;
  p.lp.objective = {3.0, -4.0};
  p.lp.signs = {VarSign::Free, VarSign::Free};
  p.ball_block = {0, 1};
  auto r = solve_norm_constrained(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(r.x[0] == doctest::Approx(0.6).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(-0.8).epsilon(1e-4));
}

TEST_CASE("ball constrained: zero objective") {
  NormConstrainedProgram p;
  p.lp.sense = Sense::Maximize;
  p.lp.objective = {0.0, 0.0};
  p.lp.signs = {VarSign::Free, VarSign::Free};
  p.ball_block = {0, 1};
  auto r = solve_norm_constrained(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("ball constrained with linear rows, hand checkable") {
  // max b1 + tau, tau <= 2, ||b|| <= 1  ->  3 at b=(1,0), tau=2
  NormConstrainedProgram p;
  p.lp.sense = Sense::Maximize;
  p.lp.objective = {1.0, 0.0, 1.0};
  p.lp.signs = {VarSign::Free, VarSign::Free, VarSign::NonNegative};
  p.lp.ineq_rows = {{0.0, 0.0, 1.0}};
  p.lp.ineq_rhs = {2.0};
  p.ball_block = {0, 1};
  auto r = solve_norm_constrained(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("ball constrained vs dense ball grid oracle") {
  // random small instances: max c_b'b + c_t't  s.t. A [b;t] <= rhs, ||b|| <= 1,
  // t >= 0; oracle evaluates the inner LP on a dense grid of b in the disk
  for (int trial = 0; trial < 12; ++trial) {
    auto rng = stream_rng(5150, trial);
    int d = 2, nt = 2, mrows = 3;
    NormConstrainedProgram p;
    p.lp.sense = Sense::Maximize;
    p.lp.objective.resize(d + nt);
    p.lp.signs.assign(d + nt, VarSign::NonNegative);
    for (int j = 0; j < d; ++j) {
      p.lp.objective[j] = 2.0 * uniform01(rng) - 1.0;
      p.lp.signs[j] = VarSign::Free;
      p.ball_block.push_back(j);
    }
    for (int j = 0; j < nt; ++j) p.lp.objective[d + j] = uniform01(rng) - 0.5;
    for (int i = 0; i < mrows; ++i) {
      Vec row(d + nt);
      for (auto& a : row) a = 2.0 * uniform01(rng) - 1.0;
      p.lp.ineq_rows.push_back(row);
      p.lp.ineq_rhs.push_back(0.5 + uniform01(rng));
    }
    auto r = solve_norm_constrained(p);
    REQUIRE(r.status == LpStatus::Optimal);

    auto phi = [&](double rad, double ang) {
      Vec b = {rad * std::cos(ang), rad * std::sin(ang)};
      LinearProgram inner;
      inner.sense = Sense::Maximize;
      inner.objective.assign(p.lp.objective.begin() + d, p.lp.objective.end());
      for (int i = 0; i < mrows; ++i) {
        Vec row(p.lp.ineq_rows[i].begin() + d, p.lp.ineq_rows[i].end());
        inner.ineq_rows.push_back(row);
        inner.ineq_rhs.push_back(p.lp.ineq_rhs[i] - p.lp.ineq_rows[i][0] * b[0] -
                                 p.lp.ineq_rows[i][1] * b[1]);
      }
      auto ir2 = solve_lp(inner);
      if (ir2.status != LpStatus::Optimal) return -kInf;
      return p.lp.objective[0] * b[0] + p.lp.objective[1] * b[1] + ir2.value;
    };
    double best = -kInf, best_rad = 0.0, best_ang = 0.0;
    int nr = 30, na = 90;
    for (int irad = 0; irad <= nr; ++irad)
      for (int ia = 0; ia < na; ++ia) {
        double rad = static_cast<double>(irad) / nr;
        double ang = 2.0 * M_PI * ia / na;
        double v = phi(rad, ang);
        if (v > best) { best = v; best_rad = rad; best_ang = ang; }
      }
    for (int irad = -15; irad <= 15; ++irad)
      for (int ia = -15; ia <= 15; ++ia) {
        double rad = std::clamp(best_rad + irad / (15.0 * nr), 0.0, 1.0);
        double ang = best_ang + ia * 2.0 * M_PI / (15.0 * na);
        best = std::max(best, phi(rad, ang));
      }
    CHECK(r.value == doctest::Approx(best).epsilon(2e-3));
    CHECK(r.value >= best - 1e-6);  // grid can only undershoot
  }
}

TEST_CASE("lp text export") {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = {1.0, 0.0};
  lp.eq_rows = {{1.0, 1.0}};
  lp.eq_rhs = {1.0};
  lp.ineq_rows = {{-2.0, 1.0}};
  lp.ineq_rhs = {0.0};
  LpNames names;
  names.vars = {"p_a", "p_b"};
  names.eq_rows = {"cons_0"};
  names.ineq_rows = {"obed_0"};
  std::string s = to_lp_format(lp, names);
  CHECK(s.find("Maximize") != std::string::npos);
  CHECK(s.find("cons_0:") != std::string::npos);
  CHECK(s.find("obed_0:") != std::string::npos);
  CHECK(s.find("p_a") != std::string::npos);
  CHECK(s.find("<= 0") != std::string::npos);
  CHECK(s.find("= 1") != std::string::npos);
  CHECK(s.find("End") != std::string::npos);
}
