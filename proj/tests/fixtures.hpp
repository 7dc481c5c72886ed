#pragma once

#include <Eigen/Dense>
#include <random>

#include "bceid/bce.hpp"
#include "bceid/dw_engine.hpp"
#include "bceid/model.hpp"

namespace fixtures {

using namespace bceid;
using model::BaselineProblem;
using model::FiniteSupport;
using model::InformationStructure;

// Y = {a,b}; V = {v1,v2}; u(a,v1)=1, u(a,v2)=0, u(b,v1)=0, u(b,v2)=1.
inline BaselineProblem instance_a(Vec prior = {0.5, 0.5}) {
  BaselineProblem pb;
  pb.actions.labels = {"a", "b"};
  pb.actions.values = {{0.0}, {1.0}};
  pb.covariates = FiniteSupport::single("x0");
  pb.eps_support = FiniteSupport::single("e0");
  pb.state_support.labels = {"v1", "v2"};
  pb.state_support.values = {{0.0}, {1.0}};
  pb.allocate();
  pb.u_ref(0, 0, 0, 0) = 1.0;
  pb.u_ref(0, 0, 0, 1) = 0.0;
  pb.u_ref(1, 0, 0, 0) = 0.0;
  pb.u_ref(1, 0, 0, 1) = 1.0;
  pb.prior_v = prior;
  pb.eps_pmf = {1.0};
  return pb;
}

// u(a,.) = 2 dominates u(b,.) = 1 in every state.
inline BaselineProblem dominant_problem() {
  BaselineProblem pb = instance_a();
  pb.u_ref(0, 0, 0, 0) = 2.0;
  pb.u_ref(0, 0, 0, 1) = 2.0;
  pb.u_ref(1, 0, 0, 0) = 1.0;
  pb.u_ref(1, 0, 0, 1) = 1.0;
  return pb;
}

inline BaselineProblem random_problem(std::mt19937_64& rng, size_t ny, size_t nv,
                                      size_t ne = 1, size_t nx = 1,
                                      double utility_scale = 2.0) {
  BaselineProblem pb;
  for (size_t y = 0; y < ny; ++y) {
    pb.actions.labels.push_back("y" + std::to_string(y));
    pb.actions.values.push_back({static_cast<double>(y)});
  }
  for (size_t x = 0; x < nx; ++x) {
    pb.covariates.labels.push_back("x" + std::to_string(x));
    pb.covariates.values.push_back({static_cast<double>(x)});
  }
  for (size_t e = 0; e < ne; ++e) {
    pb.eps_support.labels.push_back("e" + std::to_string(e));
    pb.eps_support.values.push_back({static_cast<double>(e)});
  }
  for (size_t v = 0; v < nv; ++v) {
    pb.state_support.labels.push_back("v" + std::to_string(v));
    pb.state_support.values.push_back({static_cast<double>(v)});
  }
  pb.allocate();
  for (auto& u : pb.utility) u = utility_scale * (2.0 * uniform01(rng) - 1.0);
  for (size_t x = 0; x < nx; ++x) {
    Vec w(ne);
    for (auto& v : w) v = 0.05 + uniform01(rng);
    normalize(w);
    for (size_t e = 0; e < ne; ++e) {
      pb.eps_pmf[x * ne + e] = w[e];
      Vec p(nv);
      for (auto& v : p) v = 0.05 + uniform01(rng);
      normalize(p);
      for (size_t v = 0; v < nv; ++v) pb.prior_v[(x * ne + e) * nv + v] = p[v];
    }
  }
  return pb;
}

inline InformationStructure random_info(std::mt19937_64& rng, const BaselineProblem& pb,
                                        size_t nt) {
  InformationStructure info;
  for (size_t t = 0; t < nt; ++t) {
    info.signal_support.labels.push_back("t" + std::to_string(t));
    info.signal_support.values.push_back({static_cast<double>(t)});
  }
  info.signal_pmf.assign(pb.nx() * pb.ne() * pb.nv() * nt, 0.0);
  for (size_t i = 0; i < pb.nx() * pb.ne() * pb.nv(); ++i) {
    Vec p(nt);
    for (auto& v : p) v = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
    double s = 0.0;
    for (double v : p) s += v;
    if (s == 0.0) p[rng() % nt] = 1.0;
    normalize(p);
    for (size_t t = 0; t < nt; ++t) info.signal_pmf[i * nt + t] = p[t];
  }
  return info;
}

/// Brute-force vertex enumeration of the per-x BCE polytope (consistency +
/// obedience + nonnegativity). Exponential; test oracle only, small sizes.
inline std::vector<Vec> enumerate_bce_vertices(const BaselineProblem& pb, size_t x) {
  const size_t ny = pb.ny(), ne = pb.ne(), nv = pb.nv();
  const size_t d = ne * ny * nv;
  auto col = [&](size_t e, size_t y, size_t v) { return (e * ny + y) * nv + v; };

  std::vector<Vec> rows;  // tight-candidate rows: obedience then nonneg
  std::vector<Vec> eq_rows;
  Vec eq_rhs;
  for (size_t e = 0; e < ne; ++e)
    for (size_t v = 0; v < nv; ++v) {
      Vec r(d, 0.0);
      for (size_t y = 0; y < ny; ++y) r[col(e, y, v)] = 1.0;
      eq_rows.push_back(r);
      eq_rhs.push_back(pb.prior(x, e, v));
    }
  for (size_t e = 0; e < ne; ++e)
    for (size_t y = 0; y < ny; ++y)
      for (size_t yp = 0; yp < ny; ++yp) {
        if (yp == y) continue;
        Vec r(d, 0.0);
        for (size_t v = 0; v < nv; ++v)
          r[col(e, y, v)] = -(pb.u(y, x, e, v) - pb.u(yp, x, e, v));
        rows.push_back(r);
      }
  size_t n_obed = rows.size();
  for (size_t j = 0; j < d; ++j) {
    Vec r(d, 0.0);
    r[j] = -1.0;  // -p_j <= 0
    rows.push_back(r);
  }

  size_t base = eq_rows.size();
  if (d < base) return {};
  size_t need = d - base;
  std::vector<Vec> verts;
  std::vector<size_t> pick(need);
  std::function<void(size_t, size_t)> rec = [&](size_t start, size_t k) {
    if (k == need) {
      Eigen::MatrixXd A(d, d);
      Eigen::VectorXd b(d);
      for (size_t i = 0; i < base; ++i) {
        for (size_t j = 0; j < d; ++j) A(i, j) = eq_rows[i][j];
        b(i) = eq_rhs[i];
      }
      for (size_t i = 0; i < need; ++i) {
        for (size_t j = 0; j < d; ++j) A(base + i, j) = rows[pick[i]][j];
        b(base + i) = 0.0;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) return;
      Eigen::VectorXd sol = lu.solve(b);
      Vec p(sol.data(), sol.data() + d);
      for (double v : p)
        if (v < -1e-9) return;
      for (size_t i = 0; i < n_obed; ++i)
        if (dot(rows[i], p) > 1e-9) return;
      for (const Vec& q : verts) {
        double diff = 0.0;
        for (size_t j = 0; j < d; ++j) diff = std::max(diff, std::abs(q[j] - p[j]));
        if (diff < 1e-8) return;
      }
      verts.push_back(std::move(p));
      return;
    }
    for (size_t i = start; i < rows.size(); ++i) {
      pick[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return verts;
}

/// eps-weighted choice marginal of a flat per-x joint [e][y][v].
inline Vec marginal_of(const BaselineProblem& pb, size_t x, const Vec& joint) {
  Vec m(pb.ny(), 0.0);
  for (size_t e = 0; e < pb.ne(); ++e)
    for (size_t y = 0; y < pb.ny(); ++y)
      for (size_t v = 0; v < pb.nv(); ++v)
        m[y] += pb.eps(x, e) * joint[(e * pb.ny() + y) * pb.nv() + v];
  return m;
}

/// Exact membership of a choice pmf in the predicted set at x.
inline bool in_predicted_set(const BaselineProblem& pb, size_t x, const Vec& pmf) {
  bce::BceDwSolver dw(pb, x, pmf);
  auto out = dw.feasibility();
  if (out.status == solver::LpStatus::Optimal) return true;
  if (out.status == solver::LpStatus::Infeasible) return false;
  throw SolverFailure(out.diagnostic);
}

}  // namespace fixtures
