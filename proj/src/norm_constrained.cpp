#include <Eigen/Dense>
#include <cmath>

#include "bceid/solver.hpp"

namespace bceid::solver {

namespace {

struct Cut {
  double offset;  // value cut: phi <= offset + grad'u ; feas cut: offset + grad'u >= 0
  Vec grad;
  bool feasibility;
};

/// Maximises t subject to t <= a_k + g_k'u (value cuts), h_l + e_l'u >= 0
/// (feasibility cuts) and u'u <= 1, by a log-barrier Newton method.
/// Returns {t, u}. Requires at least one value cut.
std::pair<double, Vec> solve_master(const std::vector<Cut>& cuts, int d) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  double t = kInf;
  for (const auto& c : cuts)
    if (!c.feasibility) t = std::min(t, c.offset);
  t -= 1.0;
  // if feasibility cuts exclude u = 0 the caller has already failed; keep
  // the barrier strictly feasible by shrinking t only
  double mu = 1.0;
  const int n = d + 1;
  for (int outer = 0; outer < 60; ++outer) {
    for (int inner = 0; inner < 80; ++inner) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);  // z = (t, u)
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      grad[0] = -1.0;  // minimise -t
      auto add_log = [&](double s, const Eigen::VectorXd& ds) {
        grad -= mu / s * ds;
        hess += mu / (s * s) * ds * ds.transpose();
      };
      for (const auto& c : cuts) {
        Eigen::VectorXd ds(n);
        if (c.feasibility) {
          ds[0] = 0.0;
        } else {
          ds[0] = -1.0;
        }
        for (int j = 0; j < d; ++j) ds[j + 1] = c.grad[j];
        double s = c.offset + (c.feasibility ? 0.0 : -t);
        for (int j = 0; j < d; ++j) s += c.grad[j] * u[j];
        if (s <= 0.0) s = 1e-300;
        add_log(s, ds);
      }
      double sball = 1.0 - u.squaredNorm();
      if (sball <= 0.0) sball = 1e-300;
      Eigen::VectorXd dball = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < d; ++j) dball[j + 1] = -2.0 * u[j];
      add_log(sball, dball);
      hess.bottomRightCorner(d, d) += (2.0 * mu / sball) * Eigen::MatrixXd::Identity(d, d);

      Eigen::VectorXd step = hess.ldlt().solve(-grad);
      if (!step.allFinite()) break;
      // backtrack to stay strictly inside
      double alpha = 1.0;
      auto feasible_at = [&](double a) {
        double tt = t + a * step[0];
        Eigen::VectorXd uu = u + a * step.tail(d);
        if (uu.squaredNorm() >= 1.0 - 1e-14) return false;
        for (const auto& c : cuts) {
          double s = c.offset + (c.feasibility ? 0.0 : -tt);
          for (int j = 0; j < d; ++j) s += c.grad[j] * uu[j];
          if (s <= 1e-300) return false;
        }
        return true;
      };
      while (alpha > 1e-14 && !feasible_at(alpha)) alpha *= 0.5;
      if (alpha <= 1e-14) break;
      t += alpha * step[0];
      u += alpha * step.tail(d);
      if (step.norm() * alpha < 1e-13 * (1.0 + std::abs(t))) break;
    }
    mu *= 0.12;
    if (mu < 1e-14) break;
  }
  return {t, Vec(u.data(), u.data() + d)};
}

}  // namespace

NormConstrainedResult solve_norm_constrained(const NormConstrainedProgram& prog,
                                             const Tolerances& tols) {
  const LinearProgram& lp = prog.lp;
  lp.check();
  NormConstrainedResult out;
  const size_t n = lp.num_vars();
  const int d = static_cast<int>(prog.ball_block.size());
  if (d == 0) throw std::invalid_argument("empty ball block");
  std::vector<char> in_ball(n, 0);
  for (int j : prog.ball_block) in_ball[j] = 1;
  const bool maximize = lp.sense == Sense::Maximize;
  const double orient = maximize ? 1.0 : -1.0;

  // inner LP over the non-ball variables, parametric in u through the rhs
  std::vector<int> rest;
  for (size_t j = 0; j < n; ++j)
    if (!in_ball[j]) rest.push_back(static_cast<int>(j));
  LinearProgram inner;
  inner.sense = Sense::Maximize;
  inner.objective.resize(rest.size());
  inner.signs.resize(rest.size());
  for (size_t k = 0; k < rest.size(); ++k) {
    inner.objective[k] = orient * lp.objective[rest[k]];
    inner.signs[k] = lp.signs.empty() ? VarSign::NonNegative : lp.signs[rest[k]];
  }
  for (const auto& r : lp.eq_rows) {
    Vec row(rest.size());
    for (size_t k = 0; k < rest.size(); ++k) row[k] = r[rest[k]];
    inner.eq_rows.push_back(std::move(row));
  }
  inner.eq_rhs = lp.eq_rhs;
  for (const auto& r : lp.ineq_rows) {
    Vec row(rest.size());
    for (size_t k = 0; k < rest.size(); ++k) row[k] = r[rest[k]];
    inner.ineq_rows.push_back(std::move(row));
  }
  inner.ineq_rhs = lp.ineq_rhs.empty() ? Vec(lp.ineq_rows.size(), 0.0) : lp.ineq_rhs;

  Vec cball(d);
  for (int j = 0; j < d; ++j) cball[j] = orient * lp.objective[prog.ball_block[j]];

  // phi(u) = cball'u + value of inner LP with rhs shifted by the ball columns
  auto eval = [&](const Vec& u, double* val, Vec* grad, Cut* feas_cut) -> bool {
    LinearProgram p = inner;
    for (size_t i = 0; i < p.eq_rhs.size(); ++i)
      for (int j = 0; j < d; ++j) p.eq_rhs[i] -= lp.eq_rows[i][prog.ball_block[j]] * u[j];
    for (size_t i = 0; i < p.ineq_rhs.size(); ++i)
      for (int j = 0; j < d; ++j) p.ineq_rhs[i] -= lp.ineq_rows[i][prog.ball_block[j]] * u[j];
    LpResult r = solve_lp(p, tols);
    ++out.inner_solves;
    if (r.status == LpStatus::Optimal) {
      *val = dot(cball, u) + r.value;
      grad->assign(d, 0.0);
      for (int j = 0; j < d; ++j) {
        double g = cball[j];
        for (size_t i = 0; i < p.eq_rhs.size(); ++i)
          g -= r.eq_duals[i] * lp.eq_rows[i][prog.ball_block[j]];
        for (size_t i = 0; i < p.ineq_rhs.size(); ++i)
          g -= r.ineq_duals[i] * lp.ineq_rows[i][prog.ball_block[j]];
        (*grad)[j] = g;
      }
      return true;
    }
    if (r.status == LpStatus::Infeasible) {
      // Farkas certificate w gives the feasibility cut w'(rhs - A_B u) >= 0
      feas_cut->feasibility = true;
      feas_cut->offset = 0.0;
      feas_cut->grad.assign(d, 0.0);
      for (size_t i = 0; i < lp.eq_rhs.size(); ++i) feas_cut->offset += r.eq_duals[i] * lp.eq_rhs[i];
      for (size_t i = 0; i < inner.ineq_rhs.size(); ++i)
        feas_cut->offset += r.ineq_duals[i] * inner.ineq_rhs[i];
      for (int j = 0; j < d; ++j) {
        double g = 0.0;
        for (size_t i = 0; i < lp.eq_rhs.size(); ++i)
          g -= r.eq_duals[i] * lp.eq_rows[i][prog.ball_block[j]];
        for (size_t i = 0; i < inner.ineq_rhs.size(); ++i)
          g -= r.ineq_duals[i] * lp.ineq_rows[i][prog.ball_block[j]];
        feas_cut->grad[j] = g;
      }
      // certificate orientation: w'rhs(u) < 0 at the probed u, so require >= 0
      return false;
    }
    if (r.status == LpStatus::Unbounded) throw SolverFailure("inner LP unbounded in ball solver");
    throw SolverFailure("inner LP failure in ball solver: " + r.diagnostic);
  };

  std::vector<Cut> cuts;
  Vec u0(d, 0.0), grad(d);
  double val;
  Cut fc;
  if (!eval(u0, &val, &grad, &fc)) {
    // centre infeasible: report infeasible (our program shapes always admit u = 0)
    out.status = LpStatus::Infeasible;
    out.diagnostic = "inner program infeasible at ball centre";
    return out;
  }
  double best_val = val;
  Vec best_u = u0;
  cuts.push_back({val - dot(grad, u0), grad, false});

  const int max_cuts = 600;
  for (int it = 0; it < max_cuts; ++it) {
    auto [ub, u] = solve_master(cuts, d);
    out.gap = ub - best_val;
    if (out.gap <= tols.qclp_gap * std::max(1.0, std::abs(ub)) + 1e-12) break;
    if (eval(u, &val, &grad, &fc)) {
      if (val > best_val) {
        best_val = val;
        best_u = u;
      }
      cuts.push_back({val - dot(grad, u), grad, false});
    } else {
      cuts.push_back(fc);
    }
  }

  // assemble the full solution at best_u
  LpResult fin;
  {
    LinearProgram p = inner;
    for (size_t i = 0; i < p.eq_rhs.size(); ++i)
      for (int j = 0; j < d; ++j) p.eq_rhs[i] -= lp.eq_rows[i][prog.ball_block[j]] * best_u[j];
    for (size_t i = 0; i < p.ineq_rhs.size(); ++i)
      for (int j = 0; j < d; ++j) p.ineq_rhs[i] -= lp.ineq_rows[i][prog.ball_block[j]] * best_u[j];
    fin = solve_lp(p, tols);
  }
  out.x.assign(n, 0.0);
  for (int j = 0; j < d; ++j) out.x[prog.ball_block[j]] = best_u[j];
  if (fin.status == LpStatus::Optimal)
    for (size_t k = 0; k < rest.size(); ++k) out.x[rest[k]] = fin.x[k];
  out.value = orient * best_val;

  double kkt = std::max(0.0, norm2(best_u) - 1.0);
  for (size_t i = 0; i < lp.eq_rows.size(); ++i)
    kkt = std::max(kkt, std::abs(dot(lp.eq_rows[i], out.x) - lp.eq_rhs[i]));
  for (size_t i = 0; i < lp.ineq_rows.size(); ++i)
    kkt = std::max(kkt, dot(lp.ineq_rows[i], out.x) -
                            (lp.ineq_rhs.empty() ? 0.0 : lp.ineq_rhs[i]));
  out.kkt_residual = kkt;
  out.status = (out.gap <= tols.qclp_gap * std::max(1.0, std::abs(best_val)) + 1e-10 &&
                kkt <= 1e-7)
                   ? LpStatus::Optimal
                   : LpStatus::Failure;
  if (out.status != LpStatus::Optimal)
    out.diagnostic = "gap " + std::to_string(out.gap) + " kkt " + std::to_string(kkt);
  return out;
}

}  // namespace bceid::solver
