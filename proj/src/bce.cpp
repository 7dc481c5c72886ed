#include "bceid/bce.hpp"

#include <cmath>

#include "bceid/dw_engine.hpp"

namespace bceid::bce {

using solver::LinearProgram;
using solver::LpNames;
using solver::LpStatus;

BCEConstraintSystem assemble_constraints(const BaselineProblem& pb,
                                         std::optional<Vec> empirical) {
  pb.check();
  if (empirical) {
    if (empirical->size() != pb.nx() * pb.ny())
      throw DimensionMismatch("empirical table must be |X| x |Y|");
    for (size_t x = 0; x < pb.nx(); ++x) {
      double s = 0.0;
      for (size_t y = 0; y < pb.ny(); ++y) s += (*empirical)[x * pb.ny() + y];
      if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("empirical conditional pmf does not sum to 1");
    }
  }
  BCEConstraintSystem sys;
  sys.problem = &pb;
  sys.empirical = std::move(empirical);
  return sys;
}

LinearProgram BCEConstraintSystem::to_lp(std::optional<size_t> only_x) const {
  const BaselineProblem& pb = *problem;
  std::vector<size_t> xs;
  if (only_x)
    xs.push_back(*only_x);
  else
    for (size_t x = 0; x < nx(); ++x) xs.push_back(x);

  LinearProgram lp;
  size_t nvars = xs.size() * vars_per_x();
  lp.objective.assign(nvars, 0.0);
  auto lcol = [&](size_t xi, size_t e, size_t y, size_t v) {
    return ((xi * ne() + e) * ny() + y) * nv() + v;
  };
  for (size_t xi = 0; xi < xs.size(); ++xi) {
    size_t x = xs[xi];
    for (size_t e = 0; e < ne(); ++e)
      for (size_t v = 0; v < nv(); ++v) {
        Vec row(nvars, 0.0);
        for (size_t y = 0; y < ny(); ++y) row[lcol(xi, e, y, v)] = 1.0;
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(pb.prior(x, e, v));
      }
  }
  for (size_t xi = 0; xi < xs.size(); ++xi) {
    size_t x = xs[xi];
    for (size_t e = 0; e < ne(); ++e)
      for (size_t y = 0; y < ny(); ++y)
        for (size_t yp = 0; yp < ny(); ++yp) {
          if (yp == y) continue;
          Vec row(nvars, 0.0);
          for (size_t v = 0; v < nv(); ++v)
            row[lcol(xi, e, y, v)] = -(pb.u(y, x, e, v) - pb.u(yp, x, e, v));
          lp.ineq_rows.push_back(std::move(row));
        }
  }
  if (empirical) {
    for (size_t xi = 0; xi < xs.size(); ++xi) {
      size_t x = xs[xi];
      for (size_t y = 0; y < ny(); ++y) {
        Vec row(nvars, 0.0);
        for (size_t e = 0; e < ne(); ++e)
          for (size_t v = 0; v < nv(); ++v) row[lcol(xi, e, y, v)] = pb.eps(x, e);
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(empirical_at(x, y));
      }
    }
  }
  lp.ineq_rhs.assign(lp.ineq_rows.size(), 0.0);
  return lp;
}

LpNames BCEConstraintSystem::lp_names(std::optional<size_t> only_x) const {
  std::vector<size_t> xs;
  if (only_x)
    xs.push_back(*only_x);
  else
    for (size_t x = 0; x < nx(); ++x) xs.push_back(x);
  LpNames names;
  auto tag = [](size_t i) { return std::to_string(i); };
  for (size_t x : xs)
    for (size_t e = 0; e < ne(); ++e)
      for (size_t y = 0; y < ny(); ++y)
        for (size_t v = 0; v < nv(); ++v)
          names.vars.push_back("p_x" + tag(x) + "_e" + tag(e) + "_y" + tag(y) + "_v" + tag(v));
  for (size_t x : xs)
    for (size_t e = 0; e < ne(); ++e)
      for (size_t v = 0; v < nv(); ++v)
        names.eq_rows.push_back("cons_x" + tag(x) + "_e" + tag(e) + "_v" + tag(v));
  for (size_t x : xs)
    for (size_t e = 0; e < ne(); ++e)
      for (size_t y = 0; y < ny(); ++y)
        for (size_t yp = 0; yp < ny(); ++yp)
          if (yp != y)
            names.ineq_rows.push_back("obed_x" + tag(x) + "_e" + tag(e) + "_y" + tag(y) +
                                      "_yp" + tag(yp));
  if (empirical)
    for (size_t x : xs)
      for (size_t y = 0; y < ny(); ++y)
        names.eq_rows.push_back("data_x" + tag(x) + "_y" + tag(y));
  return names;
}

double Residuals::max() const {
  return std::max(std::max(consistency, obedience), std::max(data, nonneg));
}

Residuals residuals(const BCEConstraintSystem& sys, const BceJoint& joint) {
  const BaselineProblem& pb = *sys.problem;
  Residuals r;
  for (size_t x = 0; x < pb.nx(); ++x) {
    for (size_t e = 0; e < pb.ne(); ++e) {
      for (size_t v = 0; v < pb.nv(); ++v) {
        double s = 0.0;
        for (size_t y = 0; y < pb.ny(); ++y) {
          double q = joint.p(x, e, y, v);
          r.nonneg = std::max(r.nonneg, -q);
          s += q;
        }
        r.consistency = std::max(r.consistency, std::abs(s - pb.prior(x, e, v)));
      }
      for (size_t y = 0; y < pb.ny(); ++y)
        for (size_t yp = 0; yp < pb.ny(); ++yp) {
          if (yp == y) continue;
          double g = 0.0;
          for (size_t v = 0; v < pb.nv(); ++v)
            g -= joint.p(x, e, y, v) * (pb.u(y, x, e, v) - pb.u(yp, x, e, v));
          r.obedience = std::max(r.obedience, g);
        }
    }
    if (sys.empirical) {
      Vec m = joint.choice_marginal(pb, x);
      for (size_t y = 0; y < pb.ny(); ++y)
        r.data = std::max(r.data, std::abs(m[y] - sys.empirical_at(x, y)));
    }
  }
  return r;
}

namespace {
std::optional<Vec> empirical_slice(const BCEConstraintSystem& sys, size_t x) {
  if (!sys.empirical) return std::nullopt;
  Vec e(sys.ny());
  for (size_t y = 0; y < sys.ny(); ++y) e[y] = sys.empirical_at(x, y);
  return e;
}
}  // namespace

bool is_feasible_at(const BCEConstraintSystem& sys, size_t x, const Tolerances& tols) {
  BceDwSolver dw(*sys.problem, x, empirical_slice(sys, x), tols);
  auto out = dw.feasibility();
  if (out.status == LpStatus::Optimal) return true;
  if (out.status == LpStatus::Infeasible) return false;
  throw SolverFailure("feasibility solve failed at x=" + std::to_string(x) + ": " +
                      out.diagnostic);
}

bool is_feasible(const BCEConstraintSystem& sys, const Tolerances& tols) {
  for (size_t x = 0; x < sys.nx(); ++x)
    if (!is_feasible_at(sys, x, tols)) return false;
  return true;
}

double extremal_choice_prob(const BaselineProblem& pb, size_t y, size_t x, Sense sense,
                            std::optional<Vec> empirical, const Tolerances& tols) {
  std::optional<Vec> emp_x;
  if (empirical) {
    if (empirical->size() != pb.nx() * pb.ny())
      throw DimensionMismatch("empirical table must be |X| x |Y|");
    emp_x = Vec(empirical->begin() + x * pb.ny(), empirical->begin() + (x + 1) * pb.ny());
  }
  BceDwSolver dw(pb, x, emp_x, tols);
  Vec w(pb.ny(), 0.0);
  w[y] = 1.0;
  auto out = dw.optimize_marginal(
      w, sense == Sense::Max ? solver::Sense::Maximize : solver::Sense::Minimize);
  if (out.status == LpStatus::Infeasible)
    throw InfeasibleModel("BCE polytope empty at x=" + std::to_string(x));
  if (out.status != LpStatus::Optimal)
    throw SolverFailure("extremal solve failed: " + out.diagnostic);
  return out.value;
}

std::vector<SupportSample> predicted_set_slice(const BaselineProblem& pb, size_t x,
                                               const std::vector<Vec>& directions,
                                               const Tolerances& tols) {
  if (directions.empty()) throw std::invalid_argument("need at least one direction");
  BceDwSolver dw(pb, x, std::nullopt, tols);
  std::vector<SupportSample> out;
  out.reserve(directions.size());
  for (const Vec& d : directions) {
    if (d.size() != pb.ny()) throw DimensionMismatch("direction length mismatch");
    auto r = dw.optimize_marginal(d, solver::Sense::Maximize);
    if (r.status == LpStatus::Infeasible) throw InfeasibleModel("BCE polytope empty");
    if (r.status != LpStatus::Optimal)
      throw SolverFailure("support solve failed: " + r.diagnostic);
    out.push_back({d, r.value, dw.solution_marginal()});
  }
  return out;
}

std::pair<InformationStructure, Strategy> canonical_direct_info(const BceJoint& joint,
                                                                const BaselineProblem& pb,
                                                                const Tolerances& tols) {
  // obedience audit: following the recommendation must be optimal
  double worst = 0.0;
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t y = 0; y < pb.ny(); ++y)
        for (size_t yp = 0; yp < pb.ny(); ++yp) {
          if (yp == y) continue;
          double g = 0.0;
          for (size_t v = 0; v < pb.nv(); ++v)
            g -= joint.p(x, e, y, v) * (pb.u(y, x, e, v) - pb.u(yp, x, e, v));
          worst = std::max(worst, g);
        }
  if (worst > 1e-8)
    throw NotObedient("joint violates obedience by " + std::to_string(worst));

  // recommendations whose total mass is floating-point dust are dropped:
  // their entries move to the dominant recommendation of each state, so the
  // remaining signals all have meaningful marginal mass
  BceJoint clean = joint;
  constexpr double kDust = 1e-12;
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e) {
      Vec mass(pb.ny(), 0.0);
      for (size_t y = 0; y < pb.ny(); ++y)
        for (size_t v = 0; v < pb.nv(); ++v) mass[y] += std::max(0.0, clean.p(x, e, y, v));
      for (size_t y = 0; y < pb.ny(); ++y) {
        if (mass[y] >= kDust) continue;
        for (size_t v = 0; v < pb.nv(); ++v) {
          double q = clean.p(x, e, y, v);
          size_t tgt = y;
          double best = -1.0;
          for (size_t yp = 0; yp < pb.ny(); ++yp)
            if (yp != y && mass[yp] >= kDust && clean.p(x, e, yp, v) > best) {
              best = clean.p(x, e, yp, v);
              tgt = yp;
            }
          if (tgt != y) clean.at(x, e, tgt, v) += std::max(0.0, q);
          clean.at(x, e, y, v) = 0.0;
        }
      }
    }

  InformationStructure info;
  info.signal_support = pb.actions;
  info.signal_pmf.assign(pb.nx() * pb.ne() * pb.nv() * pb.ny(), 0.0);
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t v = 0; v < pb.nv(); ++v) {
        size_t base = ((x * pb.ne() + e) * pb.nv() + v) * pb.ny();
        double pr = pb.prior(x, e, v);
        if (pr <= 0.0) {
          // unreachable state: fixed uniform signal pmf
          for (size_t t = 0; t < pb.ny(); ++t) info.signal_pmf[base + t] = 1.0 / pb.ny();
          continue;
        }
        double s = 0.0;
        for (size_t t = 0; t < pb.ny(); ++t) {
          double q = std::max(0.0, clean.p(x, e, t, v)) / pr;
          info.signal_pmf[base + t] = q;
          s += q;
        }
        // joints from LP solves carry O(tol) consistency slack; renormalise
        if (s > 0.0)
          for (size_t t = 0; t < pb.ny(); ++t) info.signal_pmf[base + t] /= s;
        else
          for (size_t t = 0; t < pb.ny(); ++t) info.signal_pmf[base + t] = 1.0 / pb.ny();
      }

  Strategy follow;
  follow.nt = pb.ny();
  follow.action_pmf.assign(pb.nx() * pb.ne() * pb.ny() * pb.ny(), 0.0);
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t t = 0; t < pb.ny(); ++t)
        follow.action_pmf[((x * pb.ne() + e) * pb.ny() + t) * pb.ny() + t] = 1.0;
  (void)tols;
  return {std::move(info), std::move(follow)};
}

}  // namespace bceid::bce
