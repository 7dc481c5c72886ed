#include "bceid/solver.hpp"

#include <cmath>
#include <sstream>

#include "bceid/simplex.hpp"

namespace bceid::solver {

void LinearProgram::check() const {
  size_t n = objective.size();
  if (eq_rows.size() != eq_rhs.size()) throw DimensionMismatch("eq rows/rhs mismatch");
  if (!ineq_rhs.empty() && ineq_rhs.size() != ineq_rows.size())
    throw DimensionMismatch("ineq rows/rhs mismatch");
  if (!signs.empty() && signs.size() != n) throw DimensionMismatch("signs length mismatch");
  for (const auto& r : eq_rows)
    if (r.size() != n) throw DimensionMismatch("eq row length mismatch");
  for (const auto& r : ineq_rows)
    if (r.size() != n) throw DimensionMismatch("ineq row length mismatch");
  for (double v : objective)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite objective entry");
}

LpResult solve_lp(const LinearProgram& lp, const Tolerances& tols) {
  lp.check();
  const size_t n = lp.num_vars();
  const size_t me = lp.eq_rows.size();
  const size_t mi = lp.ineq_rows.size();
  const bool maximize = lp.sense == Sense::Maximize;

  auto sign_of = [&](size_t j) {
    return lp.signs.empty() ? VarSign::NonNegative : lp.signs[j];
  };
  auto ineq_rhs = [&](size_t i) { return lp.ineq_rhs.empty() ? 0.0 : lp.ineq_rhs[i]; };

  // internal orientation: min, rows flipped so rhs >= 0, free vars split,
  // slack appended per inequality row
  const size_t m = me + mi;
  Vec rhs(m);
  Vec flip(m, 1.0);
  for (size_t i = 0; i < me; ++i) {
    rhs[i] = lp.eq_rhs[i];
    if (rhs[i] < 0.0) { rhs[i] = -rhs[i]; flip[i] = -1.0; }
  }
  for (size_t i = 0; i < mi; ++i) {
    rhs[me + i] = ineq_rhs(i);
    if (rhs[me + i] < 0.0) { rhs[me + i] = -rhs[me + i]; flip[me + i] = -1.0; }
  }

  SimplexCore core(rhs);
  std::vector<std::pair<int, int>> var_cols(n, {-1, -1});  // (plus, minus)
  Vec real_costs;
  auto push_col = [&](const Vec& a, double c) {
    real_costs.push_back(c);
    return core.add_column(a, 0.0);
  };
  for (size_t j = 0; j < n; ++j) {
    Vec a(m, 0.0);
    for (size_t i = 0; i < me; ++i) a[i] = flip[i] * lp.eq_rows[i][j];
    for (size_t i = 0; i < mi; ++i) a[me + i] = flip[me + i] * lp.ineq_rows[i][j];
    double c = maximize ? -lp.objective[j] : lp.objective[j];
    var_cols[j].first = push_col(a, c);
    if (sign_of(j) == VarSign::Free) {
      Vec an(m);
      for (size_t i = 0; i < m; ++i) an[i] = -a[i];
      var_cols[j].second = push_col(an, -c);
    }
  }
  for (size_t i = 0; i < mi; ++i) {
    Vec a(m, 0.0);
    a[me + i] = flip[me + i];
    push_col(a, 0.0);
  }

  LpResult res;
  core.start_phase1();
  long cap = 2000 + 60L * static_cast<long>(m + core.num_cols());
  CoreStatus st = core.optimize(1e-9, cap);
  res.iterations = cap;  // refined below
  if (st == CoreStatus::IterationLimit || st == CoreStatus::Numerical) {
    res.status = LpStatus::Failure;
    res.diagnostic = st == CoreStatus::Numerical ? "phase-1 numerical breakdown"
                                                 : "phase-1 iteration limit";
    return res;
  }
  if (core.objective() > tols.feasibility) {
    res.status = LpStatus::Infeasible;
    res.value = core.objective();
    res.diagnostic = "phase-1 optimum " + std::to_string(core.objective());
    // Farkas certificate w: A_eq'w_eq + A_ineq'w_ineq >= 0 on nonnegative
    // variables (= 0 on free ones), w_ineq >= 0, rhs'w < 0.
    Vec y = core.duals();
    res.eq_duals.assign(me, 0.0);
    res.ineq_duals.assign(mi, 0.0);
    for (size_t i = 0; i < me; ++i) res.eq_duals[i] = -flip[i] * y[i];
    for (size_t i = 0; i < mi; ++i) res.ineq_duals[i] = -flip[me + i] * y[me + i];
    return res;
  }

  core.start_phase2(real_costs);
  st = core.optimize(1e-10, cap);
  if (st == CoreStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  if (st != CoreStatus::Optimal) {
    res.status = LpStatus::Failure;
    res.diagnostic = st == CoreStatus::Numerical ? "phase-2 numerical breakdown"
                                                 : "phase-2 iteration limit";
    return res;
  }

  Vec full = core.primal();
  res.x.assign(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    res.x[j] = full[var_cols[j].first];
    if (var_cols[j].second >= 0) res.x[j] -= full[var_cols[j].second];
  }
  double obj = 0.0;
  for (size_t j = 0; j < n; ++j) obj += lp.objective[j] * res.x[j];
  res.value = obj;

  // residual audit
  double resid = 0.0;
  for (size_t i = 0; i < me; ++i)
    resid = std::max(resid, std::abs(dot(lp.eq_rows[i], res.x) - lp.eq_rhs[i]));
  for (size_t i = 0; i < mi; ++i)
    resid = std::max(resid, dot(lp.ineq_rows[i], res.x) - ineq_rhs(i));
  for (size_t j = 0; j < n; ++j)
    if (sign_of(j) == VarSign::NonNegative) resid = std::max(resid, -res.x[j]);
  if (resid > 1e-6) {
    res.status = LpStatus::Failure;
    res.diagnostic = "solution residual " + std::to_string(resid);
    return res;
  }

  Vec y = core.duals();
  res.eq_duals.assign(me, 0.0);
  res.ineq_duals.assign(mi, 0.0);
  double orient = maximize ? -1.0 : 1.0;
  for (size_t i = 0; i < me; ++i) res.eq_duals[i] = orient * flip[i] * y[i];
  for (size_t i = 0; i < mi; ++i) res.ineq_duals[i] = orient * flip[me + i] * y[me + i];
  res.status = LpStatus::Optimal;
  return res;
}

std::string to_lp_format(const LinearProgram& lp, const LpNames& names) {
  lp.check();
  size_t n = lp.num_vars();
  auto var = [&](size_t j) {
    return j < names.vars.size() ? names.vars[j] : "x" + std::to_string(j);
  };
  auto term_row = [&](std::ostringstream& os, const Vec& row) {
    bool any = false;
    for (size_t j = 0; j < n; ++j) {
      if (row[j] == 0.0) continue;
      double c = row[j];
      os << (c < 0 ? " - " : (any ? " + " : " ")) << std::abs(c) << " " << var(j);
      any = true;
    }
    if (!any) os << " 0 " << var(0);
  };
  std::ostringstream os;
  os.precision(17);
  os << (lp.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  term_row(os, lp.objective);
  os << "\nSubject To\n";
  for (size_t i = 0; i < lp.eq_rows.size(); ++i) {
    os << " " << (i < names.eq_rows.size() ? names.eq_rows[i] : "eq" + std::to_string(i)) << ":";
    term_row(os, lp.eq_rows[i]);
    os << " = " << lp.eq_rhs[i] << "\n";
  }
  for (size_t i = 0; i < lp.ineq_rows.size(); ++i) {
    os << " " << (i < names.ineq_rows.size() ? names.ineq_rows[i] : "le" + std::to_string(i))
       << ":";
    term_row(os, lp.ineq_rows[i]);
    os << " <= " << (lp.ineq_rhs.empty() ? 0.0 : lp.ineq_rhs[i]) << "\n";
  }
  os << "Bounds\n";
  for (size_t j = 0; j < n; ++j) {
    bool fr = !lp.signs.empty() && lp.signs[j] == VarSign::Free;
    if (fr) os << " " << var(j) << " free\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace bceid::solver
