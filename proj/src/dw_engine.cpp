#include "bceid/dw_engine.hpp"

#include <cmath>

namespace bceid::bce {

using solver::CoreStatus;
using solver::LpStatus;
using solver::SimplexCore;

BceDwSolver::BceDwSolver(const model::BaselineProblem& pb, size_t x,
                         std::optional<Vec> empirical_at_x, const Tolerances& tols)
    : pb_(pb), x_(x), empirical_(std::move(empirical_at_x)), tols_(tols) {
  if (empirical_ && empirical_->size() != pb_.ny())
    throw DimensionMismatch("empirical pmf length mismatch");
  for (size_t e = 0; e < pb_.ne(); ++e)
    for (size_t v = 0; v < pb_.nv(); ++v) {
      double m = pb_.prior(x_, e, v);
      if (m > 0.0) cells_.push_back({e, v, m});
    }
  n_obed_ = pb_.ny() * (pb_.ny() - 1) * pb_.ne();
  n_data_ = empirical_ ? pb_.ny() : 0;
}

void BceDwSolver::ensure_master() {
  if (master_) return;
  const size_t m = n_obed_ + n_data_ + 1;
  Vec rhs(m, 0.0);
  for (size_t y = 0; y < n_data_; ++y) rhs[n_obed_ + y] = std::max(0.0, (*empirical_)[y]);
  rhs[m - 1] = 1.0;
  master_ = std::make_unique<SimplexCore>(rhs);
  for (size_t r = 0; r < n_obed_; ++r) {
    Vec col(m, 0.0);
    col[r] = 1.0;
    slack_cols_.push_back(master_->add_column(std::move(col), 0.0));
  }
  master_->start_phase1();
}

double BceDwSolver::vertex_cost(const std::vector<int>& actions, const Objective& o) const {
  if (o.tensor == nullptr && o.marginal == nullptr) return 0.0;
  double c = 0.0;
  const size_t ny = pb_.ny(), nv = pb_.nv();
  for (size_t k = 0; k < cells_.size(); ++k) {
    const Cell& cl = cells_[k];
    int a = actions[k];
    double unit = o.tensor ? (*o.tensor)[(cl.e * ny + a) * nv + cl.v]
                           : (*o.marginal)[a] * pb_.eps(x_, cl.e);
    c += cl.mass * unit;
  }
  return o.orient * c;
}

void BceDwSolver::price_cells(const Vec& duals, const Objective& o,
                              std::vector<int>* actions, double* total) const {
  const size_t ny = pb_.ny(), nv = pb_.nv();
  actions->assign(cells_.size(), 0);
  double sum = 0.0;
  // D(a,v) = sum_{y'!=a} pi(e,a,y') [u(y',e,v) - u(a,e,v)] per e-slice
  Vec D(ny * nv);
  size_t k = 0;
  while (k < cells_.size()) {
    size_t e = cells_[k].e;
    double epsw = pb_.eps(x_, e);
    for (size_t a = 0; a < ny; ++a) {
      double s = 0.0;
      for (size_t v = 0; v < nv; ++v) D[a * nv + v] = 0.0;
      size_t base = (e * ny + a) * (ny - 1);
      size_t slot = 0;
      for (size_t yp = 0; yp < ny; ++yp) {
        if (yp == a) continue;
        double pi = duals[base + slot++];
        if (pi != 0.0) {
          s += pi;
          for (size_t v = 0; v < nv; ++v) D[a * nv + v] += pi * pb_.u(yp, x_, e, v);
        }
      }
      if (s != 0.0)
        for (size_t v = 0; v < nv; ++v) D[a * nv + v] -= s * pb_.u(a, x_, e, v);
    }
    for (; k < cells_.size() && cells_[k].e == e; ++k) {
      const Cell& cl = cells_[k];
      double best = kInf;
      int best_a = 0;
      for (size_t a = 0; a < ny; ++a) {
        double unit = 0.0;
        if (o.tensor)
          unit = o.orient * (*o.tensor)[(cl.e * ny + a) * nv + cl.v];
        else if (o.marginal)
          unit = o.orient * (*o.marginal)[a] * epsw;
        double dual_part = D[a * nv + cl.v];
        if (n_data_ > 0) dual_part += duals[n_obed_ + a] * epsw;
        double q = cl.mass * (unit - dual_part);
        if (q < best) {
          best = q;
          best_a = static_cast<int>(a);
        }
      }
      (*actions)[k] = best_a;
      sum += best;
    }
  }
  *total = sum;
}

int BceDwSolver::add_vertex_column(std::vector<int> actions) {
  const size_t m = n_obed_ + n_data_ + 1;
  const size_t ny = pb_.ny();
  Vec col(m, 0.0);
  Vec marg(ny, 0.0);
  for (size_t k = 0; k < cells_.size(); ++k) {
    const Cell& cl = cells_[k];
    size_t a = actions[k];
    size_t base = (cl.e * ny + a) * (ny - 1);
    size_t slot = 0;
    for (size_t yp = 0; yp < ny; ++yp) {
      if (yp == a) continue;
      col[base + slot++] += cl.mass * (pb_.u(yp, x_, cl.e, cl.v) - pb_.u(a, x_, cl.e, cl.v));
    }
    double w = pb_.eps(x_, cl.e) * cl.mass;
    if (n_data_ > 0) col[n_obed_ + a] += w;
    marg[a] += w;
  }
  col[m - 1] = 1.0;
  int j = master_->add_column(std::move(col), 0.0);
  vertices_.push_back(std::move(actions));
  vertex_col_.push_back(j);
  vertex_marginal_.push_back(std::move(marg));
  return j;
}

BceDwSolver::Outcome BceDwSolver::run(const Objective& o, bool phase1_only) {
  ensure_master();
  Outcome out;
  const double feas_tol = tols_.feasibility;
  const long iter_cap = 4000;
  const long master_cap = 200000;

  // phase 1: establish coupling-row feasibility once
  if (!phase1_done_) {
    for (long it = 0; it < iter_cap; ++it) {
      CoreStatus st = master_->optimize(1e-10, master_cap);
      if (st != CoreStatus::Optimal) {
        out.status = LpStatus::Failure;
        out.diagnostic = st == CoreStatus::Numerical ? "phase-1 master numerical"
                         : st == CoreStatus::IterationLimit ? "phase-1 master iteration cap"
                                                            : "phase-1 master unbounded";
        return out;
      }
      double rho = master_->objective();
      Vec y = master_->duals();
      std::vector<int> actions;
      double total;
      Objective zero;
      zero.orient = 1.0;
      price_cells(y, zero, &actions, &total);
      // rc(vertex) = 0 - y'col; price_cells already folded the duals in
      double rc = total - y[n_obed_ + n_data_];
      double lb = rho + std::min(0.0, rc);
      if (rho <= feas_tol * 0.5) break;
      if (lb > feas_tol) {
        out.status = LpStatus::Infeasible;
        out.value = lb;
        out.diagnostic = "phase-1 lower bound " + std::to_string(lb);
        return out;
      }
      if (rc < -1e-11) {
        add_vertex_column(std::move(actions));
      } else {
        // no improving vertex: rho is the exact infeasibility mass
        if (rho > feas_tol) {
          out.status = LpStatus::Infeasible;
          out.value = rho;
          out.diagnostic = "phase-1 optimum " + std::to_string(rho);
          return out;
        }
        break;
      }
      if (it + 1 == iter_cap) {
        out.status = LpStatus::Failure;
        out.diagnostic = "phase-1 column-generation iteration cap";
        return out;
      }
    }
    phase1_feas_mass_ = master_->objective();
    if (phase1_feas_mass_ > feas_tol) {
      out.status = LpStatus::Infeasible;
      out.value = phase1_feas_mass_;
      return out;
    }
    Vec real_costs(master_->num_cols(), 0.0);
    master_->start_phase2(real_costs);
    phase1_done_ = true;
  }
  if (phase1_only) {
    out.status = LpStatus::Optimal;
    out.value = phase1_feas_mass_;
    out.bound_gap = 0.0;
    return out;
  }

  // phase 2: set costs of existing vertex columns for this objective
  for (size_t k = 0; k < vertices_.size(); ++k)
    master_->set_cost(vertex_col_[k], vertex_cost(vertices_[k], o));
  for (int j : slack_cols_) master_->set_cost(j, 0.0);

  for (long it = 0; it < iter_cap; ++it) {
    CoreStatus st = master_->optimize(1e-11, master_cap);
    if (st == CoreStatus::Unbounded) {
      out.status = LpStatus::Failure;  // polytope is bounded; must be numerical
      out.diagnostic = "phase-2 master unbounded";
      return out;
    }
    if (st != CoreStatus::Optimal) {
      out.status = LpStatus::Failure;
      out.diagnostic = "phase-2 master breakdown";
      return out;
    }
    double rho = master_->objective();
    Vec y = master_->duals();
    std::vector<int> actions;
    double total;
    price_cells(y, o, &actions, &total);
    double rc = total - y[n_obed_ + n_data_];
    double scale = std::max(1.0, std::abs(rho));
    if (rc >= -1e-10 * scale) {
      out.status = LpStatus::Optimal;
      out.value = o.orient * rho;
      out.bound_gap = std::max(0.0, -rc);
      break;
    }
    int j = add_vertex_column(std::move(actions));
    master_->set_cost(j, vertex_cost(vertices_.back(), o));
    if (it + 1 == iter_cap) {
      out.status = LpStatus::Failure;
      out.diagnostic = "phase-2 column-generation iteration cap";
      return out;
    }
  }

  // cache lambda over vertices
  Vec full = master_->primal();
  last_lambda_.assign(vertices_.size(), 0.0);
  for (size_t k = 0; k < vertices_.size(); ++k) last_lambda_[k] = full[vertex_col_[k]];
  return out;
}

BceDwSolver::Outcome BceDwSolver::feasibility() {
  Objective zero;
  return run(zero, true);
}

BceDwSolver::Outcome BceDwSolver::optimize_tensor(const Vec& obj, solver::Sense sense) {
  if (obj.size() != pb_.ne() * pb_.ny() * pb_.nv())
    throw DimensionMismatch("tensor objective size mismatch");
  Objective o;
  o.tensor = &obj;
  o.orient = sense == solver::Sense::Maximize ? -1.0 : 1.0;
  return run(o, false);
}

BceDwSolver::Outcome BceDwSolver::optimize_marginal(const Vec& w, solver::Sense sense) {
  if (w.size() != pb_.ny()) throw DimensionMismatch("marginal objective size mismatch");
  Objective o;
  o.marginal = &w;
  o.orient = sense == solver::Sense::Maximize ? -1.0 : 1.0;
  return run(o, false);
}

Vec BceDwSolver::solution_marginal() const {
  Vec m(pb_.ny(), 0.0);
  for (size_t k = 0; k < last_lambda_.size(); ++k) {
    double l = last_lambda_[k];
    if (l == 0.0) continue;
    for (size_t y = 0; y < pb_.ny(); ++y) m[y] += l * vertex_marginal_[k][y];
  }
  return m;
}

Vec BceDwSolver::solution_joint() const {
  const size_t ny = pb_.ny(), nv = pb_.nv();
  Vec j(pb_.ne() * ny * nv, 0.0);
  for (size_t k = 0; k < last_lambda_.size(); ++k) {
    double l = last_lambda_[k];
    if (l == 0.0) continue;
    for (size_t c = 0; c < cells_.size(); ++c) {
      const Cell& cl = cells_[c];
      j[(cl.e * ny + vertices_[k][c]) * nv + cl.v] += l * cl.mass;
    }
  }
  return j;
}

}  // namespace bceid::bce
