#pragma once

#include <memory>
#include <optional>

#include "bceid/model.hpp"
#include "bceid/simplex.hpp"
#include "bceid/solver.hpp"

namespace bceid::bce {

/// Linear optimisation over the one-player BCE polytope of a single
/// covariate value by Dantzig-Wolfe column generation.
///
/// The consistency block is handled structurally: for each cell (e,v) with
/// positive prior mass, the variables P(.,v|e) form a scaled simplex, so the
/// polytope is a product of simplices intersected with the (few) coupling
/// rows -- obedience, optional data match. Master vertices assign one action
/// per cell; pricing is an independent argmin per cell.
///
/// A solver instance may be reused for many objectives over the same
/// polytope; generated columns are kept and the master restarts warm.
class BceDwSolver {
 public:
  BceDwSolver(const model::BaselineProblem& pb, size_t x, std::optional<Vec> empirical_at_x,
              const Tolerances& tols = default_tols());

  struct Outcome {
    solver::LpStatus status = solver::LpStatus::Failure;
    double value = 0.0;
    double bound_gap = kInf;
    std::string diagnostic;
  };

  /// Phase-1 feasibility of the coupling rows. value = infeasibility mass.
  Outcome feasibility();

  /// Opt of sum obj(e,y,v) P(y,v|e); obj indexed [e][y][v], v fastest.
  Outcome optimize_tensor(const Vec& obj, solver::Sense sense);

  /// Opt of sum_y w_y * (eps-weighted choice marginal)_y; cheap re-solves.
  Outcome optimize_marginal(const Vec& w, solver::Sense sense);

  /// Choice marginal (eps-weighted, all actions) of the last solution.
  Vec solution_marginal() const;

  /// Full joint of the last solution, indexed [e][y][v].
  Vec solution_joint() const;

  size_t num_cells() const { return cells_.size(); }
  long columns_generated() const { return static_cast<long>(vertices_.size()); }

 private:
  struct Objective {
    const Vec* tensor = nullptr;  // [e][y][v]
    const Vec* marginal = nullptr;  // [y]
    double orient = 1.0;            // +1 minimise, -1 maximise (internal min)
  };

  double vertex_cost(const std::vector<int>& actions, const Objective& o) const;
  void price_cells(const Vec& duals, const Objective& o, std::vector<int>* actions,
                   double* total) const;
  int add_vertex_column(std::vector<int> actions);
  Outcome run(const Objective& o, bool phase1_only);
  void ensure_master();

  const model::BaselineProblem& pb_;
  size_t x_;
  std::optional<Vec> empirical_;
  Tolerances tols_;

  struct Cell {
    size_t e, v;
    double mass;  // prior(x,e,v)
  };
  std::vector<Cell> cells_;

  size_t n_obed_ = 0, n_data_ = 0;  // master row-block sizes (plus convexity)
  std::unique_ptr<solver::SimplexCore> master_;
  std::vector<std::vector<int>> vertices_;       // per generated column
  std::vector<int> vertex_col_;                  // master column index
  std::vector<Vec> vertex_marginal_;             // eps-weighted action mass per vertex
  std::vector<int> slack_cols_;
  Vec last_lambda_;  // weights over vertices_ of the last solution
  bool phase1_done_ = false;
  double phase1_feas_mass_ = 0.0;
};

}  // namespace bceid::bce
