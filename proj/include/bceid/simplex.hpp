#pragma once

#include <Eigen/Dense>

#include "bceid/common.hpp"

namespace bceid::solver {

enum class CoreStatus { Optimal, Unbounded, IterationLimit, Numerical };

/// Primal simplex on min c'x s.t. Ax = b, x >= 0, with b >= 0 required.
/// Columns are stored explicitly and can be appended between optimize()
/// calls, keeping the current basis (used by the column-generation master).
/// The basis inverse is maint= by eta updates with periodic refactorisation.
class SimplexCore {
 public:
  explicit SimplexCore(Vec rhs);

  int num_rows() const { return m_; }
  int num_cols() const { return static_cast<int>(cols_.size()); }

  int add_column(Vec col, double cost, bool artificial = false);
  void set_cost(int j, double c) { cost_[j] = c; }
  double cost(int j) const { return cost_[j]; }
  void forbid_entry(int j) { enterable_[j] = 0; }

  /// Installs the all-artificial starting basis (adds m artificial columns
  /// with unit cost). Requires rhs >= 0.
  void start_phase1();

  /// Switches costs to `real_costs` (indexed like columns, artificials get 0
  /// and are barred), attempting to pivot artificials out first. Rows whose
  /// artificial cannot be removed are redundant; their artificial stays
  /// pinned at zero and is treated as fixed.
  void start_phase2(const Vec& real_costs);

  CoreStatus optimize(double entry_tol, long max_iter);

  double objective() const;
  Vec primal() const;            // full x over all columns
  Vec duals() const;             // y with y' = c_B' Binv
  const std::vector<int>& basis() const { return basis_; }
  double basic_value(int row) const { return xB_[row]; }
  bool is_artificial(int j) const { return artificial_[j]; }

  void refactorize();

 private:
  int price_entering(const Vec& y, double entry_tol, bool bland) const;
  int ratio_test(const Vec& w, double* step, bool bland) const;
  void pivot(int entering, int leave_row, const Vec& w, double step);

  int m_;
  Vec b_;
  std::vector<Vec> cols_;
  Vec cost_;
  std::vector<char> enterable_;
  std::vector<char> artificial_;
  std::vector<int> basis_;
  Eigen::MatrixXd Binv_;
  Vec xB_;
  long pivots_since_refactor_ = 0;
};

}  // namespace bceid::solver
