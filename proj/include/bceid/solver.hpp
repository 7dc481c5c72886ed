#pragma once

#include <optional>
#include <string>

#include "bceid/common.hpp"

namespace bceid::solver {

enum class Sense { Minimize, Maximize };
enum class VarSign { NonNegative, Free };
enum class LpStatus { Optimal, Infeasible, Unbounded, Failure };

/// Dense linear program
///   opt  c'x
///   s.t. A_eq x = eq_rhs,  A_ineq x <= ineq_rhs,  sign constraints on x.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  Vec objective;
  std::vector<Vec> eq_rows;
  Vec eq_rhs;
  std::vector<Vec> ineq_rows;
  Vec ineq_rhs;  // empty means all zero
  std::vector<VarSign> signs;  // empty means all NonNegative

  size_t num_vars() const { return objective.size(); }
  void check() const;
};

struct LpResult {
  LpStatus status = LpStatus::Failure;
  double value = 0.0;
  Vec x;
  // d(value)/d(rhs) in the problem's own orientation
  Vec eq_duals;
  Vec ineq_duals;
  long iterations = 0;
  std::string diagnostic;
};

LpResult solve_lp(const LinearProgram& lp, const Tolerances& tols = default_tols());

/// Linear program plus one unit-ball constraint sum_{j in ball_block} x_j^2 <= 1.
/// Ball variables are implicitly free.
struct NormConstrainedProgram {
  LinearProgram lp;
  std::vector<int> ball_block;
};

struct NormConstrainedResult {
  LpStatus status = LpStatus::Failure;
  double value = 0.0;
  Vec x;
  double gap = kInf;          // certified optimality gap
  double kkt_residual = kInf; // max constraint violation at the reported point
  long inner_solves = 0;
  std::string diagnostic;
};

/// Maximises (or minimises) the objective over the intersection of the linear
/// constraints with the unit ball on the designated block. Concave cutting
/// planes in the ball variables; each cut comes from one LP solve in the
/// remaining variables.
NormConstrainedResult solve_norm_constrained(const NormConstrainedProgram& prog,
                                             const Tolerances& tols = default_tols());

/// Names used when exporting a program to LP text format.
struct LpNames {
  std::vector<std::string> vars;
  std::vector<std::string> eq_rows;
  std::vector<std::string> ineq_rows;
};

/// CPLEX LP text format, suitable for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp, const LpNames& names);

}  // namespace bceid::solver
