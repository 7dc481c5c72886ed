#pragma once

#include <optional>

#include "bceid/model.hpp"
#include "bceid/solver.hpp"

namespace bceid::bce {

using model::BaselineProblem;
using model::BceJoint;
using model::InformationStructure;
using model::Strategy;

enum class Sense { Max, Min };

/// One-player BCE constraint system for a baseline problem, optionally with
/// data-match rows tying eps-averaged choice marginals to empirical
/// conditional choice probabilities. Variables are the joint pmf values
/// P_{Y,V|X,eps}(y,v|x,e); column order is (x, e, y, v) with v fastest.
/// Row blocks per x: consistency (one per (e,v)), obedience (one per
/// (e,y,y'!=y)), data match (one per y, present when empirical attached).
struct BCEConstraintSystem {
  const BaselineProblem* problem = nullptr;
  std::optional<Vec> empirical;  // [x][y], conditional pmf per x

  size_t ny() const { return problem->ny(); }
  size_t nx() const { return problem->nx(); }
  size_t ne() const { return problem->ne(); }
  size_t nv() const { return problem->nv(); }

  size_t vars_per_x() const { return ne() * ny() * nv(); }
  size_t col(size_t x, size_t e, size_t y, size_t v) const {
    return ((x * ne() + e) * ny() + y) * nv() + v;
  }
  size_t consistency_rows() const { return nv() * ne() * nx(); }
  size_t obedience_rows() const { return ny() * (ny() - 1) * ne() * nx(); }
  size_t data_rows() const { return empirical ? ny() * nx() : 0; }

  double empirical_at(size_t x, size_t y) const { return (*empirical)[x * ny() + y]; }

  /// Dense materialisation of the block for one covariate value (or the whole
  /// block-diagonal system). Zero objective; intended for cross-checking and
  /// export, not for production solves at simulation scale.
  solver::LinearProgram to_lp(std::optional<size_t> only_x = std::nullopt) const;
  solver::LpNames lp_names(std::optional<size_t> only_x = std::nullopt) const;
};

BCEConstraintSystem assemble_constraints(const BaselineProblem& pb,
                                         std::optional<Vec> empirical = std::nullopt);

struct Residuals {
  double consistency = 0.0;
  double obedience = 0.0;  // positive part of violated rows
  double data = 0.0;
  double nonneg = 0.0;
  double max() const;
};

/// Constraint residuals of a candidate joint against Definition 3.1 (and the
/// data-match rows when the system carries them).
Residuals residuals(const BCEConstraintSystem& sys, const BceJoint& joint);

/// True iff every per-x block admits a nonnegative solution (phase-1 optimum
/// within tols.feasibility). Throws SolverFailure on numerical breakdown.
bool is_feasible(const BCEConstraintSystem& sys, const Tolerances& tols = default_tols());
bool is_feasible_at(const BCEConstraintSystem& sys, size_t x,
                    const Tolerances& tols = default_tols());

/// Extremal eps-averaged probability of action y at covariate x over the BCE
/// polytope (with data-match rows when `empirical` is supplied as the full
/// [x][y] table). Throws InfeasibleModel when the polytope is empty.
double extremal_choice_prob(const BaselineProblem& pb, size_t y, size_t x, Sense sense,
                            std::optional<Vec> empirical = std::nullopt,
                            const Tolerances& tols = default_tols());

struct SupportSample {
  Vec direction;      // over actions
  double value;       // support function of the predicted set
  Vec argmax_marginal;  // witness choice pmf
};

/// Support-function samples of the predicted choice-probability set at x,
/// one per direction; enables outer polygonal approximation for plotting.
std::vector<SupportSample> predicted_set_slice(const BaselineProblem& pb, size_t x,
                                               const std::vector<Vec>& directions,
                                               const Tolerances& tols = default_tols());

/// Direct-recommendation information structure of a consistent-obedient
/// joint: signals are recommended actions, the strategy follows them.
/// Throws NotObedient when the obedience residual exceeds 1e-8.
std::pair<InformationStructure, Strategy> canonical_direct_info(
    const BceJoint& joint, const BaselineProblem& pb,
    const Tolerances& tols = default_tols());

}  // namespace bceid::bce
