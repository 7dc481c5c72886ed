#pragma once

#include <string>

#include "bceid/common.hpp"

namespace bceid::model {

/// Finite support of labelled points in R^H.
struct FiniteSupport {
  std::vector<std::string> labels;
  std::vector<Vec> values;

  size_t size() const { return labels.size(); }
  void check() const;

  static FiniteSupport scalar(const Vec& points);
  static FiniteSupport single(const std::string& label = "0");
};

/// The primitives a decision maker knows before any signal: actions,
/// covariates, the two latent-state supports, a utility tensor and the two
/// prior families. All supports are finite; continuous model families enter
/// through the discretize module.
struct BaselineProblem {
  FiniteSupport actions;       // Y
  FiniteSupport covariates;    // X
  FiniteSupport eps_support;   // E (observed by the DM, not the researcher)
  FiniteSupport state_support; // V (unobserved by the DM)

  // u[y][x][e][v], v fastest
  Vec utility;
  // prior_v[x][e][v]: conditional pmf of V given (x,e)
  Vec prior_v;
  // eps_pmf[x][e]: conditional pmf of eps given x
  Vec eps_pmf;

  size_t ny() const { return actions.size(); }
  size_t nx() const { return covariates.size(); }
  size_t ne() const { return eps_support.size(); }
  size_t nv() const { return state_support.size(); }

  double u(size_t y, size_t x, size_t e, size_t v) const {
    return utility[((y * nx() + x) * ne() + e) * nv() + v];
  }
  double& u_ref(size_t y, size_t x, size_t e, size_t v) {
    return utility[((y * nx() + x) * ne() + e) * nv() + v];
  }
  double prior(size_t x, size_t e, size_t v) const {
    return prior_v[(x * ne() + e) * nv() + v];
  }
  double eps(size_t x, size_t e) const { return eps_pmf[x * ne() + e]; }

  void allocate();
  void check(const Tolerances& tols = default_tols()) const;
};

/// Signal support plus conditional signal pmfs per (x,e,v).
struct InformationStructure {
  FiniteSupport signal_support;  // T
  // signal_pmf[x][e][v][t], t fastest
  Vec signal_pmf;

  size_t nt() const { return signal_support.size(); }
  double p(size_t x, size_t e, size_t v, size_t t, size_t ne, size_t nv) const {
    return signal_pmf[((x * ne + e) * nv + v) * nt() + t];
  }

  void check(const BaselineProblem& pb, const Tolerances& tols = default_tols()) const;

  static InformationStructure complete(const BaselineProblem& pb);
  static InformationStructure degenerate(const BaselineProblem& pb);
};

/// Family of conditional action pmfs per (x,e,t).
struct Strategy {
  // action_pmf[x][e][t][y], y fastest
  Vec action_pmf;
  size_t nt = 0;

  double p(size_t x, size_t e, size_t t, size_t y, size_t ne, size_t ny) const {
    return action_pmf[((x * ne + e) * nt + t) * ny + y];
  }
  void check(const BaselineProblem& pb, const Tolerances& tols = default_tols()) const;
};

struct ParameterPoint {
  Vec theta_u;
  Vec theta_V;
  Vec theta_eps;

  Vec flat() const;
  static ParameterPoint from_flat(const Vec& v, size_t ku, size_t kv, size_t ke);
};

enum class TieRule { Uniform, FirstIndex };

/// Bayes posterior over V given (x,e,t). Throws ZeroMassSignal when the
/// signal has zero marginal mass under the prior.
Vec posterior(const BaselineProblem& pb, const InformationStructure& info, size_t x,
              size_t e, size_t t);

/// Argmax actions of posterior expected utility; relative tie window
/// tols.argmax_rel. Signals of zero marginal mass receive the tie-rule pmf
/// over the full argmax set of the prior (they never matter for induced
/// joints) -- callers that care must skip them.
Strategy optimal_strategy(const BaselineProblem& pb, const InformationStructure& info,
                          TieRule rule, const Tolerances& tols = default_tols());

/// Joint pmfs of (action, state) per (x,e) induced by a strategy:
/// sum over t of strategy * signal pmf * prior.
struct BceJoint;
BceJoint induced_joint(const BaselineProblem& pb, const InformationStructure& info,
                       const Strategy& strat);

/// Actions with strictly positive total induced probability at (x,e).
std::vector<size_t> consideration_set(const BaselineProblem& pb,
                                      const InformationStructure& info,
                                      const Strategy& strat, size_t x, size_t e);

/// Joint pmf of (Y,V) conditional on each (x,e); the linear-program variable.
struct BceJoint {
  // joint[x][e][y][v], v fastest
  Vec joint;
  size_t ny = 0, nx = 0, ne = 0, nv = 0;

  double p(size_t x, size_t e, size_t y, size_t v) const {
    return joint[((x * ne + e) * ny + y) * nv + v];
  }
  double& at(size_t x, size_t e, size_t y, size_t v) {
    return joint[((x * ne + e) * ny + y) * nv + v];
  }
  void allocate(const BaselineProblem& pb);

  /// Choice marginal at x: sum over (e,v) weighted by the eps pmf.
  Vec choice_marginal(const BaselineProblem& pb, size_t x) const;
};

}  // namespace bceid::model
