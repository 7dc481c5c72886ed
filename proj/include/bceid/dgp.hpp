#pragma once

#include <memory>
#include <optional>
#include <string>

#include "bceid/discretize.hpp"
#include "bceid/model.hpp"

namespace bceid::dgp {

using model::BaselineProblem;
using model::InformationStructure;
using model::ParameterPoint;

/// Generates the conditional signal kernel of one information regime on a
/// discretized baseline problem. `likelihood` returns P(T=t | x,e,v); kernels
/// must sum to one over t for every (x,e,v).
class InfoGenerator {
 public:
  virtual ~InfoGenerator() = default;
  virtual std::string id() const = 0;
  virtual size_t num_signals(const BaselineProblem& pb) const = 0;
  virtual double likelihood(const BaselineProblem& pb, size_t t, size_t x, size_t e,
                            size_t v) const = 0;
  InformationStructure materialize(const BaselineProblem& pb) const;
};

std::unique_ptr<InfoGenerator> make_complete_info();
std::unique_ptr<InfoGenerator> make_degenerate_info();
/// Signal 1{v_coord in [lo,hi]} on one coordinate of the state vector.
std::unique_ptr<InfoGenerator> make_interval_reveal(size_t coord, double lo, double hi);
/// DGP6-style signal: reveals eta from the latent split C = 1{Z b + eta + tau >= 0};
/// the kernel is P(eta_k | C = v, Z), computed from the supplied eta grid.
std::unique_ptr<InfoGenerator> make_eta_reveal(Vec eta_grid, Vec eta_pmf, double beta);

struct PopulationInfoMix {
  struct Entry {
    double weight;
    std::shared_ptr<InfoGenerator> generator;
  };
  std::vector<Entry> entries;
  void check() const;

  static PopulationInfoMix single(std::shared_ptr<InfoGenerator> g);
};

/// Observed joint frequencies of (y,x).
struct EmpiricalDistribution {
  std::vector<long> counts;  // [x][y]
  size_t ny = 0, nx = 0;
  long n = 0;

  long count(size_t x, size_t y) const { return counts[x * ny + y]; }
  double joint(size_t x, size_t y) const { return static_cast<double>(count(x, y)) / n; }
  double px(size_t x) const;
  /// Conditional pmf table [x][y]; rows with zero mass get uniform placeholders
  /// and are reported through `support_x`.
  Vec conditional_table() const;
  std::vector<size_t> support_x() const;

  static EmpiricalDistribution from_probabilities(const Vec& table_yx, const Vec& px,
                                                  size_t ny, size_t nx, long n);
};

/// A parametric model family mapping theta to a discretized baseline problem
/// on fixed grids (supports stay constant across theta; pmfs and utilities
/// are rebuilt).
class ModelFamily {
 public:
  virtual ~ModelFamily() = default;
  virtual std::string id() const = 0;
  virtual size_t dim() const = 0;
  virtual std::vector<std::string> param_names() const = 0;
  virtual BaselineProblem build(const Vec& theta) const = 0;
  /// Utility tensor at an out-of-support covariate value (for counterfactual
  /// doubled problems): u[y][e][v] with the problem's (e,v) grids.
  virtual Vec utility_at(const Vec& theta, const Vec& covariate,
                         const BaselineProblem& pb) const;
};

/// Nested Logit of Example 2.1: inside goods y=1..L-1 with
/// u = beta'Z_y + xi + lambda eta_y, outside option u(0) = eta_0.
/// theta = (beta..., lambda). X = covariate support of Z (one column per
/// inside good when M=1), eps = xi ~ Cardell C(lambda), V = eta vector.
struct NestedLogitSpec {
  size_t L = 4;                   // alternatives including the outside option
  size_t M = 1;                   // covariates per inside good
  Vec beta = {1.6};               // M coefficients
  double lambda = 0.5;            // nest parameter in (0,1)
  std::vector<Vec> covariate_support;  // points of Z, dimension M*(L-1)
  Vec covariate_pmf;
  discretize::GridSpec eps_grid = discretize::GridSpec::quantiles(12);
  discretize::GridSpec eta_axis = discretize::GridSpec::quantiles(5);

  void check() const;
};

std::unique_ptr<ModelFamily> make_nested_logit_family(NestedLogitSpec spec);

/// CARA insurance of Example 2.2: plans with deductibles D_y and premiums
/// lambda_y * P_base; r ~ Beta(g1,g2) truncated to [0,0.02]; claim state
/// C in {0,1} with prior from Phi-type link in Z. theta = (beta, g1, g2).
struct CaraRiskSpec {
  Vec deductibles = {100, 200, 500, 1000};
  Vec premium_multipliers = {5.0 / 6.0, 7.0 / 10.0, 3.0 / 10.0, 1.0 / 10.0};
  Vec base_premium_support = {100, 200, 300};
  Vec z_support;                      // demographic scalar
  double beta = 0.7;                  // claim-model coefficient
  double gamma1 = 1.0, gamma2 = 10.0; // Beta shapes of r
  double r_lo = 0.001, r_hi = 0.02;
  size_t r_points = 20;
  size_t eta_points = 15;  // latent-eta grid behind the claim prior
  double wealth = 0.0;

  void check() const;
};

std::unique_ptr<ModelFamily> make_cara_family(CaraRiskSpec spec);

/// Spatial voting model of Eq. 5.1-5.2: actions = abstention + L parties,
/// u(party y) = beta'Z_y + gamma Z_y^LR W + eps + sigma V_y, u(abstention)=0.
/// theta = (beta (4), gamma (1), log sigma^2).
struct VotingSpec {
  size_t parties = 2;
  std::vector<Vec> issue_distance;   // per party: M distances |Z_i - Z_y| support? built per covariate point
  std::vector<Vec> covariate_support;  // each point: M*parties distances + J demographics
  Vec covariate_pmf;
  size_t issue_dims = 4;
  size_t demo_dims = 1;
  Vec party_lr;  // Z_y^LR per party
  discretize::GridSpec eps_grid = discretize::GridSpec::quantiles(12);
  discretize::GridSpec v_axis = discretize::GridSpec::quantiles(5);

  void check() const;
};

std::unique_ptr<ModelFamily> make_voting_family(VotingSpec spec);

/// Builds the voting baseline problem directly at a parameter point.
BaselineProblem voting_problem(const VotingSpec& spec, const Vec& beta, double gamma,
                               double sigma);

/// i.i.d. draws from the discretized model: state, info regime by mix weight,
/// optimal strategy with uniform tie-breaking, realized choice. Deterministic
/// per seed; worker count does not affect the result.
EmpiricalDistribution simulate(const BaselineProblem& pb, const PopulationInfoMix& mix,
                               long n, uint64_t seed, int workers = 1);

/// Exact mixture choice probabilities [x][y] under the mix's optimal
/// strategies on the discretized model (uniform tie-breaking).
Vec population_probs(const BaselineProblem& pb, const PopulationInfoMix& mix);

/// Covariate marginal P_X of the problem (the simulation draws X uniformly
/// from `covariate_pmf`-weighted support; stored here for reuse).
Vec covariate_marginal(const BaselineProblem& pb, const Vec& covariate_pmf);

// ---- named presets of Section 3.3 ----

struct Preset {
  std::string name;
  std::unique_ptr<ModelFamily> family;
  PopulationInfoMix mix;
  Vec true_theta;
  Vec covariate_pmf;  // over the family's covariate support
};

/// dgp1..dgp7 with the paper's numeric settings.
Preset make_preset(const std::string& name);

}  // namespace bceid::dgp
