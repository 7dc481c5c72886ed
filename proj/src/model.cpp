#include "bceid/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bceid::model {

void FiniteSupport::check() const {
  if (labels.empty()) throw std::invalid_argument("empty support");
  if (values.size() != labels.size())
    throw DimensionMismatch("support labels/values length mismatch");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw std::invalid_argument("duplicate support labels");
  size_t h = values.front().size();
  if (h < 1) throw std::invalid_argument("support points need dimension >= 1");
  for (const auto& v : values)
    if (v.size() != h) throw DimensionMismatch("inconsistent point dimensions");
}

FiniteSupport FiniteSupport::scalar(const Vec& points) {
  FiniteSupport s;
  for (double p : points) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", p);
    s.labels.emplace_back(buf);
    s.values.push_back({p});
  }
  return s;
}

FiniteSupport FiniteSupport::single(const std::string& label) {
  FiniteSupport s;
  s.labels = {label};
  s.values = {{0.0}};
  return s;
}

void BaselineProblem::allocate() {
  utility.assign(ny() * nx() * ne() * nv(), 0.0);
  prior_v.assign(nx() * ne() * nv(), 0.0);
  eps_pmf.assign(nx() * ne(), 0.0);
}

void BaselineProblem::check(const Tolerances& tols) const {
  actions.check();
  covariates.check();
  eps_support.check();
  state_support.check();
  if (utility.size() != ny() * nx() * ne() * nv())
    throw DimensionMismatch("utility tensor size mismatch");
  for (double v : utility)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite utility entry");
  for (size_t x = 0; x < nx(); ++x) {
    double se = 0.0;
    for (size_t e = 0; e < ne(); ++e) {
      double w = eps(x, e);
      if (w < -tols.pmf_sum) throw std::invalid_argument("negative eps pmf entry");
      se += w;
      double sv = 0.0;
      for (size_t v = 0; v < nv(); ++v) {
        double q = prior(x, e, v);
        if (q < -tols.pmf_sum) throw std::invalid_argument("negative prior entry");
        sv += q;
      }
      if (std::abs(sv - 1.0) > tols.pmf_sum * std::max<size_t>(nv(), 1) * 10)
        throw std::invalid_argument("prior pmf does not sum to 1");
    }
    if (std::abs(se - 1.0) > tols.pmf_sum * std::max<size_t>(ne(), 1) * 10)
      throw std::invalid_argument("eps pmf does not sum to 1");
  }
}

void InformationStructure::check(const BaselineProblem& pb, const Tolerances& tols) const {
  signal_support.check();
  if (signal_pmf.size() != pb.nx() * pb.ne() * pb.nv() * nt())
    throw DimensionMismatch("signal pmf size mismatch");
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t v = 0; v < pb.nv(); ++v) {
        double s = 0.0;
        for (size_t t = 0; t < nt(); ++t) s += p(x, e, v, t, pb.ne(), pb.nv());
        if (std::abs(s - 1.0) > tols.pmf_sum * std::max<size_t>(nt(), 1) * 10)
          throw std::invalid_argument("signal pmf does not sum to 1");
      }
}

InformationStructure InformationStructure::complete(const BaselineProblem& pb) {
  InformationStructure s;
  s.signal_support = pb.state_support;
  s.signal_pmf.assign(pb.nx() * pb.ne() * pb.nv() * pb.nv(), 0.0);
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t v = 0; v < pb.nv(); ++v)
        s.signal_pmf[((x * pb.ne() + e) * pb.nv() + v) * pb.nv() + v] = 1.0;
  return s;
}

InformationStructure InformationStructure::degenerate(const BaselineProblem& pb) {
  InformationStructure s;
  s.signal_support = FiniteSupport::single();
  s.signal_pmf.assign(pb.nx() * pb.ne() * pb.nv(), 1.0);
  return s;
}

void Strategy::check(const BaselineProblem& pb, const Tolerances& tols) const {
  if (action_pmf.size() != pb.nx() * pb.ne() * nt * pb.ny())
    throw DimensionMismatch("strategy pmf size mismatch");
  for (size_t i = 0; i < action_pmf.size(); i += pb.ny()) {
    double s = 0.0;
    for (size_t y = 0; y < pb.ny(); ++y) s += action_pmf[i + y];
    if (std::abs(s - 1.0) > tols.pmf_sum * pb.ny() * 10)
      throw std::invalid_argument("strategy pmf does not sum to 1");
  }
}

Vec ParameterPoint::flat() const {
  Vec v;
  v.insert(v.end(), theta_u.begin(), theta_u.end());
  v.insert(v.end(), theta_V.begin(), theta_V.end());
  v.insert(v.end(), theta_eps.begin(), theta_eps.end());
  return v;
}

ParameterPoint ParameterPoint::from_flat(const Vec& v, size_t ku, size_t kv, size_t ke) {
  if (v.size() != ku + kv + ke) throw DimensionMismatch("flat parameter length mismatch");
  ParameterPoint p;
  p.theta_u.assign(v.begin(), v.begin() + ku);
  p.theta_V.assign(v.begin() + ku, v.begin() + ku + kv);
  p.theta_eps.assign(v.begin() + ku + kv, v.end());
  return p;
}

Vec posterior(const BaselineProblem& pb, const InformationStructure& info, size_t x,
              size_t e, size_t t) {
  Vec post(pb.nv());
  double denom = 0.0;
  for (size_t v = 0; v < pb.nv(); ++v) {
    post[v] = info.p(x, e, v, t, pb.ne(), pb.nv()) * pb.prior(x, e, v);
    denom += post[v];
  }
  if (denom <= 0.0)
    throw ZeroMassSignal("signal has zero marginal mass at (x=" + std::to_string(x) +
                         ",e=" + std::to_string(e) + ",t=" + std::to_string(t) + ")");
  for (double& q : post) q /= denom;
  return post;
}

Strategy optimal_strategy(const BaselineProblem& pb, const InformationStructure& info,
                          TieRule rule, const Tolerances& tols) {
  Strategy st;
  st.nt = info.nt();
  st.action_pmf.assign(pb.nx() * pb.ne() * st.nt * pb.ny(), 0.0);
  Vec post(pb.nv());
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t t = 0; t < st.nt; ++t) {
        double denom = 0.0;
        for (size_t v = 0; v < pb.nv(); ++v) {
          post[v] = info.p(x, e, v, t, pb.ne(), pb.nv()) * pb.prior(x, e, v);
          denom += post[v];
        }
        if (denom <= 0.0) {
          // unreachable signal: fall back to the prior (irrelevant for joints)
          for (size_t v = 0; v < pb.nv(); ++v) post[v] = pb.prior(x, e, v);
          denom = 1.0;
        }
        double best = -kInf;
        Vec eu(pb.ny());
        for (size_t y = 0; y < pb.ny(); ++y) {
          double s = 0.0;
          for (size_t v = 0; v < pb.nv(); ++v) s += pb.u(y, x, e, v) * post[v];
          eu[y] = s / denom;
          best = std::max(best, eu[y]);
        }
        double window = tols.argmax_rel * std::max(1.0, std::abs(best));
        size_t base = ((x * pb.ne() + e) * st.nt + t) * pb.ny();
        if (rule == TieRule::FirstIndex) {
          for (size_t y = 0; y < pb.ny(); ++y)
            if (eu[y] >= best - window) {
              st.action_pmf[base + y] = 1.0;
              break;
            }
        } else {
          size_t count = 0;
          for (size_t y = 0; y < pb.ny(); ++y)
            if (eu[y] >= best - window) ++count;
          for (size_t y = 0; y < pb.ny(); ++y)
            if (eu[y] >= best - window) st.action_pmf[base + y] = 1.0 / count;
        }
      }
  return st;
}

BceJoint induced_joint(const BaselineProblem& pb, const InformationStructure& info,
                       const Strategy& strat) {
  if (strat.nt != info.nt())
    throw DimensionMismatch("strategy signal dimension does not match info structure");
  BceJoint j;
  j.allocate(pb);
  for (size_t x = 0; x < pb.nx(); ++x)
    for (size_t e = 0; e < pb.ne(); ++e)
      for (size_t v = 0; v < pb.nv(); ++v) {
        double pr = pb.prior(x, e, v);
        if (pr == 0.0) continue;
        for (size_t t = 0; t < info.nt(); ++t) {
          double w = info.p(x, e, v, t, pb.ne(), pb.nv()) * pr;
          if (w == 0.0) continue;
          for (size_t y = 0; y < pb.ny(); ++y)
            j.at(x, e, y, v) += strat.p(x, e, t, y, pb.ne(), pb.ny()) * w;
        }
      }
  return j;
}

std::vector<size_t> consideration_set(const BaselineProblem& pb,
                                      const InformationStructure& info,
                                      const Strategy& strat, size_t x, size_t e) {
  std::vector<size_t> out;
  for (size_t y = 0; y < pb.ny(); ++y) {
    double total = 0.0;
    for (size_t t = 0; t < info.nt(); ++t) {
      double mass = 0.0;
      for (size_t v = 0; v < pb.nv(); ++v)
        mass += info.p(x, e, v, t, pb.ne(), pb.nv()) * pb.prior(x, e, v);
      total += strat.p(x, e, t, y, pb.ne(), pb.ny()) * mass;
    }
    if (total > 0.0) out.push_back(y);
  }
  return out;
}

void BceJoint::allocate(const BaselineProblem& pb) {
  ny = pb.ny();
  nx = pb.nx();
  ne = pb.ne();
  nv = pb.nv();
  joint.assign(nx * ne * ny * nv, 0.0);
}

Vec BceJoint::choice_marginal(const BaselineProblem& pb, size_t x) const {
  Vec m(ny, 0.0);
  for (size_t e = 0; e < ne; ++e) {
    double w = pb.eps(x, e);
    for (size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (size_t v = 0; v < nv; ++v) s += p(x, e, y, v);
      m[y] += w * s;
    }
  }
  return m;
}

}  // namespace bceid::model
