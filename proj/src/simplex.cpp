#include "bceid/simplex.hpp"

#include <cmath>

namespace bceid::solver {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr long kRefactorEvery = 128;
}  // namespace

SimplexCore::SimplexCore(Vec rhs) : m_(static_cast<int>(rhs.size())), b_(std::move(rhs)) {
  for (double v : b_)
    if (v < 0.0) throw std::invalid_argument("SimplexCore requires rhs >= 0");
}

int SimplexCore::add_column(Vec col, double cost, bool artificial) {
  if (static_cast<int>(col.size()) != m_)
    throw DimensionMismatch("column length does not match row count");
  cols_.push_back(std::move(col));
  cost_.push_back(cost);
  enterable_.push_back(1);
  artificial_.push_back(artificial ? 1 : 0);
  return num_cols() - 1;
}

void SimplexCore::start_phase1() {
  basis_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    Vec e(m_, 0.0);
    e[i] = 1.0;
    basis_[i] = add_column(std::move(e), 1.0, true);
  }
  Binv_ = Eigen::MatrixXd::Identity(m_, m_);
  xB_ = b_;
  // structural columns carry zero cost during phase 1
  for (int j = 0; j < num_cols(); ++j)
    if (!artificial_[j]) cost_[j] = 0.0;
}

void SimplexCore::start_phase2(const Vec& real_costs) {
  // try to pivot artificials (all at value ~0 after a feasible phase 1)
  // out of the basis with degenerate pivots
  for (int r = 0; r < m_; ++r) {
    int jb = basis_[r];
    if (!artificial_[jb]) continue;
    for (int j = 0; j < num_cols(); ++j) {
      if (artificial_[j] || !enterable_[j]) continue;
      bool in_basis = false;
      for (int i = 0; i < m_; ++i)
        if (basis_[i] == j) { in_basis = true; break; }
      if (in_basis) continue;
      double piv = 0.0;
      for (int i = 0; i < m_; ++i) piv += Binv_(r, i) * cols_[j][i];
      if (std::abs(piv) > 1e-7) {
        Vec w(m_);
        Eigen::Map<const Eigen::VectorXd> cj(cols_[j].data(), m_);
        Eigen::VectorXd wv = Binv_ * cj;
        for (int i = 0; i < m_; ++i) w[i] = wv[i];
        pivot(j, r, w, 0.0);
        break;
      }
    }
  }
  for (int j = 0; j < num_cols(); ++j) {
    if (artificial_[j]) {
      cost_[j] = 0.0;
      enterable_[j] = 0;
    } else {
      cost_[j] = j < static_cast<int>(real_costs.size()) ? real_costs[j] : 0.0;
    }
  }
}

double SimplexCore::objective() const {
  double s = 0.0;
  for (int i = 0; i < m_; ++i) s += cost_[basis_[i]] * xB_[i];
  return s;
}

Vec SimplexCore::primal() const {
  Vec x(num_cols(), 0.0);
  for (int i = 0; i < m_; ++i) x[basis_[i]] = xB_[i];
  return x;
}

Vec SimplexCore::duals() const {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
  Eigen::VectorXd y = Binv_.transpose() * cb;
  return Vec(y.data(), y.data() + m_);
}

void SimplexCore::refactorize() {
  Eigen::MatrixXd B(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int r = 0; r < m_; ++r) B(r, i) = cols_[basis_[i]][r];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Binv_ = lu.solve(Eigen::MatrixXd::Identity(m_, m_));
  Eigen::Map<const Eigen::VectorXd> bv(b_.data(), m_);
  Eigen::VectorXd x = Binv_ * bv;
  for (int i = 0; i < m_; ++i) xB_[i] = x[i];
  pivots_since_refactor_ = 0;
}

int SimplexCore::price_entering(const Vec& y, double entry_tol, bool bland) const {
  int best = -1;
  double best_red = -entry_tol;
  for (int j = 0; j < num_cols(); ++j) {
    if (!enterable_[j]) continue;
    double red = cost_[j];
    const Vec& col = cols_[j];
    for (int i = 0; i < m_; ++i) red -= y[i] * col[i];
    if (red < -entry_tol) {
      if (bland) return j;
      if (red < best_red) {
        best_red = red;
        best = j;
      }
    }
  }
  return best;
}

int SimplexCore::ratio_test(const Vec& w, double* step, bool bland) const {
  double best = kInf;
  for (int i = 0; i < m_; ++i) {
    if (w[i] > kPivotTol) {
      best = std::min(best, xB_[i] / w[i]);
    } else if (w[i] < -kPivotTol && artificial_[basis_[i]] && xB_[i] <= 1e-12) {
      // a pinned artificial may not grow positive
      best = 0.0;
    }
  }
  if (best == kInf) {
    *step = kInf;
    return -1;
  }
  // among (near-)minimal ratios: Bland wants the smallest basis label, the
  // default mode wants a well-conditioned pivot and artificials out first
  int leave = -1;
  double window = 1e-9 * (1.0 + std::abs(best));
  for (int i = 0; i < m_; ++i) {
    bool candidate = false;
    if (w[i] > kPivotTol && xB_[i] / w[i] <= best + window)
      candidate = true;
    else if (w[i] < -kPivotTol && artificial_[basis_[i]] && xB_[i] <= 1e-12 && best <= window)
      candidate = true;
    if (!candidate) continue;
    if (leave < 0) {
      leave = i;
      continue;
    }
    if (bland) {
      if (basis_[i] < basis_[leave]) leave = i;
    } else {
      bool art_i = artificial_[basis_[i]], art_l = artificial_[basis_[leave]];
      if (art_i != art_l) {
        if (art_i) leave = i;
      } else if (std::abs(w[i]) > std::abs(w[leave])) {
        leave = i;
      }
    }
  }
  *step = best;
  return leave;
}

void SimplexCore::pivot(int entering, int leave_row, const Vec& w, double step) {
  for (int i = 0; i < m_; ++i) xB_[i] -= step * w[i];
  xB_[leave_row] = step;
  double piv = w[leave_row];
  for (int c = 0; c < m_; ++c) Binv_(leave_row, c) /= piv;
  for (int i = 0; i < m_; ++i) {
    if (i == leave_row) continue;
    double f = w[i];
    if (f == 0.0) continue;
    for (int c = 0; c < m_; ++c) Binv_(i, c) -= f * Binv_(leave_row, c);
  }
  basis_[leave_row] = entering;
  if (++pivots_since_refactor_ >= kRefactorEvery) refactorize();
}

CoreStatus SimplexCore::optimize(double entry_tol, long max_iter) {
  long stalls = 0;
  double last_obj = objective();
  for (long it = 0; it < max_iter; ++it) {
    Vec y = duals();
    bool bland = stalls > 2 * m_ + 50;
    int j = price_entering(y, entry_tol, bland);
    if (j < 0) {
      refactorize();
      // re-price after a clean factorisation to rule out drift
      y = duals();
      j = price_entering(y, entry_tol * 10.0, bland);
      if (j < 0) return CoreStatus::Optimal;
    }
    Eigen::Map<const Eigen::VectorXd> cj(cols_[j].data(), m_);
    Eigen::VectorXd wv = Binv_ * cj;
    Vec w(wv.data(), wv.data() + m_);
    double step;
    int r = ratio_test(w, &step, bland);
    if (r < 0) return CoreStatus::Unbounded;
    pivot(j, r, w, step);
    double obj = objective();
    stalls = (obj < last_obj - 1e-13) ? 0 : stalls + 1;
    last_obj = obj;
    for (int i = 0; i < m_; ++i) {
      if (xB_[i] < -1e-7) {
        refactorize();
        bool bad = false;
        for (int k = 0; k < m_; ++k) bad = bad || xB_[k] < -1e-6;
        if (bad) return CoreStatus::Numerical;
        break;
      }
    }
  }
  return CoreStatus::IterationLimit;
}

}  // namespace bceid::solver
