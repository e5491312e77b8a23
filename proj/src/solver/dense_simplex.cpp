#include "dense_simplex.hpp"

#include "drstack/solver/backend.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace drstack::solver::detail {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr int kRefactorEvery = 50;
constexpr int kDegenerateBeforeBland = 30;
constexpr int kMaxPivots = 200000;

// Original variable j equals shift + sign * y[col] (+ minus part for free
// variables, where sign of minus_col is -1).
struct ColumnMap {
  double shift = 0.0;
  double sign = 1.0;
  int col = -1;
  int minus_col = -1;
};

// Bounded-variable primal simplex on  A y = b, 0 <= y <= ub.
class BoundedSimplex {
 public:
  enum class Result { optimal, unbounded, limit };

  BoundedSimplex(MatrixXd a, VectorXd b, VectorXd ub, std::vector<int> basis)
      : a_(std::move(a)), b_(std::move(b)), ub_(std::move(ub)), basis_(std::move(basis)) {
    pos_.assign(a_.cols(), -1);
    at_upper_.assign(a_.cols(), 0);
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r) pos_[basis_[r]] = r;
    refactor();
  }

  Result optimize(const VectorXd& cost, Clock::time_point deadline) {
    int since_refactor = 0;
    int degenerate = 0;
    bool rechecked = false;
    for (int pivots = 0; pivots < kMaxPivots; ++pivots) {
      if ((pivots & 63) == 0 && Clock::now() > deadline) return Result::limit;
      const bool bland = degenerate >= kDegenerateBeforeBland;
      const int q = choose_entering(cost, bland);
      if (q < 0) {
        if (rechecked || since_refactor == 0) return Result::optimal;
        refactor();
        since_refactor = 0;
        rechecked = true;
        continue;
      }
      rechecked = false;
      const double step = pivot_on(q, bland);
      if (step < 0) return Result::unbounded;
      degenerate = step < 1e-12 ? degenerate + 1 : 0;
      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
    }
    return Result::limit;
  }

  VectorXd values() const {
    VectorXd y(a_.cols());
    for (int j = 0; j < a_.cols(); ++j) y[j] = at_upper_[j] ? ub_[j] : 0.0;
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r)
      y[basis_[r]] = std::clamp(beta_[r], 0.0, ub_[basis_[r]]);
    return y;
  }

  void set_upper(int j, double u) { ub_[j] = u; }
  void refresh() { refactor(); }

 private:
  int choose_entering(const VectorXd& cost, bool bland) const {
    VectorXd cb(basis_.size());
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r) cb[r] = cost[basis_[r]];
    const VectorXd d = cost - t_.transpose() * cb;
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < a_.cols(); ++j) {
      if (pos_[j] >= 0 || ub_[j] <= 0.0) continue;
      const double score = at_upper_[j] ? d[j] : -d[j];
      if (score <= kCostTol) continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // Returns the step length, or -1 when the ray is unbounded.
  double pivot_on(int q, bool bland) {
    const double dir = at_upper_[q] ? -1.0 : 1.0;
    const VectorXd alpha = t_.col(q);
    double step = std::isfinite(ub_[q]) ? ub_[q] : std::numeric_limits<double>::infinity();
    int leave = -1;
    bool leave_to_upper = false;
    double leave_pivot = 0.0;
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r) {
      const double a = dir * alpha[r];
      double lim;
      bool to_upper;
      if (a > kPivotTol) {
        lim = std::max(beta_[r], 0.0) / a;
        to_upper = false;
      } else if (a < -kPivotTol && std::isfinite(ub_[basis_[r]])) {
        lim = std::max(ub_[basis_[r]] - beta_[r], 0.0) / -a;
        to_upper = true;
      } else {
        continue;
      }
      bool take;
      if (leave < 0)
        take = lim <= step + 1e-12;
      else if (lim < step - 1e-12)
        take = true;
      else if (lim <= step + 1e-12)
        take = bland ? basis_[r] < basis_[leave] : std::abs(a) > leave_pivot;
      else
        take = false;
      if (take) {
        step = std::min(step, lim);
        leave = r;
        leave_to_upper = to_upper;
        leave_pivot = std::abs(a);
      }
    }
    if (!std::isfinite(step)) return -1.0;

    beta_ -= (dir * step) * alpha;
    if (leave < 0) {
      at_upper_[q] = at_upper_[q] ? 0 : 1;
      return step;
    }
    const double entering_value = (at_upper_[q] ? ub_[q] : 0.0) + dir * step;
    const int out = basis_[leave];
    pos_[out] = -1;
    at_upper_[out] = leave_to_upper ? 1 : 0;
    at_upper_[q] = 0;
    basis_[leave] = q;
    pos_[q] = leave;

    t_.row(leave) /= alpha[leave];
    const Eigen::RowVectorXd pivot_row = t_.row(leave);
    VectorXd factor = alpha;
    factor[leave] = 0.0;
    t_.noalias() -= factor * pivot_row;
    beta_[leave] = entering_value;
    return step;
  }

  void refactor() {
    const int rows = static_cast<int>(basis_.size());
    MatrixXd bm(rows, rows);
    for (int r = 0; r < rows; ++r) bm.col(r) = a_.col(basis_[r]);
    Eigen::PartialPivLU<MatrixXd> lu(bm);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    if (rows > 0 && !(diag.minCoeff() > 1e-11 * std::max(1.0, diag.maxCoeff())))
      throw NumericalFailure("reference simplex: singular basis");
    t_ = lu.solve(a_);
    VectorXd rhs = b_;
    for (int j = 0; j < a_.cols(); ++j)
      if (pos_[j] < 0 && at_upper_[j]) rhs -= ub_[j] * a_.col(j);
    beta_ = lu.solve(rhs);
  }

  MatrixXd a_;
  VectorXd b_;
  VectorXd ub_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  std::vector<char> at_upper_;
  MatrixXd t_;
  VectorXd beta_;
};

}  // namespace

Clock::time_point deadline_after(double seconds) {
  if (!(seconds > 0) || !std::isfinite(seconds) || seconds > 1e7)
    return Clock::time_point::max();
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(seconds));
}

SolveOutcome dense_simplex(const LinearProgram& p, Clock::time_point deadline) {
  const int nv = p.num_variables();
  const int nr = p.num_constraints();
  SolveOutcome out;

  // Standard-form columns for the structural variables.
  std::vector<ColumnMap> map(nv);
  std::vector<double> col_upper;
  for (int j = 0; j < nv; ++j) {
    const auto& v = p.variable(j);
    ColumnMap& m = map[j];
    if (std::isfinite(v.lower)) {
      m.shift = v.lower;
      m.col = static_cast<int>(col_upper.size());
      col_upper.push_back(v.upper - v.lower);
    } else if (std::isfinite(v.upper)) {
      m.shift = v.upper;
      m.sign = -1.0;
      m.col = static_cast<int>(col_upper.size());
      col_upper.push_back(kInfinity);
    } else {
      m.col = static_cast<int>(col_upper.size());
      col_upper.push_back(kInfinity);
      m.minus_col = static_cast<int>(col_upper.size());
      col_upper.push_back(kInfinity);
    }
  }

  std::vector<int> slack_col(nr, -1);
  for (int i = 0; i < nr; ++i) {
    if (p.constraints()[i].relation == Relation::equal) continue;
    slack_col[i] = static_cast<int>(col_upper.size());
    col_upper.push_back(kInfinity);
  }
  const int with_slacks = static_cast<int>(col_upper.size());

  MatrixXd a = MatrixXd::Zero(nr, with_slacks + nr);
  VectorXd b(nr);
  for (int i = 0; i < nr; ++i) {
    const auto& row = p.constraints()[i];
    double rhs = row.rhs;
    for (const auto& t : row.terms) {
      const ColumnMap& m = map[t.var];
      rhs -= t.coef * m.shift;
      a(i, m.col) += t.coef * m.sign;
      if (m.minus_col >= 0) a(i, m.minus_col) -= t.coef;
    }
    if (slack_col[i] >= 0)
      a(i, slack_col[i]) = row.relation == Relation::less_equal ? 1.0 : -1.0;
    if (rhs < 0) {
      a.row(i) *= -1.0;
      rhs = -rhs;
    }
    b[i] = rhs;
  }

  // Initial basis: a slack with +1 coefficient where possible, else an
  // artificial column.
  std::vector<int> basis(nr);
  std::vector<int> artificials;
  for (int i = 0; i < nr; ++i) {
    const int art = with_slacks + i;
    if (slack_col[i] >= 0 && a(i, slack_col[i]) > 0) {
      basis[i] = slack_col[i];
      col_upper.push_back(0.0);
    } else {
      a(i, art) = 1.0;
      basis[i] = art;
      artificials.push_back(art);
      col_upper.push_back(kInfinity);
    }
  }
  const int total = static_cast<int>(col_upper.size());
  for (int j = 0; j < total; ++j)
    if (col_upper[j] < 0) {
      out.status = Status::infeasible;
      return out;
    }

  BoundedSimplex simplex(std::move(a), b, Eigen::Map<VectorXd>(col_upper.data(), total),
                         basis);

  if (!artificials.empty()) {
    VectorXd phase1 = VectorXd::Zero(total);
    for (int j : artificials) phase1[j] = 1.0;
    const auto r = simplex.optimize(phase1, deadline);
    if (r == BoundedSimplex::Result::limit) {
      out.status = Status::limit_hit;
      return out;
    }
    const VectorXd y = simplex.values();
    double infeas = 0.0;
    for (int j : artificials) infeas += y[j];
    if (infeas > kFeasibilityTol * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
      out.status = Status::infeasible;
      return out;
    }
    for (int j : artificials) simplex.set_upper(j, 0.0);
    simplex.refresh();
  }

  VectorXd cost = VectorXd::Zero(total);
  const std::vector<double> c = p.objective_coefficients();
  const double sense = p.sense() == Sense::maximize ? -1.0 : 1.0;
  for (int j = 0; j < nv; ++j) {
    cost[map[j].col] += sense * c[j] * map[j].sign;
    if (map[j].minus_col >= 0) cost[map[j].minus_col] -= sense * c[j];
  }
  const auto r = simplex.optimize(cost, deadline);
  if (r == BoundedSimplex::Result::limit) {
    out.status = Status::limit_hit;
    return out;
  }
  if (r == BoundedSimplex::Result::unbounded) {
    out.status = Status::unbounded;
    return out;
  }
  const VectorXd y = simplex.values();
  out.values.resize(nv);
  for (int j = 0; j < nv; ++j) {
    double v = map[j].shift + map[j].sign * y[map[j].col];
    if (map[j].minus_col >= 0) v -= y[map[j].minus_col];
    const auto& var = p.variable(j);
    out.values[j] = std::clamp(v, var.lower, var.upper);
  }
  out.status = Status::optimal;
  out.objective = p.evaluate_linear(out.values);
  return out;
}

}  // namespace drstack::solver::detail
