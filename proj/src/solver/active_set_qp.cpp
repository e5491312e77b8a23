#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dense_simplex.hpp"
#include "drstack/solver/backend.hpp"

namespace drstack::solver::detail {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kMaxIterations = 5000;

// Every row and bound becomes  a'x >= b  (or = b). `origin` records where
// the multiplier must be reported.
struct Row {
  VectorXd a;
  double b;
  bool equality;
  enum class Kind { row, lower, upper } kind;
  int index;
  double sign;  // multiplier of the original object = sign * mu
};

std::vector<Row> gather_rows(const QuadraticProgram& p) {
  const int n = p.num_variables();
  std::vector<Row> rows;
  for (int i = 0; i < p.num_constraints(); ++i) {
    const auto& c = p.constraints()[i];
    VectorXd a = VectorXd::Zero(n);
    for (const auto& t : c.terms) a[t.var] += t.coef;
    const double s = c.relation == Relation::less_equal ? -1.0 : 1.0;
    rows.push_back({s * a, s * c.rhs, c.relation == Relation::equal, Row::Kind::row, i, s});
  }
  for (int j = 0; j < n; ++j) {
    const auto& v = p.variable(j);
    if (std::isfinite(v.lower)) {
      VectorXd a = VectorXd::Unit(n, j);
      rows.push_back({a, v.lower, false, Row::Kind::lower, j, 1.0});
    }
    if (std::isfinite(v.upper)) {
      VectorXd a = -VectorXd::Unit(n, j);
      rows.push_back({a, -v.upper, false, Row::Kind::upper, j, -1.0});
    }
  }
  return rows;
}

MatrixXd stack_rows(const std::vector<Row>& rows, const std::vector<int>& working, int n) {
  MatrixXd a(working.size(), n);
  for (std::size_t r = 0; r < working.size(); ++r) a.row(r) = rows[working[r]].a.transpose();
  return a;
}

int rank_of(const MatrixXd& a) {
  if (a.rows() == 0) return 0;
  Eigen::FullPivLU<MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

MatrixXd null_space(const MatrixXd& a, int n) {
  if (a.rows() == 0) return MatrixXd::Identity(n, n);
  Eigen::FullPivLU<MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() == n) return MatrixXd(n, 0);
  // Orthonormalise the kernel basis so that the reduced Hessian stays well
  // scaled.
  const MatrixXd k = lu.kernel();
  Eigen::HouseholderQR<MatrixXd> qr(k);
  return qr.householderQ() * MatrixXd::Identity(n, k.cols());
}

}  // namespace

// Primal active-set method for convex QPs. The starting vertex comes from
// the dense simplex; semidefinite reduced Hessians are handled through an
// eigendecomposition, moving along descent directions of zero curvature
// until a constraint blocks.
SolveOutcome active_set_qp(const QuadraticProgram& p, Clock::time_point deadline) {
  const int n = p.num_variables();
  SolveOutcome out;

  LinearProgram feas = static_cast<const LinearProgram&>(p);
  feas.set_objective(Sense::minimize, {});
  SolveOutcome start = dense_simplex(feas, deadline);
  if (start.status != Status::optimal) {
    out.status = start.status == Status::unbounded ? Status::infeasible : start.status;
    return out;
  }

  MatrixXd q = MatrixXd::Zero(n, n);
  for (const auto& t : p.quadratic()) {
    q(t.row, t.col) += t.value;
    if (t.row != t.col) q(t.col, t.row) += t.value;
  }
  VectorXd c = VectorXd::Zero(n);
  {
    const auto coef = p.objective_coefficients();
    for (int j = 0; j < n; ++j) c[j] = coef[j];
  }

  const std::vector<Row> rows = gather_rows(p);
  VectorXd x = Eigen::Map<const VectorXd>(start.values.data(), n);

  std::vector<int> working;
  std::vector<char> in_working(rows.size(), 0);
  auto try_add = [&](int r) {
    working.push_back(r);
    if (rank_of(stack_rows(rows, working, n)) < static_cast<int>(working.size())) {
      working.pop_back();
      return false;
    }
    in_working[r] = 1;
    return true;
  };
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].equality) try_add(static_cast<int>(r));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].equality) continue;
    const double slack = rows[r].a.dot(x) - rows[r].b;
    if (std::abs(slack) <= 1e-9 * std::max(1.0, std::abs(rows[r].b))) try_add(static_cast<int>(r));
  }

  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  for (int it = 0; it < kMaxIterations; ++it) {
    if ((it & 15) == 0 && Clock::now() > deadline) {
      out.status = Status::limit_hit;
      return out;
    }
    const VectorXd g = q * x + c;
    const MatrixXd aw = stack_rows(rows, working, n);
    const MatrixXd z = null_space(aw, n);

    VectorXd step = VectorXd::Zero(n);
    bool ray = false;
    if (z.cols() > 0) {
      const MatrixXd h = z.transpose() * q * z;
      const VectorXd rg = -z.transpose() * g;
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
      const VectorXd& ev = eig.eigenvalues();
      const MatrixXd& vec = eig.eigenvectors();
      const double curv_tol = 1e-10 * scale;
      VectorXd flat = VectorXd::Zero(z.cols());
      VectorXd newton = VectorXd::Zero(z.cols());
      for (int k = 0; k < ev.size(); ++k) {
        const double proj = vec.col(k).dot(rg);
        if (ev[k] > curv_tol)
          newton += vec.col(k) * (proj / ev[k]);
        else
          flat += vec.col(k) * proj;
      }
      if (flat.norm() > 1e-12 * std::max(1.0, g.norm())) {
        step = z * flat;
        ray = true;
      } else {
        step = z * newton;
      }
    }

    if (step.norm() <= 1e-12 * std::max(1.0, x.norm())) {
      // Stationary on the working set: check inequality multipliers.
      VectorXd mu = VectorXd::Zero(working.size());
      if (!working.empty())
        mu = aw.transpose().colPivHouseholderQr().solve(g);
      int drop = -1;
      double most_negative = -1e-10 * std::max(1.0, g.norm());
      for (std::size_t r = 0; r < working.size(); ++r) {
        if (rows[working[r]].equality) continue;
        if (mu[r] < most_negative) {
          most_negative = mu[r];
          drop = static_cast<int>(r);
        }
      }
      if (drop < 0) {
        out.status = Status::optimal;
        out.values.assign(x.data(), x.data() + n);
        out.objective = p.evaluate(out.values);
        out.row_duals.assign(p.num_constraints(), 0.0);
        out.col_duals.assign(n, 0.0);
        for (std::size_t r = 0; r < working.size(); ++r) {
          const Row& row = rows[working[r]];
          const double m = row.equality ? mu[r] : std::max(mu[r], 0.0);
          if (row.kind == Row::Kind::row)
            out.row_duals[row.index] += row.sign * m;
          else
            out.col_duals[row.index] += row.sign * m;
        }
        return out;
      }
      in_working[working[drop]] = 0;
      working.erase(working.begin() + drop);
      continue;
    }

    double alpha = ray ? kInfinity : 1.0;
    int blocking = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (in_working[r] || rows[r].equality) continue;
      const double slope = rows[r].a.dot(step);
      if (slope >= -1e-14) continue;
      const double room = std::max(rows[r].a.dot(x) - rows[r].b, 0.0);
      const double lim = room / -slope;
      if (lim < alpha) {
        alpha = lim;
        blocking = static_cast<int>(r);
      }
    }
    if (!std::isfinite(alpha)) {
      out.status = Status::unbounded;
      return out;
    }
    x += alpha * step;
    if (blocking >= 0 && !try_add(blocking)) {
      // A dependent blocking row cannot be added; treat it as satisfied.
      in_working[blocking] = 0;
    }
  }
  throw NumericalFailure("reference QP: iteration limit reached");
}

}  // namespace drstack::solver::detail
