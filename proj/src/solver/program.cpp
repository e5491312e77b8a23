#include "drstack/solver/program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drstack::solver {

int LinearProgram::add_variable(std::string name, double lower, double upper) {
  variables_.push_back({std::move(name), lower, upper, false});
  return num_variables() - 1;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Relation relation,
                                  double rhs, std::string name) {
  constraints_.push_back({std::move(name), std::move(terms), relation, rhs});
  return num_constraints() - 1;
}

void LinearProgram::set_objective(Sense sense, std::vector<Term> terms,
                                  double offset) {
  sense_ = sense;
  objective_ = std::move(terms);
  offset_ = offset;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

std::vector<double> LinearProgram::objective_coefficients() const {
  std::vector<double> c(variables_.size(), 0.0);
  for (const auto& t : objective_) c.at(t.var) += t.coef;
  return c;
}

double LinearProgram::evaluate_linear(const std::vector<double>& x) const {
  double v = offset_;
  for (const auto& t : objective_) v += t.coef * x.at(t.var);
  return v;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max(worst, variables_[j].lower - x[j]);
    worst = std::max(worst, x[j] - variables_[j].upper);
  }
  for (const auto& row : constraints_) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * x[t.var];
    switch (row.relation) {
      case Relation::less_equal: worst = std::max(worst, lhs - row.rhs); break;
      case Relation::greater_equal: worst = std::max(worst, row.rhs - lhs); break;
      case Relation::equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

void LinearProgram::validate() const {
  const int n = num_variables();
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw std::invalid_argument("variable '" + v.name + "' has invalid bounds");
    if (v.binary && (v.lower < 0.0 || v.upper > 1.0))
      throw std::invalid_argument("binary variable '" + v.name +
                                  "' must have bounds within [0,1]");
  }
  auto check_terms = [n](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= n)
        throw std::invalid_argument(where + " references undeclared variable " +
                                    std::to_string(t.var));
      if (!std::isfinite(t.coef))
        throw std::invalid_argument(where + " has a non-finite coefficient");
    }
  };
  check_terms(objective_, "objective");
  for (const auto& row : constraints_) {
    check_terms(row.terms, "constraint '" + row.name + "'");
    if (!std::isfinite(row.rhs))
      throw std::invalid_argument("constraint '" + row.name + "' has non-finite rhs");
  }
}

int MixedIntegerProgram::add_binary(std::string name) {
  const int j = add_variable(std::move(name), 0.0, 1.0);
  variables_[j].binary = true;
  return j;
}

int MixedIntegerProgram::num_binaries() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(),
                                        [](const Variable& v) { return v.binary; }));
}

double MixedIntegerProgram::max_integrality_violation(
    const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j)
    if (variables_[j].binary)
      worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  return worst;
}

void QuadraticProgram::add_quadratic(int i, int j, double value) {
  if (i > j) std::swap(i, j);
  quadratic_.push_back({i, j, value});
}

bool QuadraticProgram::is_diagonal() const {
  return std::all_of(quadratic_.begin(), quadratic_.end(),
                     [](const QuadTerm& q) { return q.row == q.col; });
}

bool QuadraticProgram::is_convex() const {
  if (!is_diagonal()) return false;
  std::vector<double> diag(variables_.size(), 0.0);
  for (const auto& q : quadratic_) diag.at(q.row) += q.value;
  return std::all_of(diag.begin(), diag.end(), [](double d) { return d >= 0.0; });
}

std::vector<double> QuadraticProgram::gradient(const std::vector<double>& x) const {
  std::vector<double> g = objective_coefficients();
  for (const auto& q : quadratic_) {
    g[q.row] += q.value * x[q.col];
    if (q.row != q.col) g[q.col] += q.value * x[q.row];
  }
  return g;
}

double QuadraticProgram::evaluate(const std::vector<double>& x) const {
  double v = evaluate_linear(x);
  for (const auto& q : quadratic_) {
    const double w = q.value * x[q.row] * x[q.col];
    v += q.row == q.col ? 0.5 * w : w;
  }
  return v;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::limit_hit: return "limit-hit";
  }
  return "unknown";
}

double kkt_residual(const QuadraticProgram& qp, const SolveOutcome& out) {
  if (!out.optimal()) return kInfinity;
  const auto& x = out.values;
  const int n = qp.num_variables();
  const int m = qp.num_constraints();
  if (static_cast<int>(out.row_duals.size()) != m ||
      static_cast<int>(out.col_duals.size()) != n)
    return kInfinity;

  double res = qp.max_violation(x);
  std::vector<double> stat = qp.gradient(x);
  for (int i = 0; i < m; ++i) {
    const auto& row = qp.constraints()[i];
    const double y = out.row_duals[i];
    double lhs = 0.0;
    for (const auto& t : row.terms) {
      stat[t.var] -= y * t.coef;
      lhs += t.coef * x[t.var];
    }
    const double slack = std::abs(lhs - row.rhs);
    if (row.relation == Relation::less_equal) res = std::max(res, y);
    if (row.relation == Relation::greater_equal) res = std::max(res, -y);
    if (row.relation != Relation::equal) res = std::max(res, std::abs(y) * slack);
  }
  for (int j = 0; j < n; ++j) {
    const auto& v = qp.variable(j);
    const double z = out.col_duals[j];
    stat[j] -= z;
    // z > 0 only at an active lower bound, z < 0 only at an active upper.
    if (z > 0.0) res = std::max(res, z * std::min(1.0, x[j] - v.lower));
    if (z < 0.0) res = std::max(res, -z * std::min(1.0, v.upper - x[j]));
  }
  for (double s : stat) res = std::max(res, std::abs(s));
  return res;
}

}  // namespace drstack::solver
