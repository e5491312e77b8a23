#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace drstack::solver {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Primal feasibility tolerance every backend must honour for LP/MILP.
inline constexpr double kFeasibilityTol = 1e-7;
/// Integrality tolerance for binary variables at a reported optimum.
inline constexpr double kIntegralityTol = 1e-6;
/// KKT residual bound for convex QP solutions.
inline constexpr double kKktTol = 1e-6;

enum class Sense { minimize, maximize };
enum class Relation { less_equal, equal, greater_equal };

struct Term {
  int var;
  double coef;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool binary = false;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// Linear objective, variable bounds and linear rows. Value type; cheap to
/// copy for the sizes this library emits.
class LinearProgram {
 public:
  int add_variable(std::string name, double lower = 0.0,
                   double upper = kInfinity);
  int add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                     std::string name = {});
  void set_objective(Sense sense, std::vector<Term> terms, double offset = 0.0);

  void set_bounds(int var, double lower, double upper);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Variable& variable(int j) const { return variables_.at(j); }
  Sense sense() const { return sense_; }
  /// Dense objective coefficients, one per variable.
  std::vector<double> objective_coefficients() const;
  double objective_offset() const { return offset_; }

  /// Linear objective value at `x` (quadratic terms excluded).
  double evaluate_linear(const std::vector<double>& x) const;
  /// Largest bound or row violation at `x`; scaled rows use absolute error.
  double max_violation(const std::vector<double>& x) const;

  /// Throws std::invalid_argument when a term references an undeclared
  /// variable or a bound pair is inverted.
  void validate() const;

 protected:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  Sense sense_ = Sense::minimize;
  double offset_ = 0.0;
};

class MixedIntegerProgram : public LinearProgram {
 public:
  MixedIntegerProgram() = default;
  explicit MixedIntegerProgram(LinearProgram lp) : LinearProgram(std::move(lp)) {}

  int add_binary(std::string name);
  bool is_binary(int var) const { return variables_.at(var).binary; }
  int num_binaries() const;
  int num_continuous() const { return num_variables() - num_binaries(); }
  /// Largest distance of a binary entry of `x` from {0,1}.
  double max_integrality_violation(const std::vector<double>& x) const;
};

struct QuadTerm {
  int row;
  int col;
  double value;
};

/// Minimise 0.5 x'Qx + c'x + offset subject to linear rows and bounds.
/// Q is stored as its upper triangle (row <= col); off-diagonal entries are
/// mirrored when the product is evaluated.
class QuadraticProgram : public LinearProgram {
 public:
  void add_quadratic(int i, int j, double value);
  const std::vector<QuadTerm>& quadratic() const { return quadratic_; }
  bool is_diagonal() const;
  /// Diagonal forms only: every diagonal entry must be non-negative.
  bool is_convex() const;
  double evaluate(const std::vector<double>& x) const;
  /// Gradient Qx + c.
  std::vector<double> gradient(const std::vector<double>& x) const;

 private:
  std::vector<QuadTerm> quadratic_;
};

enum class Status { optimal, infeasible, unbounded, limit_hit };

const char* to_string(Status s);

struct SolveOutcome {
  Status status = Status::infeasible;
  std::vector<double> values;
  double objective = 0.0;
  double wall_time_s = 0.0;
  /// Row and column multipliers (LP/QP). Convention: gradient = A'y + z,
  /// y_i >= 0 on an active >= side, <= 0 on an active <= side.
  std::vector<double> row_duals;
  std::vector<double> col_duals;

  bool optimal() const { return status == Status::optimal; }
  double value(int var) const { return values.at(var); }
};

/// Stationarity, sign and complementarity residual of a QP outcome.
double kkt_residual(const QuadraticProgram& qp, const SolveOutcome& out);

}  // namespace drstack::solver
