#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "drstack/solver/program.hpp"

namespace drstack::solver {

class BackendUnavailable : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NonConvexRejected : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SolveOptions {
  double time_limit_s = kInfinity;
};

/// Contract for the three program classes the algorithms reduce to.
/// Implementations hold no mutable state; distinct programs may be solved
/// concurrently on distinct threads.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string_view name() const = 0;

  SolveOutcome solve_lp(const LinearProgram& p, const SolveOptions& opt = {}) const;
  SolveOutcome solve_milp(const MixedIntegerProgram& p,
                          const SolveOptions& opt = {}) const;
  SolveOutcome solve_qp(const QuadraticProgram& p, const SolveOptions& opt = {}) const;

 protected:
  virtual SolveOutcome do_solve_lp(const LinearProgram& p,
                                   const SolveOptions& opt) const = 0;
  virtual SolveOutcome do_solve_milp(const MixedIntegerProgram& p,
                                     const SolveOptions& opt) const = 0;
  virtual SolveOutcome do_solve_qp(const QuadraticProgram& p,
                                   const SolveOptions& opt) const = 0;
};

using BackendPtr = std::shared_ptr<const SolverBackend>;

/// "reference", "highs" or "auto" (HiGHS when loadable, reference otherwise).
BackendPtr make_backend(std::string_view name);

/// Process-wide default, chosen once by make_backend("auto") unless the
/// DRSTACK_BACKEND environment variable names another backend.
BackendPtr default_backend();

}  // namespace drstack::solver
