#pragma once

#include "drstack/solver/backend.hpp"

namespace drstack::solver {

/// Self-contained fallback: dense bounded-variable primal simplex, depth-first
/// branch-and-bound over binaries, and a primal active-set method for convex
/// QPs. Intended for the small programs used in tests and desk-scale runs.
class ReferenceBackend final : public SolverBackend {
 public:
  std::string_view name() const override { return "reference"; }

 protected:
  SolveOutcome do_solve_lp(const LinearProgram& p, const SolveOptions& opt) const override;
  SolveOutcome do_solve_milp(const MixedIntegerProgram& p,
                             const SolveOptions& opt) const override;
  SolveOutcome do_solve_qp(const QuadraticProgram& p, const SolveOptions& opt) const override;
};

}  // namespace drstack::solver
