#pragma once

#include <string>

#include "drstack/solver/backend.hpp"

namespace drstack::solver {

/// Adapter over the HiGHS C API. The shared library is loaded at runtime
/// from $DRSTACK_HIGHS_LIBRARY, the path detected at configure time, or the
/// loader's default search path, in that order. Constructing the backend
/// when no library can be loaded throws BackendUnavailable.
class HighsBackend final : public SolverBackend {
 public:
  HighsBackend();
  std::string_view name() const override { return "highs"; }

  static bool available();
  /// Path of the loaded library, or empty when unavailable.
  static std::string library_path();

 protected:
  SolveOutcome do_solve_lp(const LinearProgram& p, const SolveOptions& opt) const override;
  SolveOutcome do_solve_milp(const MixedIntegerProgram& p,
                             const SolveOptions& opt) const override;
  SolveOutcome do_solve_qp(const QuadraticProgram& p, const SolveOptions& opt) const override;
};

}  // namespace drstack::solver
