#include "drstack/solver/reference_backend.hpp"

#include "dense_simplex.hpp"

namespace drstack::solver {

SolveOutcome ReferenceBackend::do_solve_lp(const LinearProgram& p,
                                           const SolveOptions& opt) const {
  return detail::dense_simplex(p, detail::deadline_after(opt.time_limit_s));
}

SolveOutcome ReferenceBackend::do_solve_milp(const MixedIntegerProgram& p,
                                             const SolveOptions& opt) const {
  return detail::branch_and_bound(p, detail::deadline_after(opt.time_limit_s));
}

SolveOutcome ReferenceBackend::do_solve_qp(const QuadraticProgram& p,
                                           const SolveOptions& opt) const {
  return detail::active_set_qp(p, detail::deadline_after(opt.time_limit_s));
}

}  // namespace drstack::solver
