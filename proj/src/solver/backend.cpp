#include "drstack/solver/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>

#include "drstack/solver/highs_backend.hpp"
#include "drstack/solver/reference_backend.hpp"

namespace drstack::solver {
namespace {

double feasibility_scale(const LinearProgram& p, const std::vector<double>& x) {
  double scale = 1.0;
  for (const auto& row : p.constraints())
    for (const auto& t : row.terms) scale = std::max(scale, std::abs(t.coef * x[t.var]));
  return scale;
}

// Every optimal outcome is re-checked against the original model so that a
// backend returning an infeasible point is reported instead of propagated.
void verify(const LinearProgram& p, SolveOutcome& out, std::string_view backend) {
  if (!out.optimal()) {
    out.values.clear();
    return;
  }
  const double viol = p.max_violation(out.values);
  if (viol > kFeasibilityTol * feasibility_scale(p, out.values) * 10.0)
    throw NumericalFailure(std::string(backend) +
                           ": optimal point violates constraints by " +
                           std::to_string(viol));
}

template <class F>
SolveOutcome timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome out = f();
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

SolveOutcome SolverBackend::solve_lp(const LinearProgram& p,
                                     const SolveOptions& opt) const {
  p.validate();
  auto out = timed([&] { return do_solve_lp(p, opt); });
  verify(p, out, name());
  return out;
}

SolveOutcome SolverBackend::solve_milp(const MixedIntegerProgram& p,
                                       const SolveOptions& opt) const {
  p.validate();
  auto out = timed([&] { return do_solve_milp(p, opt); });
  verify(p, out, name());
  if (out.optimal() && p.max_integrality_violation(out.values) > kIntegralityTol)
    throw NumericalFailure(std::string(name()) + ": binary variable not integral");
  return out;
}

SolveOutcome SolverBackend::solve_qp(const QuadraticProgram& p,
                                     const SolveOptions& opt) const {
  p.validate();
  if (!p.is_convex())
    throw NonConvexRejected("quadratic term is not a non-negative diagonal");
  if (p.sense() != Sense::minimize && !p.quadratic().empty())
    throw NonConvexRejected("quadratic programs must be minimised");
  auto out = timed([&] { return do_solve_qp(p, opt); });
  verify(p, out, name());
  return out;
}

BackendPtr make_backend(std::string_view name) {
  if (name == "reference") return std::make_shared<ReferenceBackend>();
  if (name == "highs") return std::make_shared<HighsBackend>();
  if (name == "auto" || name.empty()) {
    if (HighsBackend::available()) return std::make_shared<HighsBackend>();
    return std::make_shared<ReferenceBackend>();
  }
  throw std::invalid_argument("unknown solver backend '" + std::string(name) + "'");
}

BackendPtr default_backend() {
  static const BackendPtr backend = [] {
    const char* env = std::getenv("DRSTACK_BACKEND");
    return make_backend(env ? env : "auto");
  }();
  return backend;
}

}  // namespace drstack::solver
