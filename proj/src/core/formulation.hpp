#pragma once

// Building blocks shared by the finite-support programs, the baselines and
// the incremental master MIP.

#include <omp.h>

#include <atomic>
#include <chrono>
#include <exception>
#include <string>
#include <vector>

#include "drstack/context.hpp"
#include "drstack/game.hpp"
#include "drstack/solution.hpp"
#include "drstack/solver/program.hpp"

namespace drstack::detail {

using solver::LinearProgram;
using solver::Relation;
using solver::Sense;
using solver::Term;

/// Adds x_0..x_{n-1} >= 0 with sum 1; returns the index of x_0.
int add_leader_simplex(LinearProgram& p, int n);

/// Terms of sum_i coef * u(i, a) x_i.
std::vector<Term> payoff_terms(const Matrix& u, int x0, int a, double coef = 1.0);

/// sum_i x_i (u(i,a) - u(i,a')) >= 0 for every a' != a.
void add_fixed_br_rows(LinearProgram& p, const Matrix& u, int x0, int a);

/// sum_i x_i (u(i,a) - u(i,a')) - M delta_a >= -M for all a, a'. The a = a'
/// rows reduce to delta_a <= 1 and are emitted only when `include_trivial`.
void add_bigm_br_rows(LinearProgram& p, const Matrix& u, int x0, const std::vector<int>& delta,
                      double M, bool include_trivial);

/// Leader strategy read back from a solution, clipped and renormalised.
MixedStrategy extract_strategy(const std::vector<double>& values, int x0, int n);

/// Index of the largest delta value among `delta`.
int selected_action(const std::vector<double>& values, const std::vector<int>& delta);

/// Throws BigMViolation unless mapping[i] is a best response to x under
/// utilities[i] within `tol`.
void verify_mapping(const std::vector<FollowerUtility>& utilities, const MixedStrategy& x,
                    const BestResponseMapping& mapping, double tol);

/// Tolerance used when re-checking mappings recovered from solver output.
inline constexpr double kMappingTol = 1e-6;

/// m^k, throwing EnumerationGuard above kEnumerationLimit.
long enumeration_count(int m, int k);

/// Digits of `index` in base m, least significant first.
BestResponseMapping decode_mapping(long index, int m, int k);

struct EnumerationBest {
  long index = -1;
  double value = 0.0;
  solver::SolveOutcome outcome;
  double solver_time_s = 0.0;
  int solved = 0;
  bool limit_hit = false;
};

/// Solves build(mapping) for every mapping in A_f^k and keeps the largest
/// leader value, where value(outcome) converts the program objective into the
/// leader's value. Ties are resolved by the lowest mapping index so that the
/// result does not depend on thread scheduling.
template <class Build, class Value>
EnumerationBest enumerate_mappings(int m, int k, const Context& ctx, const char* tag,
                                   Build&& build, Value&& value) {
  const long count = enumeration_count(m, k);
  const auto start = std::chrono::steady_clock::now();
  auto expired = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
           ctx.time_limit_s;
  };
  EnumerationBest best;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  const auto& backend = ctx.solver();
#pragma omp parallel if (ctx.parallel())
  {
    EnumerationBest local;
#pragma omp for schedule(dynamic, 8) nowait
    for (long z = 0; z < count; ++z) {
      if (local.limit_hit || failed.load(std::memory_order_relaxed)) continue;
      try {
        if (expired()) {
          local.limit_hit = true;
          continue;
        }
        const LinearProgram lp = build(decode_mapping(z, m, k));
        ctx.dump(lp, tag);
        auto r = backend.solve_lp(lp, ctx.options());
        local.solver_time_s += r.wall_time_s;
        ++local.solved;
        if (r.status == solver::Status::limit_hit) {
          local.limit_hit = true;
          continue;
        }
        if (!r.optimal()) continue;
        const double v = value(r);
        if (local.index < 0 || v > local.value || (v == local.value && z < local.index)) {
          local.index = z;
          local.value = v;
          local.outcome = std::move(r);
        }
      } catch (...) {
#pragma omp critical(drstack_enum_error)
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
#pragma omp critical(drstack_enum_merge)
    {
      best.solver_time_s += local.solver_time_s;
      best.solved += local.solved;
      best.limit_hit = best.limit_hit || local.limit_hit;
      if (local.index >= 0 &&
          (best.index < 0 || local.value > best.value ||
           (local.value == best.value && local.index < best.index))) {
        best.index = local.index;
        best.value = local.value;
        best.outcome = std::move(local.outcome);
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return best;
}

/// Solution for a limit-hit run: no strategy, NaN value.
DrsssSolution limit_hit_solution(double solver_time_s, std::string note);

}  // namespace drstack::detail
