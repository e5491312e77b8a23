#pragma once

#include <chrono>

#include "drstack/solver/program.hpp"

namespace drstack::solver::detail {

using Clock = std::chrono::steady_clock;

/// Solves an LP (any sense, any bounds) with a two-phase bounded-variable
/// dense simplex. Row and column duals are not produced.
SolveOutcome dense_simplex(const LinearProgram& p, Clock::time_point deadline);

SolveOutcome branch_and_bound(const MixedIntegerProgram& p, Clock::time_point deadline);

SolveOutcome active_set_qp(const QuadraticProgram& p, Clock::time_point deadline);

Clock::time_point deadline_after(double seconds);

}  // namespace drstack::solver::detail
