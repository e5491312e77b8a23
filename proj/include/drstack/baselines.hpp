#pragma once

#include "drstack/ambiguity.hpp"
#include "drstack/context.hpp"
#include "drstack/solution.hpp"

namespace drstack {

/// Enumerates every one-hot delta and solves the literal per-delta LP of the
/// direct Wasserstein MIP, big-M rows included. Same sign convention as
/// solve_wasserstein_finite_mip. Throws EnumerationGuard above m^k = 1e5.
DrsssSolution enumeration_lp_baseline(const GameInstance& g, const WassersteinBall& ball,
                                      const BigMConfig& cfg = {}, const Context& ctx = {});

/// Non-robust Bayesian Stackelberg MIP: max sum_j nu_j w_j with w_j bounded
/// by the leader payoff of the action selected for utility j only. `nu` must
/// be supported on the game's finite universe.
DrsssSolution bayesian_mip(const GameInstance& g, const Distribution& nu,
                           const BigMConfig& cfg = {}, const Context& ctx = {});

/// Strong Stackelberg equilibrium against a single follower utility, by one
/// LP per follower action.
DrsssSolution sse_multiple_lps(const Matrix& u_l, const FollowerUtility& u_f,
                               const Context& ctx = {});

}  // namespace drstack
