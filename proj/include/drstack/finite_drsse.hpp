#pragma once

#include "drstack/ambiguity.hpp"
#include "drstack/context.hpp"
#include "drstack/solution.hpp"

namespace drstack {

/// One program per best-response mapping z; returns the best feasible one.
/// Polytope ambiguity uses the support of the polytope as follower
/// utilities; Wasserstein balls use the game's finite universe.
/// Throws EnumerationGuard when m^k exceeds kEnumerationLimit.
DrsssSolution solve_by_enumeration(const GameInstance& g, const AmbiguitySpec& amb,
                                   const Context& ctx = {});

/// Single big-M MIP with one-hot best-response selection. The inner
/// infimum is replaced by its LP dual, giving a linear objective.
DrsssSolution solve_by_mip(const GameInstance& g, const AmbiguitySpec& amb,
                           const BigMConfig& cfg = {}, const Context& ctx = {});

/// Direct MIP for a Wasserstein ball whose nominal is supported on the k
/// utilities of the finite universe: n+k+1 continuous variables and m*k
/// binaries. The program minimises lambda*theta^t - sum_j nu_j w_j; the
/// reported value is its negation.
DrsssSolution solve_wasserstein_finite_mip(const GameInstance& g, const WassersteinBall& ball,
                                           const BigMConfig& cfg = {}, const Context& ctx = {});

/// Size of the program built by solve_wasserstein_finite_mip.
struct MipShape {
  int continuous = 0;
  int binaries = 0;
  int rows = 0;
};
MipShape wasserstein_finite_mip_shape(const GameInstance& g, const WassersteinBall& ball,
                                      const BigMConfig& cfg = {});

}  // namespace drstack
