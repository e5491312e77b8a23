#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "drstack/context.hpp"
#include "drstack/game.hpp"

namespace drstack {

enum class GroundMetric { frobenius };

double ground_distance(GroundMetric metric, const FollowerUtility& a, const FollowerUtility& b);

/// Table of d^t(from_i, to_j); rows index `from`, columns index `to`.
Matrix distance_power_table(const std::vector<FollowerUtility>& from,
                            const std::vector<FollowerUtility>& to, GroundMetric metric, double t);

/// {mu in simplex over `support` : A mu <= b}.
struct PolytopeAmbiguity {
  std::vector<FollowerUtility> support;
  Matrix a;  // rows x k
  Vector b;

  /// Validates shapes and checks non-emptiness with one feasibility LP.
  static PolytopeAmbiguity create(std::vector<FollowerUtility> support, Matrix a, Vector b,
                                  const Context& ctx = {});
  static PolytopeAmbiguity full_simplex(std::vector<FollowerUtility> support);
  /// The single distribution with the given weights.
  static PolytopeAmbiguity singleton(std::vector<FollowerUtility> support,
                                     const std::vector<double>& weights);
  int size() const { return static_cast<int>(support.size()); }
};

struct WassersteinBall {
  Distribution nominal;
  double theta = 0.1;
  double t = 2.0;
  GroundMetric metric = GroundMetric::frobenius;

  void validate() const;
  double theta_power() const;
};

using AmbiguitySpec = std::variant<PolytopeAmbiguity, WassersteinBall>;

class UnsupportedUniverse : public std::logic_error {
  using std::logic_error::logic_error;
};

struct TransportResult {
  double value;  // W_t, i.e. the optimal cost raised to 1/t
  Matrix plan;
};

TransportResult wasserstein_primal(const Distribution& mu, const Distribution& nu, double t,
                                   GroundMetric metric, const Context& ctx = {});

/// Optimal value of the transport dual; equals wasserstein_primal(...)^t.
double wasserstein_dual(const Distribution& mu, const Distribution& nu, double t,
                        GroundMetric metric, const Context& ctx = {});

struct WorstCase {
  double value;
  std::vector<double> mu;  // attaining distribution over the candidates
};

/// inf over the polytope of sum_i mu_i h_i.
WorstCase worstcase_expectation(const PolytopeAmbiguity& poly, const std::vector<double>& h,
                                const Context& ctx = {});

/// inf of sum_i mu_i h_i over distributions on `candidates` within the ball,
/// solved as one LP over the transport plan.
WorstCase worstcase_expectation(const WassersteinBall& ball,
                                const std::vector<FollowerUtility>& candidates,
                                const std::vector<double>& h, const Context& ctx = {});

/// Ball over its own nominal support.
WorstCase worstcase_expectation(const AmbiguitySpec& amb, const std::vector<double>& h,
                                const Context& ctx = {});

/// Leader's worst-case expected payoff g(x). Wasserstein balls are evaluated
/// over the game's finite universe; other universes throw UnsupportedUniverse.
double leader_worstcase_value(const GameInstance& g, const AmbiguitySpec& amb,
                              const MixedStrategy& x, double tol = kBestResponseTol,
                              const Context& ctx = {});

}  // namespace drstack
