#pragma once

#include <Eigen/Dense>

#include <optional>
#include <variant>
#include <vector>

namespace drstack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// n x m follower payoff matrix with entries in [0,1].
using FollowerUtility = Matrix;
/// Probability vector over leader actions.
using MixedStrategy = Vector;
/// Follower action chosen for each follower utility, by index.
using BestResponseMapping = std::vector<int>;

inline constexpr double kBestResponseTol = 1e-9;
inline constexpr double kSimplexTol = 1e-9;

/// Finitely supported distribution over follower utilities. Support entries
/// need not be distinct.
struct Distribution {
  std::vector<FollowerUtility> support;
  std::vector<double> weights;

  int size() const { return static_cast<int>(support.size()); }
  /// Throws std::invalid_argument unless the weights form a probability
  /// vector matching the support.
  void validate() const;
  static Distribution uniform(std::vector<FollowerUtility> support);
};

struct FiniteUniverse {
  std::vector<FollowerUtility> utilities;
};

/// Every matrix in [0,1]^{n x m}.
struct BoxUniverse {};

/// Two-valued matrices: alpha on the cells where mask = 1, beta elsewhere,
/// with alpha, beta in [0,1].
struct InspectionFamily {
  Matrix mask;

  int intersect_count() const;
  FollowerUtility member(double alpha, double beta) const;
};

using FollowerUniverse = std::variant<FiniteUniverse, BoxUniverse, InspectionFamily>;

class GameInstance {
 public:
  /// `nominal` is the default empirical distribution carried with the
  /// instance; for finite universes it defaults to uniform weights.
  GameInstance(Matrix u_l, FollowerUniverse universe,
               std::optional<Distribution> nominal = std::nullopt);

  int n() const { return static_cast<int>(u_l_.rows()); }
  int m() const { return static_cast<int>(u_l_.cols()); }
  const Matrix& leader() const { return u_l_; }
  const FollowerUniverse& universe() const { return universe_; }
  bool is_finite() const { return std::holds_alternative<FiniteUniverse>(universe_); }
  /// Utilities of a finite universe; throws std::logic_error otherwise.
  const std::vector<FollowerUtility>& finite_utilities() const;
  const std::optional<Distribution>& nominal() const { return nominal_; }
  /// Throws std::logic_error when the instance carries no nominal.
  const Distribution& require_nominal() const;

  /// Checks that u_f has this game's shape and entries in [0,1].
  void check_utility(const FollowerUtility& u_f) const;

 private:
  Matrix u_l_;
  FollowerUniverse universe_;
  std::optional<Distribution> nominal_;
};

/// Throws std::invalid_argument unless x is in the simplex within kSimplexTol.
void check_mixed_strategy(const MixedStrategy& x, int n);

/// u(x, a) = sum_i x_i u(i, a) for every action a.
Vector expected_payoffs(const Matrix& u, const MixedStrategy& x);

Vector follower_expected_payoffs(const GameInstance& g, const FollowerUtility& u_f,
                                 const MixedStrategy& x);

/// Pure actions within `tol` of the best expected payoff, ascending.
std::vector<int> best_response_set(const FollowerUtility& u_f, const MixedStrategy& x,
                                   double tol = kBestResponseTol);

struct TieBreak {
  double payoff;
  int action;
};

/// Leader-favourable response: the best-response action maximising the
/// leader's expected payoff, lowest index among leader ties.
TieBreak strong_tiebreak(const Matrix& u_l, const FollowerUtility& u_f, const MixedStrategy& x,
                         double tol = kBestResponseTol);

inline TieBreak strong_tiebreak_payoff(const GameInstance& g, const FollowerUtility& u_f,
                                       const MixedStrategy& x, double tol = kBestResponseTol) {
  return strong_tiebreak(g.leader(), u_f, x, tol);
}

}  // namespace drstack
