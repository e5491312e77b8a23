#include "drstack/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drstack {
namespace {

// Leader payoffs within this distance are treated as tied.
constexpr double kLeaderTieTol = 1e-12;

void check_unit_entries(const Matrix& u, const char* what) {
  if (u.size() == 0) throw std::invalid_argument(std::string(what) + " is empty");
  if (!u.allFinite() || u.minCoeff() < 0.0 || u.maxCoeff() > 1.0)
    throw std::invalid_argument(std::string(what) + " has entries outside [0,1]");
}

}  // namespace

void Distribution::validate() const {
  if (support.empty()) throw std::invalid_argument("distribution has empty support");
  if (weights.size() != support.size())
    throw std::invalid_argument("distribution weights and support differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("negative distribution weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kSimplexTol)
    throw std::invalid_argument("distribution weights do not sum to 1");
  for (const auto& u : support)
    if (u.rows() != support.front().rows() || u.cols() != support.front().cols())
      throw std::invalid_argument("distribution support matrices differ in shape");
}

Distribution Distribution::uniform(std::vector<FollowerUtility> support) {
  Distribution d;
  const double w = support.empty() ? 0.0 : 1.0 / static_cast<double>(support.size());
  d.weights.assign(support.size(), w);
  d.support = std::move(support);
  return d;
}

int InspectionFamily::intersect_count() const {
  return static_cast<int>((mask.array() > 0.5).count());
}

FollowerUtility InspectionFamily::member(double alpha, double beta) const {
  return (mask.array() > 0.5).select(Matrix::Constant(mask.rows(), mask.cols(), alpha),
                                     Matrix::Constant(mask.rows(), mask.cols(), beta));
}

GameInstance::GameInstance(Matrix u_l, FollowerUniverse universe,
                           std::optional<Distribution> nominal)
    : u_l_(std::move(u_l)), universe_(std::move(universe)), nominal_(std::move(nominal)) {
  check_unit_entries(u_l_, "leader payoff matrix");
  if (auto* f = std::get_if<FiniteUniverse>(&universe_)) {
    if (f->utilities.empty()) throw std::invalid_argument("finite universe is empty");
    for (const auto& u : f->utilities) check_utility(u);
    if (!nominal_) nominal_ = Distribution::uniform(f->utilities);
  } else if (auto* ins = std::get_if<InspectionFamily>(&universe_)) {
    if (ins->mask.rows() != n() || ins->mask.cols() != m())
      throw std::invalid_argument("inspection mask shape does not match the game");
  }
  if (nominal_) {
    nominal_->validate();
    for (const auto& u : nominal_->support) check_utility(u);
  }
}

const std::vector<FollowerUtility>& GameInstance::finite_utilities() const {
  if (const auto* f = std::get_if<FiniteUniverse>(&universe_)) return f->utilities;
  throw std::logic_error("game does not have a finite follower universe");
}

const Distribution& GameInstance::require_nominal() const {
  if (!nominal_) throw std::logic_error("game carries no nominal distribution");
  return *nominal_;
}

void GameInstance::check_utility(const FollowerUtility& u_f) const {
  if (u_f.rows() != n() || u_f.cols() != m())
    throw std::invalid_argument("follower utility shape does not match the game");
  check_unit_entries(u_f, "follower utility");
}

void check_mixed_strategy(const MixedStrategy& x, int n) {
  if (x.size() != n) throw std::invalid_argument("mixed strategy has wrong length");
  if (!x.allFinite() || x.minCoeff() < -kSimplexTol || std::abs(x.sum() - 1.0) > kSimplexTol)
    throw std::invalid_argument("mixed strategy is not a probability vector");
}

Vector expected_payoffs(const Matrix& u, const MixedStrategy& x) {
  if (x.size() != u.rows()) throw std::invalid_argument("dimension mismatch");
  return u.transpose() * x;
}

Vector follower_expected_payoffs(const GameInstance& g, const FollowerUtility& u_f,
                                 const MixedStrategy& x) {
  if (u_f.rows() != g.n() || u_f.cols() != g.m() || x.size() != g.n())
    throw std::invalid_argument("dimension mismatch");
  return expected_payoffs(u_f, x);
}

std::vector<int> best_response_set(const FollowerUtility& u_f, const MixedStrategy& x,
                                   double tol) {
  const Vector v = expected_payoffs(u_f, x);
  const double best = v.maxCoeff();
  std::vector<int> out;
  for (int a = 0; a < v.size(); ++a)
    if (v[a] >= best - tol) out.push_back(a);
  return out;
}

TieBreak strong_tiebreak(const Matrix& u_l, const FollowerUtility& u_f, const MixedStrategy& x,
                         double tol) {
  if (u_l.rows() != u_f.rows() || u_l.cols() != u_f.cols())
    throw std::invalid_argument("dimension mismatch");
  const Vector leader = expected_payoffs(u_l, x);
  TieBreak best{-1.0, -1};
  for (int a : best_response_set(u_f, x, tol)) {
    if (best.action < 0 || leader[a] > best.payoff + kLeaderTieTol) best = {leader[a], a};
  }
  return best;
}

}  // namespace drstack
