#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drstack/wasserstein_drsse.hpp"

namespace drstack {

using solver::LinearProgram;
using solver::QuadraticProgram;
using solver::Relation;
using solver::Sense;
using solver::Term;

namespace {

// Below this multiplier the distance term is dropped and the inner problem
// becomes a feasibility LP.
constexpr double kZeroLambda = 1e-14;

}  // namespace

std::vector<char> leader_better_actions(const Matrix& u_l, const MixedStrategy& x, int a,
                                        double tol) {
  const Vector v = expected_payoffs(u_l, x);
  std::vector<char> better(v.size(), 0);
  for (int b = 0; b < v.size(); ++b) better[b] = v[b] > v[a] + tol ? 1 : 0;
  return better;
}

OracleResult SeparationOracle::separate(const SeparationQuery& q, const Context& ctx) const {
  const Matrix& u_l = q.game->leader();
  const Vector leader = expected_payoffs(u_l, q.x);
  OracleResult best;
  best.gamma = std::numeric_limits<double>::infinity();
  for (int a = 0; a < q.game->m(); ++a) {
    const auto better = leader_better_actions(u_l, q.x, a);
    auto c = inner(q, a, better, ctx);
    if (!c) continue;
    best.solver_time_s += c->solver_time_s;
    const double gamma = c->distance_term + leader[a];
    if (gamma < best.gamma) {
      best.gamma = gamma;
      best.violator = std::move(c->violator);
      best.action = a;
    }
  }
  if (best.action < 0)
    throw solver::NumericalFailure(std::string(name()) + ": every action region is empty");
  return best;
}

bool BoxFrobeniusOracle::supports(const GameInstance& g, const WassersteinBall& ball) const {
  if (ball.t != 2.0 || ball.metric != GroundMetric::frobenius) return false;
  if (mask_) return mask_->rows() == g.n() && mask_->cols() == g.m();
  return true;
}

std::optional<SeparationOracle::Candidate> BoxFrobeniusOracle::inner(
    const SeparationQuery& q, int a, const std::vector<char>& better, const Context& ctx) const {
  const int n = q.game->n(), m = q.game->m();
  const Matrix& hat = *q.nominal;
  auto var = [m](int s, int b) { return s * m + b; };

  QuadraticProgram p;
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < m; ++b)
      p.add_variable("u_" + std::to_string(s) + "_" + std::to_string(b), 0.0, 1.0);
  if (mask_) {
    int first_in = -1, first_out = -1;
    for (int s = 0; s < n; ++s)
      for (int b = 0; b < m; ++b) {
        int& anchor = (*mask_)(s, b) > 0.5 ? first_in : first_out;
        if (anchor < 0)
          anchor = var(s, b);
        else
          p.add_constraint({{var(s, b), 1.0}, {anchor, -1.0}}, Relation::equal, 0.0);
      }
  }
  for (int b = 0; b < m; ++b) {
    if (b == a) continue;
    std::vector<Term> row;
    for (int s = 0; s < n; ++s) {
      if (q.x[s] == 0.0) continue;
      row.push_back({var(s, a), q.x[s]});
      row.push_back({var(s, b), -q.x[s]});
    }
    const double rhs = better[b] ? q.epsilon_strict : 0.0;
    if (row.empty()) {
      if (rhs > 0) return std::nullopt;
      continue;
    }
    p.add_constraint(row, Relation::greater_equal, rhs);
  }

  const bool lp_only = q.lambda <= kZeroLambda;
  std::vector<Term> lin;
  double offset = 0.0;
  if (!lp_only) {
    for (int s = 0; s < n; ++s)
      for (int b = 0; b < m; ++b) {
        lin.push_back({var(s, b), -2.0 * q.lambda * hat(s, b)});
        p.add_quadratic(var(s, b), var(s, b), 2.0 * q.lambda);
        offset += q.lambda * hat(s, b) * hat(s, b);
      }
  }
  p.set_objective(Sense::minimize, lin, offset);
  ctx.dump(p, "box-oracle", p.quadratic());

  const auto r = lp_only ? ctx.solver().solve_lp(p, ctx.options())
                         : ctx.solver().solve_qp(p, ctx.options());
  if (r.status == solver::Status::infeasible) return std::nullopt;
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("box oracle: ") + solver::to_string(r.status));
  Candidate c;
  c.violator = Matrix(n, m);
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < m; ++b) c.violator(s, b) = std::clamp(r.values[var(s, b)], 0.0, 1.0);
  c.distance_term = lp_only ? 0.0 : std::max(r.objective, 0.0);
  c.solver_time_s = r.wall_time_s;
  return c;
}

bool InspectionOracle::supports(const GameInstance& g, const WassersteinBall& ball) const {
  return std::holds_alternative<InspectionFamily>(g.universe()) && ball.t == 2.0 &&
         ball.metric == GroundMetric::frobenius;
}

std::optional<SeparationOracle::Candidate> InspectionOracle::inner(
    const SeparationQuery& q, int a, const std::vector<char>& better, const Context& ctx) const {
  const auto& family = std::get<InspectionFamily>(q.game->universe());
  const Matrix& mask = family.mask;
  const Matrix& hat = *q.nominal;
  const int n = q.game->n(), m = q.game->m();
  const int c = family.intersect_count();
  const int rest = n * m - c;

  // Nominal split into its per-role means plus the constant within-role
  // spread, so that c(alpha - a_hat)^2 + rest (beta - b_hat)^2 + spread
  // equals the squared Frobenius distance for any nominal matrix.
  double sum_in = 0.0, sum_out = 0.0;
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < m; ++b) (mask(s, b) > 0.5 ? sum_in : sum_out) += hat(s, b);
  const double a_hat = c > 0 ? sum_in / c : 0.0;
  const double b_hat = rest > 0 ? sum_out / rest : 0.0;
  double spread = 0.0;
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < m; ++b) {
      const double mean = mask(s, b) > 0.5 ? a_hat : b_hat;
      spread += (hat(s, b) - mean) * (hat(s, b) - mean);
    }

  QuadraticProgram p;
  const int alpha = p.add_variable("alpha", 0.0, 1.0);
  const int beta = p.add_variable("beta", 0.0, 1.0);
  for (int b = 0; b < m; ++b) {
    if (b == a) continue;
    double d = 0.0;
    for (int s = 0; s < n; ++s) d += q.x[s] * (mask(s, a) - mask(s, b));
    const double rhs = better[b] ? q.epsilon_strict : 0.0;
    if (std::abs(d) <= 1e-15) {
      if (rhs > 0) return std::nullopt;
      continue;
    }
    p.add_constraint({{alpha, d}, {beta, -d}}, Relation::greater_equal, rhs);
  }
  const bool lp_only = q.lambda <= kZeroLambda;
  if (lp_only) {
    p.set_objective(Sense::minimize, {});
  } else {
    const double l = q.lambda;
    p.add_quadratic(alpha, alpha, 2.0 * l * c);
    p.add_quadratic(beta, beta, 2.0 * l * rest);
    p.set_objective(Sense::minimize,
                    {{alpha, -2.0 * l * c * a_hat}, {beta, -2.0 * l * rest * b_hat}},
                    l * (c * a_hat * a_hat + rest * b_hat * b_hat + spread));
  }
  ctx.dump(p, "inspection-oracle", p.quadratic());
  const auto r = lp_only ? ctx.solver().solve_lp(p, ctx.options())
                         : ctx.solver().solve_qp(p, ctx.options());
  if (r.status == solver::Status::infeasible) return std::nullopt;
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("inspection oracle: ") +
                                   solver::to_string(r.status));
  Candidate cand;
  cand.violator = family.member(std::clamp(r.values[alpha], 0.0, 1.0),
                                std::clamp(r.values[beta], 0.0, 1.0));
  cand.distance_term = lp_only ? 0.0 : std::max(r.objective, 0.0);
  cand.solver_time_s = r.wall_time_s;
  return cand;
}

bool FiniteSupportOracle::supports(const GameInstance& g, const WassersteinBall&) const {
  return g.is_finite();
}

OracleResult FiniteSupportOracle::separate(const SeparationQuery& q, const Context&) const {
  const auto& us = q.game->finite_utilities();
  OracleResult best;
  best.gamma = std::numeric_limits<double>::infinity();
  for (const auto& u : us) {
    const double d = ground_distance(q.metric, u, *q.nominal);
    const double dt = q.t == 2.0 ? d * d : std::pow(d, q.t);
    const auto tb = strong_tiebreak(q.game->leader(), u, q.x, q.epsilon_strict);
    const double gamma = q.lambda * dt + tb.payoff;
    if (gamma < best.gamma) {
      best.gamma = gamma;
      best.violator = u;
      best.action = tb.action;
    }
  }
  return best;
}

std::shared_ptr<const SeparationOracle> default_oracle(const GameInstance& g) {
  if (g.is_finite()) return std::make_shared<FiniteSupportOracle>();
  if (std::holds_alternative<InspectionFamily>(g.universe()))
    return std::make_shared<InspectionOracle>();
  return std::make_shared<BoxFrobeniusOracle>();
}

}  // namespace drstack
