#include "drstack/ambiguity.hpp"

#include <cmath>
#include <string>

namespace drstack {

using solver::kInfinity;
using solver::LinearProgram;
using solver::Relation;
using solver::Sense;
using solver::Term;

double ground_distance(GroundMetric metric, const FollowerUtility& a, const FollowerUtility& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("dimension mismatch");
  switch (metric) {
    case GroundMetric::frobenius: return (a - b).norm();
  }
  throw std::invalid_argument("unknown ground metric");
}

Matrix distance_power_table(const std::vector<FollowerUtility>& from,
                            const std::vector<FollowerUtility>& to, GroundMetric metric,
                            double t) {
  Matrix d(from.size(), to.size());
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = 0; j < to.size(); ++j) {
      const double dist = ground_distance(metric, from[i], to[j]);
      d(i, j) = t == 2.0 ? dist * dist : std::pow(dist, t);
    }
  return d;
}

PolytopeAmbiguity PolytopeAmbiguity::create(std::vector<FollowerUtility> support, Matrix a,
                                            Vector b, const Context& ctx) {
  if (support.empty()) throw std::invalid_argument("polytope support is empty");
  if (a.cols() != static_cast<Eigen::Index>(support.size()) || a.rows() != b.size())
    throw std::invalid_argument("polytope constraint shapes do not match the support");
  PolytopeAmbiguity p{std::move(support), std::move(a), std::move(b)};
  const std::vector<double> zero(p.size(), 0.0);
  worstcase_expectation(p, zero, ctx);  // throws when empty
  return p;
}

PolytopeAmbiguity PolytopeAmbiguity::full_simplex(std::vector<FollowerUtility> support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  return {std::move(support), Matrix(0, k), Vector(0)};
}

PolytopeAmbiguity PolytopeAmbiguity::singleton(std::vector<FollowerUtility> support,
                                               const std::vector<double>& weights) {
  const auto k = static_cast<Eigen::Index>(support.size());
  if (static_cast<Eigen::Index>(weights.size()) != k)
    throw std::invalid_argument("weights and support differ in length");
  Matrix a(2 * k, k);
  a << Matrix::Identity(k, k), -Matrix::Identity(k, k);
  Vector b(2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    b[i] = weights[i];
    b[k + i] = -weights[i];
  }
  return {std::move(support), std::move(a), std::move(b)};
}

void WassersteinBall::validate() const {
  nominal.validate();
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("Wasserstein radius must be finite and non-negative");
  if (!(t >= 1.0)) throw std::invalid_argument("Wasserstein exponent must be at least 1");
}

double WassersteinBall::theta_power() const { return std::pow(theta, t); }

TransportResult wasserstein_primal(const Distribution& mu, const Distribution& nu, double t,
                                   GroundMetric metric, const Context& ctx) {
  mu.validate();
  nu.validate();
  const int k1 = mu.size(), k2 = nu.size();
  const Matrix d = distance_power_table(mu.support, nu.support, metric, t);
  LinearProgram lp;
  std::vector<Term> obj;
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) {
      const int v = lp.add_variable("g_" + std::to_string(i) + "_" + std::to_string(j));
      obj.push_back({v, d(i, j)});
    }
  for (int i = 0; i < k1; ++i) {
    std::vector<Term> row;
    for (int j = 0; j < k2; ++j) row.push_back({i * k2 + j, 1.0});
    lp.add_constraint(row, Relation::equal, mu.weights[i]);
  }
  for (int j = 0; j < k2; ++j) {
    std::vector<Term> row;
    for (int i = 0; i < k1; ++i) row.push_back({i * k2 + j, 1.0});
    lp.add_constraint(row, Relation::equal, nu.weights[j]);
  }
  lp.set_objective(Sense::minimize, obj);
  ctx.dump(lp, "transport-primal");
  const auto r = ctx.solver().solve_lp(lp, ctx.options());
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("transport LP: ") + solver::to_string(r.status));
  Matrix plan(k1, k2);
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) plan(i, j) = r.values[i * k2 + j];
  return {std::pow(std::max(r.objective, 0.0), 1.0 / t), plan};
}

double wasserstein_dual(const Distribution& mu, const Distribution& nu, double t,
                        GroundMetric metric, const Context& ctx) {
  mu.validate();
  nu.validate();
  const int k1 = mu.size(), k2 = nu.size();
  const Matrix d = distance_power_table(mu.support, nu.support, metric, t);
  LinearProgram lp;
  std::vector<Term> obj;
  for (int i = 0; i < k1; ++i) {
    lp.add_variable("r" + std::to_string(i), -kInfinity, kInfinity);
    obj.push_back({i, mu.weights[i]});
  }
  for (int j = 0; j < k2; ++j) {
    lp.add_variable("s" + std::to_string(j), -kInfinity, kInfinity);
    obj.push_back({k1 + j, nu.weights[j]});
  }
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j)
      lp.add_constraint({{i, 1.0}, {k1 + j, 1.0}}, Relation::less_equal, d(i, j));
  lp.set_objective(Sense::maximize, obj);
  ctx.dump(lp, "transport-dual");
  const auto r = ctx.solver().solve_lp(lp, ctx.options());
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("transport dual LP: ") +
                                   solver::to_string(r.status));
  return r.objective;
}

WorstCase worstcase_expectation(const PolytopeAmbiguity& poly, const std::vector<double>& h,
                                const Context& ctx) {
  const int k = poly.size();
  if (static_cast<int>(h.size()) != k)
    throw std::invalid_argument("value vector does not match the polytope support");
  LinearProgram lp;
  std::vector<Term> obj, simplex;
  for (int i = 0; i < k; ++i) {
    lp.add_variable("mu" + std::to_string(i));
    obj.push_back({i, h[i]});
    simplex.push_back({i, 1.0});
  }
  lp.add_constraint(simplex, Relation::equal, 1.0);
  for (Eigen::Index r = 0; r < poly.a.rows(); ++r) {
    std::vector<Term> row;
    for (int i = 0; i < k; ++i)
      if (poly.a(r, i) != 0.0) row.push_back({i, poly.a(r, i)});
    lp.add_constraint(row, Relation::less_equal, poly.b[r]);
  }
  lp.set_objective(Sense::minimize, obj);
  ctx.dump(lp, "polytope-worstcase");
  const auto r = ctx.solver().solve_lp(lp, ctx.options());
  if (r.status == solver::Status::infeasible)
    throw std::invalid_argument("polytope ambiguity set is empty");
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("worst-case LP: ") + solver::to_string(r.status));
  return {r.objective, r.values};
}

WorstCase worstcase_expectation(const WassersteinBall& ball,
                                const std::vector<FollowerUtility>& candidates,
                                const std::vector<double>& h, const Context& ctx) {
  ball.validate();
  const int kc = static_cast<int>(candidates.size());
  const int k = ball.nominal.size();
  if (static_cast<int>(h.size()) != kc)
    throw std::invalid_argument("value vector does not match the candidates");
  const Matrix d = distance_power_table(candidates, ball.nominal.support, ball.metric, ball.t);
  LinearProgram lp;
  std::vector<Term> obj, budget;
  for (int i = 0; i < kc; ++i)
    for (int j = 0; j < k; ++j) {
      const int v = lp.add_variable("g_" + std::to_string(i) + "_" + std::to_string(j));
      obj.push_back({v, h[i]});
      if (d(i, j) != 0.0) budget.push_back({v, d(i, j)});
    }
  for (int j = 0; j < k; ++j) {
    std::vector<Term> row;
    for (int i = 0; i < kc; ++i) row.push_back({i * k + j, 1.0});
    lp.add_constraint(row, Relation::equal, ball.nominal.weights[j]);
  }
  if (!budget.empty()) lp.add_constraint(budget, Relation::less_equal, ball.theta_power());
  lp.set_objective(Sense::minimize, obj);
  ctx.dump(lp, "wasserstein-worstcase");
  const auto r = ctx.solver().solve_lp(lp, ctx.options());
  if (r.status == solver::Status::infeasible)
    throw std::invalid_argument(
        "no candidate distribution lies in the ball (nominal support outside the candidates)");
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("worst-case LP: ") + solver::to_string(r.status));
  std::vector<double> mu(kc, 0.0);
  for (int i = 0; i < kc; ++i)
    for (int j = 0; j < k; ++j) mu[i] += r.values[i * k + j];
  return {r.objective, mu};
}

WorstCase worstcase_expectation(const AmbiguitySpec& amb, const std::vector<double>& h,
                                const Context& ctx) {
  if (const auto* p = std::get_if<PolytopeAmbiguity>(&amb))
    return worstcase_expectation(*p, h, ctx);
  const auto& ball = std::get<WassersteinBall>(amb);
  return worstcase_expectation(ball, ball.nominal.support, h, ctx);
}

double leader_worstcase_value(const GameInstance& g, const AmbiguitySpec& amb,
                              const MixedStrategy& x, double tol, const Context& ctx) {
  check_mixed_strategy(x, g.n());
  auto values = [&](const std::vector<FollowerUtility>& us) {
    std::vector<double> h;
    for (const auto& u : us) h.push_back(strong_tiebreak(g.leader(), u, x, tol).payoff);
    return h;
  };
  if (const auto* p = std::get_if<PolytopeAmbiguity>(&amb))
    return worstcase_expectation(*p, values(p->support), ctx).value;
  if (!g.is_finite())
    throw UnsupportedUniverse(
        "pointwise worst-case evaluation needs a finite follower universe; use run_algorithm1");
  const auto& ball = std::get<WassersteinBall>(amb);
  const auto& us = g.finite_utilities();
  return worstcase_expectation(ball, us, values(us), ctx).value;
}

}  // namespace drstack
