#include "drstack/baselines.hpp"

#include <algorithm>
#include <string>

#include "formulation.hpp"

namespace drstack {

using solver::kInfinity;
using solver::LinearProgram;
using solver::MixedIntegerProgram;
using solver::Relation;
using solver::Sense;
using solver::Term;

namespace {

void check_on_universe(const GameInstance& g, const Distribution& nu) {
  nu.validate();
  const auto& us = g.finite_utilities();
  if (nu.size() != static_cast<int>(us.size()))
    throw std::invalid_argument("distribution must be supported on the finite universe");
  for (std::size_t j = 0; j < us.size(); ++j)
    if ((nu.support[j] - us[j]).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("distribution support differs from the finite universe");
}

}  // namespace

DrsssSolution enumeration_lp_baseline(const GameInstance& g, const WassersteinBall& ball,
                                      const BigMConfig& cfg, const Context& ctx) {
  cfg.validate();
  ball.validate();
  check_on_universe(g, ball.nominal);
  const auto& us = g.finite_utilities();
  const int n = g.n(), m = g.m(), k = static_cast<int>(us.size());
  const Matrix dist = distance_power_table(us, us, ball.metric, ball.t);
  const int lambda = n, w0 = n + 1;

  auto build = [&](const BestResponseMapping& z) {
    LinearProgram lp;
    const int x0 = detail::add_leader_simplex(lp, n);
    lp.add_variable("lambda", 0.0, kInfinity);
    for (int j = 0; j < k; ++j) lp.add_variable("w" + std::to_string(j), -kInfinity, kInfinity);
    for (int i = 0; i < k; ++i)
      for (int a = 0; a < m; ++a) {
        const double off = z[i] == a ? 0.0 : cfg.M;  // M (1 - delta)
        for (int b = 0; b < m; ++b) {
          std::vector<Term> row;
          for (int s = 0; s < n; ++s) {
            const double c = us[i](s, a) - us[i](s, b);
            if (c != 0.0) row.push_back({x0 + s, c});
          }
          lp.add_constraint(row, Relation::greater_equal, -off);
        }
        for (int j = 0; j < k; ++j) {
          auto row = detail::payoff_terms(g.leader(), x0, a, -1.0);
          row.push_back({w0 + j, 1.0});
          if (dist(i, j) != 0.0) row.push_back({lambda, -dist(i, j)});
          lp.add_constraint(row, Relation::less_equal, off);
        }
      }
    std::vector<Term> obj{{lambda, ball.theta_power()}};
    for (int j = 0; j < k; ++j) obj.push_back({w0 + j, -ball.nominal.weights[j]});
    lp.set_objective(Sense::minimize, obj);
    return lp;
  };
  const auto best = detail::enumerate_mappings(
      m, k, ctx, "opt-lp", build, [](const solver::SolveOutcome& r) { return -r.objective; });
  if (best.limit_hit) return detail::limit_hit_solution(best.solver_time_s, "time limit");
  if (best.index < 0) throw solver::NumericalFailure("no best-response mapping is feasible");

  DrsssSolution s;
  s.x = detail::extract_strategy(best.outcome.values, 0, n);
  s.value = best.value;
  s.mapping = detail::decode_mapping(best.index, m, k);
  s.lambda = std::max(0.0, best.outcome.values[lambda]);
  s.w = std::vector<double>(best.outcome.values.begin() + w0,
                            best.outcome.values.begin() + w0 + k);
  s.solver_time_s = best.solver_time_s;
  s.iterations = best.solved;
  detail::verify_mapping(us, s.x, s.mapping, detail::kMappingTol);
  return s;
}

DrsssSolution bayesian_mip(const GameInstance& g, const Distribution& nu, const BigMConfig& cfg,
                           const Context& ctx) {
  cfg.validate();
  check_on_universe(g, nu);
  const auto& us = g.finite_utilities();
  const int n = g.n(), m = g.m(), k = static_cast<int>(us.size());

  MixedIntegerProgram mip;
  const int x0 = detail::add_leader_simplex(mip, n);
  const int w0 = mip.num_variables();
  for (int j = 0; j < k; ++j) mip.add_variable("w" + std::to_string(j), -kInfinity, kInfinity);
  std::vector<std::vector<int>> delta(k, std::vector<int>(m));
  for (int j = 0; j < k; ++j)
    for (int a = 0; a < m; ++a)
      delta[j][a] = mip.add_binary("d_" + std::to_string(j) + "_" + std::to_string(a));
  std::vector<Term> obj;
  for (int j = 0; j < k; ++j) {
    detail::add_bigm_br_rows(mip, us[j], x0, delta[j], cfg.M, true);
    std::vector<Term> onehot;
    for (int a = 0; a < m; ++a) {
      auto row = detail::payoff_terms(g.leader(), x0, a, -1.0);
      row.push_back({w0 + j, 1.0});
      row.push_back({delta[j][a], cfg.M});
      mip.add_constraint(row, Relation::less_equal, cfg.M);
      onehot.push_back({delta[j][a], 1.0});
    }
    mip.add_constraint(onehot, Relation::equal, 1.0);
    obj.push_back({w0 + j, nu.weights[j]});
  }
  mip.set_objective(Sense::maximize, obj);
  ctx.dump(mip, "bayesian-mip");

  const auto r = ctx.solver().solve_milp(mip, ctx.options());
  if (r.status == solver::Status::limit_hit)
    return detail::limit_hit_solution(r.wall_time_s, "time limit");
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("Bayesian MIP: ") + solver::to_string(r.status));
  DrsssSolution s;
  s.x = detail::extract_strategy(r.values, x0, n);
  s.value = r.objective;
  for (int j = 0; j < k; ++j) s.mapping.push_back(detail::selected_action(r.values, delta[j]));
  s.w = std::vector<double>(r.values.begin() + w0, r.values.begin() + w0 + k);
  s.solver_time_s = r.wall_time_s;
  s.iterations = 1;
  detail::verify_mapping(us, s.x, s.mapping, detail::kMappingTol);
  return s;
}

DrsssSolution sse_multiple_lps(const Matrix& u_l, const FollowerUtility& u_f, const Context& ctx) {
  const int n = static_cast<int>(u_l.rows()), m = static_cast<int>(u_l.cols());
  DrsssSolution best;
  best.mapping = {-1};
  for (int a = 0; a < m; ++a) {
    LinearProgram lp;
    const int x0 = detail::add_leader_simplex(lp, n);
    detail::add_fixed_br_rows(lp, u_f, x0, a);
    lp.set_objective(Sense::maximize, detail::payoff_terms(u_l, x0, a));
    ctx.dump(lp, "sse-lp");
    const auto r = ctx.solver().solve_lp(lp, ctx.options());
    best.solver_time_s += r.wall_time_s;
    ++best.iterations;
    if (!r.optimal()) continue;
    if (best.mapping[0] < 0 || r.objective > best.value + 1e-12) {
      best.value = r.objective;
      best.mapping = {a};
      best.x = detail::extract_strategy(r.values, x0, n);
    }
  }
  if (best.mapping[0] < 0) throw solver::NumericalFailure("no follower action is inducible");
  return best;
}

}  // namespace drstack
