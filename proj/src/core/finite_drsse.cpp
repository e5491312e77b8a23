#include "drstack/finite_drsse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "formulation.hpp"

namespace drstack {

using solver::kInfinity;
using solver::LinearProgram;
using solver::MixedIntegerProgram;
using solver::Relation;
using solver::Sense;
using solver::Term;

const char* to_string(SolutionStatus s) {
  switch (s) {
    case SolutionStatus::optimal: return "optimal";
    case SolutionStatus::unconverged: return "unconverged";
    case SolutionStatus::limit_hit: return "limit_hit";
  }
  return "unknown";
}

void BigMConfig::validate() const {
  if (!(M > 0.0)) throw std::invalid_argument("big-M constant must be positive");
  if (!(epsilon_strict > 0.0)) throw std::invalid_argument("epsilon gap must be positive");
}

namespace {

// Follower utilities the mapping ranges over, plus the pieces of the inner
// problem that do not depend on the mapping.
struct InnerModel {
  std::vector<FollowerUtility> utilities;
  const PolytopeAmbiguity* poly = nullptr;
  const WassersteinBall* ball = nullptr;
  Matrix dist;  // d^t(utility i, nominal j), Wasserstein only
};

InnerModel inner_model(const GameInstance& g, const AmbiguitySpec& amb) {
  InnerModel im;
  if (const auto* p = std::get_if<PolytopeAmbiguity>(&amb)) {
    im.poly = p;
    im.utilities = p->support;
    for (const auto& u : im.utilities) g.check_utility(u);
  } else {
    const auto& ball = std::get<WassersteinBall>(amb);
    ball.validate();
    im.ball = &ball;
    im.utilities = g.finite_utilities();
    im.dist = distance_power_table(im.utilities, ball.nominal.support, ball.metric, ball.t);
  }
  return im;
}

// Adds the dual of the inner infimum, with q_i supplied as terms in x (and
// possibly other variables) through `q_terms(i)`. Returns the objective
// terms of the dual, to be maximised.
template <class QTerms>
std::vector<Term> add_inner_dual(LinearProgram& lp, const InnerModel& im, QTerms&& q_terms) {
  const int k = static_cast<int>(im.utilities.size());
  std::vector<Term> obj;
  if (im.poly) {
    const int y0 = lp.num_variables();
    for (Eigen::Index r = 0; r < im.poly->a.rows(); ++r) {
      lp.add_variable("y" + std::to_string(r), -kInfinity, 0.0);
      if (im.poly->b[r] != 0.0) obj.push_back({y0 + static_cast<int>(r), im.poly->b[r]});
    }
    const int z0 = lp.add_variable("z0", -kInfinity, kInfinity);
    obj.push_back({z0, 1.0});
    for (int i = 0; i < k; ++i) {
      std::vector<Term> row;
      for (Eigen::Index r = 0; r < im.poly->a.rows(); ++r)
        if (im.poly->a(r, i) != 0.0) row.push_back({y0 + static_cast<int>(r), im.poly->a(r, i)});
      row.push_back({z0, 1.0});
      for (const auto& t : q_terms(i)) row.push_back({t.var, -t.coef});
      lp.add_constraint(row, Relation::less_equal, 0.0);
    }
    return obj;
  }
  const auto& ball = *im.ball;
  const int kn = ball.nominal.size();
  const int lambda = lp.add_variable("lambda", 0.0, kInfinity);
  obj.push_back({lambda, -ball.theta_power()});
  const int w0 = lp.num_variables();
  for (int j = 0; j < kn; ++j) {
    lp.add_variable("w" + std::to_string(j), -kInfinity, kInfinity);
    obj.push_back({w0 + j, ball.nominal.weights[j]});
  }
  for (int i = 0; i < k; ++i) {
    const auto q = q_terms(i);
    for (int j = 0; j < kn; ++j) {
      std::vector<Term> row{{w0 + j, 1.0}};
      if (im.dist(i, j) != 0.0) row.push_back({lambda, -im.dist(i, j)});
      for (const auto& t : q) row.push_back({t.var, -t.coef});
      lp.add_constraint(row, Relation::less_equal, 0.0);
    }
  }
  return obj;
}

void fill_wasserstein_fields(DrsssSolution& s, const LinearProgram& lp,
                             const std::vector<double>& values, int k) {
  const auto& vars = lp.variables();
  std::vector<double> w;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (vars[j].name == "lambda") s.lambda = std::max(0.0, values[j]);
    if (vars[j].name.size() > 1 && vars[j].name[0] == 'w' &&
        vars[j].name.find_first_not_of("0123456789", 1) == std::string::npos)
      w.push_back(values[j]);
  }
  if (static_cast<int>(w.size()) == k) s.w = std::move(w);
}

}  // namespace

DrsssSolution solve_by_enumeration(const GameInstance& g, const AmbiguitySpec& amb,
                                   const Context& ctx) {
  if (!g.is_finite()) throw UnsupportedUniverse("enumeration needs a finite follower universe");
  const InnerModel im = inner_model(g, amb);
  const int n = g.n(), m = g.m(), k = static_cast<int>(im.utilities.size());

  auto build = [&](const BestResponseMapping& z) {
    LinearProgram lp;
    const int x0 = detail::add_leader_simplex(lp, n);
    for (int i = 0; i < k; ++i) detail::add_fixed_br_rows(lp, im.utilities[i], x0, z[i]);
    const auto obj = add_inner_dual(
        lp, im, [&](int i) { return detail::payoff_terms(g.leader(), x0, z[i]); });
    lp.set_objective(Sense::maximize, obj);
    return lp;
  };
  const auto best = detail::enumerate_mappings(
      m, k, ctx, "enumeration", build, [](const solver::SolveOutcome& r) { return r.objective; });
  if (best.limit_hit) return detail::limit_hit_solution(best.solver_time_s, "time limit");
  if (best.index < 0) throw solver::NumericalFailure("no best-response mapping is feasible");

  DrsssSolution s;
  s.x = detail::extract_strategy(best.outcome.values, 0, n);
  s.value = best.value;
  s.mapping = detail::decode_mapping(best.index, m, k);
  s.solver_time_s = best.solver_time_s;
  s.iterations = best.solved;
  if (im.ball) {
    const LinearProgram lp = build(s.mapping);
    fill_wasserstein_fields(s, lp, best.outcome.values, im.ball->nominal.size());
  }
  detail::verify_mapping(im.utilities, s.x, s.mapping, detail::kMappingTol);
  return s;
}

DrsssSolution solve_by_mip(const GameInstance& g, const AmbiguitySpec& amb,
                           const BigMConfig& cfg, const Context& ctx) {
  cfg.validate();
  if (!g.is_finite()) throw UnsupportedUniverse("the big-M MIP needs a finite follower universe");
  const InnerModel im = inner_model(g, amb);
  const int n = g.n(), m = g.m(), k = static_cast<int>(im.utilities.size());

  MixedIntegerProgram mip;
  const int x0 = detail::add_leader_simplex(mip, n);
  std::vector<std::vector<int>> delta(k, std::vector<int>(m));
  std::vector<int> q(k);
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < m; ++a)
      delta[i][a] = mip.add_binary("d_" + std::to_string(i) + "_" + std::to_string(a));
    q[i] = mip.add_variable("q" + std::to_string(i), -kInfinity, kInfinity);
  }
  for (int i = 0; i < k; ++i) {
    detail::add_bigm_br_rows(mip, im.utilities[i], x0, delta[i], cfg.M, false);
    std::vector<Term> onehot;
    for (int a = 0; a < m; ++a) {
      // q_i <= u_l(x,a) + M (1 - delta)
      auto row = detail::payoff_terms(g.leader(), x0, a, -1.0);
      row.push_back({q[i], 1.0});
      row.push_back({delta[i][a], cfg.M});
      mip.add_constraint(row, Relation::less_equal, cfg.M);
      onehot.push_back({delta[i][a], 1.0});
    }
    mip.add_constraint(onehot, Relation::equal, 1.0);
  }
  const auto obj = add_inner_dual(mip, im, [&](int i) { return std::vector<Term>{{q[i], 1.0}}; });
  mip.set_objective(Sense::maximize, obj);
  ctx.dump(mip, "bigm-mip");

  const auto r = ctx.solver().solve_milp(mip, ctx.options());
  if (r.status == solver::Status::limit_hit)
    return detail::limit_hit_solution(r.wall_time_s, "time limit");
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("big-M MIP: ") + solver::to_string(r.status));

  DrsssSolution s;
  s.x = detail::extract_strategy(r.values, x0, n);
  s.value = r.objective;
  for (int i = 0; i < k; ++i) s.mapping.push_back(detail::selected_action(r.values, delta[i]));
  s.solver_time_s = r.wall_time_s;
  s.iterations = 1;
  if (im.ball) fill_wasserstein_fields(s, mip, r.values, im.ball->nominal.size());
  detail::verify_mapping(im.utilities, s.x, s.mapping, detail::kMappingTol);
  return s;
}

namespace {

void check_nominal_on_universe(const GameInstance& g, const WassersteinBall& ball) {
  const auto& us = g.finite_utilities();
  if (ball.nominal.size() != static_cast<int>(us.size()))
    throw std::invalid_argument("nominal must be supported on the finite universe");
  for (std::size_t j = 0; j < us.size(); ++j)
    if ((ball.nominal.support[j] - us[j]).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("nominal support differs from the finite universe");
}

struct FiniteMip {
  MixedIntegerProgram mip;
  int x0, lambda, w0;
  std::vector<std::vector<int>> delta;
};

FiniteMip build_finite_mip(const GameInstance& g, const WassersteinBall& ball,
                           const BigMConfig& cfg) {
  const auto& us = g.finite_utilities();
  const int n = g.n(), m = g.m(), k = static_cast<int>(us.size());
  const Matrix dist = distance_power_table(us, us, ball.metric, ball.t);
  FiniteMip f;
  auto& mip = f.mip;
  f.x0 = detail::add_leader_simplex(mip, n);
  f.lambda = mip.add_variable("lambda", 0.0, kInfinity);
  f.w0 = mip.num_variables();
  for (int j = 0; j < k; ++j) mip.add_variable("w" + std::to_string(j), -kInfinity, kInfinity);
  f.delta.assign(k, std::vector<int>(m));
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < m; ++a)
      f.delta[i][a] = mip.add_binary("d_" + std::to_string(i) + "_" + std::to_string(a));

  for (int i = 0; i < k; ++i) detail::add_bigm_br_rows(mip, us[i], f.x0, f.delta[i], cfg.M, true);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < k; ++j) {
        // w_j <= (1 - delta) M + lambda d^t(u_i, u_j) + u_l(x, a)
        auto row = detail::payoff_terms(g.leader(), f.x0, a, -1.0);
        row.push_back({f.w0 + j, 1.0});
        if (dist(i, j) != 0.0) row.push_back({f.lambda, -dist(i, j)});
        row.push_back({f.delta[i][a], cfg.M});
        mip.add_constraint(row, Relation::less_equal, cfg.M);
      }
  for (int i = 0; i < k; ++i) {
    std::vector<Term> onehot;
    for (int a = 0; a < m; ++a) onehot.push_back({f.delta[i][a], 1.0});
    mip.add_constraint(onehot, Relation::equal, 1.0);
  }
  std::vector<Term> obj{{f.lambda, ball.theta_power()}};
  for (int j = 0; j < k; ++j) obj.push_back({f.w0 + j, -ball.nominal.weights[j]});
  mip.set_objective(Sense::minimize, obj);

  if (mip.num_continuous() != n + k + 1 || mip.num_binaries() != m * k)
    throw std::logic_error("finite Wasserstein MIP has unexpected size");
  return f;
}

}  // namespace

MipShape wasserstein_finite_mip_shape(const GameInstance& g, const WassersteinBall& ball,
                                      const BigMConfig& cfg) {
  check_nominal_on_universe(g, ball);
  const auto f = build_finite_mip(g, ball, cfg);
  return {f.mip.num_continuous(), f.mip.num_binaries(), f.mip.num_constraints()};
}

DrsssSolution solve_wasserstein_finite_mip(const GameInstance& g, const WassersteinBall& ball,
                                           const BigMConfig& cfg, const Context& ctx) {
  cfg.validate();
  ball.validate();
  check_nominal_on_universe(g, ball);
  const auto f = build_finite_mip(g, ball, cfg);
  ctx.dump(f.mip, "wasserstein-finite-mip");

  const auto r = ctx.solver().solve_milp(f.mip, ctx.options());
  if (r.status == solver::Status::limit_hit)
    return detail::limit_hit_solution(r.wall_time_s, "time limit");
  if (!r.optimal())
    throw solver::NumericalFailure(std::string("Wasserstein MIP: ") +
                                   solver::to_string(r.status));
  const auto& us = g.finite_utilities();
  const int k = static_cast<int>(us.size());
  DrsssSolution s;
  s.x = detail::extract_strategy(r.values, f.x0, g.n());
  s.value = -r.objective;
  for (int i = 0; i < k; ++i) s.mapping.push_back(detail::selected_action(r.values, f.delta[i]));
  s.lambda = std::max(0.0, r.values[f.lambda]);
  s.w = std::vector<double>(r.values.begin() + f.w0, r.values.begin() + f.w0 + k);
  s.solver_time_s = r.wall_time_s;
  s.iterations = 1;
  detail::verify_mapping(us, s.x, s.mapping, detail::kMappingTol);
  return s;
}

}  // namespace drstack
