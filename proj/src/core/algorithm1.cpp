#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <string>

#include "drstack/wasserstein_drsse.hpp"
#include "formulation.hpp"

namespace drstack {

using solver::kInfinity;
using solver::Relation;
using solver::Sense;
using solver::Term;

MasterState MasterState::initial(const WassersteinBall& ball) {
  MasterState s;
  for (const auto& u : ball.nominal.support) s.lists.push_back({u});
  return s;
}

int MasterState::total() const {
  int t = 0;
  for (const auto& l : lists) t += static_cast<int>(l.size());
  return t;
}

MasterProgram build_master_mip(const MasterState& state, const GameInstance& g,
                               const WassersteinBall& ball, const BigMConfig& cfg) {
  const int n = g.n(), m = g.m(), k = ball.nominal.size();
  if (static_cast<int>(state.lists.size()) != k)
    throw std::invalid_argument("master state does not match the nominal");
  MasterProgram mp;
  auto& mip = mp.mip;
  mp.x0 = detail::add_leader_simplex(mip, n);
  mp.lambda = mip.add_variable("lambda", 0.0, kInfinity);
  mp.w0 = mip.num_variables();
  for (int j = 0; j < k; ++j) mip.add_variable("w" + std::to_string(j), -kInfinity, kInfinity);

  const int rows_before = mip.num_constraints();
  mp.delta.resize(k);
  for (int j = 0; j < k; ++j) {
    const auto& list = state.lists[j];
    mp.delta[j].resize(list.size());
    for (std::size_t e = 0; e < list.size(); ++e) {
      auto& d = mp.delta[j][e];
      for (int a = 0; a < m; ++a)
        d.push_back(mip.add_binary("d_" + std::to_string(j) + "_" + std::to_string(e) + "_" +
                                   std::to_string(a)));
    }
  }
  for (int j = 0; j < k; ++j)
    for (std::size_t e = 0; e < state.lists[j].size(); ++e) {
      const int before = mip.num_constraints();
      detail::add_bigm_br_rows(mip, state.lists[j][e], mp.x0, mp.delta[j][e], cfg.M, true);
      mp.br_rows += mip.num_constraints() - before;
    }
  for (int j = 0; j < k; ++j) {
    const auto& list = state.lists[j];
    for (std::size_t e = 0; e < list.size(); ++e) {
      const double d = ground_distance(ball.metric, list[e], ball.nominal.support[j]);
      const double dt = ball.t == 2.0 ? d * d : std::pow(d, ball.t);
      for (int a = 0; a < m; ++a) {
        // w_j <= (1 - delta) M + lambda d^t(u, u_hat_j) + u_l(x, a)
        auto row = detail::payoff_terms(g.leader(), mp.x0, a, -1.0);
        row.push_back({mp.w0 + j, 1.0});
        if (dt != 0.0) row.push_back({mp.lambda, -dt});
        row.push_back({mp.delta[j][e][a], cfg.M});
        mip.add_constraint(row, Relation::less_equal, cfg.M);
        ++mp.value_rows;
      }
    }
  }
  for (int j = 0; j < k; ++j)
    for (const auto& d : mp.delta[j]) {
      std::vector<Term> onehot;
      for (int v : d) onehot.push_back({v, 1.0});
      mip.add_constraint(onehot, Relation::equal, 1.0);
      ++mp.onehot_rows;
    }

  std::vector<Term> obj{{mp.lambda, ball.theta_power()}};
  for (int j = 0; j < k; ++j) obj.push_back({mp.w0 + j, -ball.nominal.weights[j]});
  mip.set_objective(Sense::minimize, obj);

  const int total = state.total();
  if (mp.br_rows != m * m * total || mp.value_rows != m * total || mp.onehot_rows != total ||
      mip.num_constraints() - rows_before != mp.br_rows + mp.value_rows + mp.onehot_rows ||
      mip.num_binaries() != m * total)
    throw std::logic_error("master MIP has unexpected size");
  return mp;
}

OracleResult separate(const SeparationOracle& oracle, const GameInstance& g,
                      const WassersteinBall& ball, const MixedStrategy& x, double lambda, int j,
                      double epsilon_strict, const Context& ctx) {
  SeparationQuery q;
  q.game = &g;
  q.x = x;
  q.lambda = lambda;
  q.nominal = &ball.nominal.support.at(j);
  q.t = ball.t;
  q.metric = ball.metric;
  q.epsilon_strict = epsilon_strict;
  return oracle.separate(q, ctx);
}

namespace {

bool is_duplicate(const std::vector<FollowerUtility>& list, const FollowerUtility& u, double tol) {
  for (const auto& v : list)
    if ((v - u).norm() <= tol) return true;
  return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DrsssSolution run_algorithm1(const GameInstance& g, const WassersteinBall& ball,
                             const SeparationOracle& oracle, const Algorithm1Config& cfg,
                             const Context& ctx) {
  cfg.bigm.validate();
  ball.validate();
  for (const auto& u : ball.nominal.support) g.check_utility(u);
  if (!oracle.supports(g, ball))
    throw std::invalid_argument(std::string("oracle '") + std::string(oracle.name()) +
                                "' does not support this game and ball");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const double budget = std::min(cfg.time_limit_s, ctx.time_limit_s);
  const int k = ball.nominal.size();
  MasterState state = MasterState::initial(ball);

  DrsssSolution sol;
  bool have_solution = false;
  auto finish = [&](SolutionStatus status, std::string note) {
    if (!have_solution) {
      auto s = detail::limit_hit_solution(sol.solver_time_s, std::move(note));
      s.log = std::move(sol.log);
      s.iterations = sol.iterations;
      return s;
    }
    sol.status = status;
    sol.note = std::move(note);
    return sol;
  };

  for (int tau = 1; tau <= cfg.max_iter; ++tau) {
    state.tau = tau;
    const double remaining = budget - seconds_since(t0);
    if (remaining <= 0) return finish(SolutionStatus::limit_hit, "time limit");

    const MasterProgram mp = build_master_mip(state, g, ball, cfg.bigm);
    ctx.dump(mp.mip, "master");
    const auto r = ctx.solver().solve_milp(mp.mip, {remaining});
    sol.solver_time_s += r.wall_time_s;
    if (r.status == solver::Status::limit_hit) return finish(SolutionStatus::limit_hit, "time limit");
    if (!r.optimal())
      throw solver::NumericalFailure(std::string("master MIP: ") + solver::to_string(r.status));

    sol.iterations = tau;
    sol.x = detail::extract_strategy(r.values, mp.x0, g.n());
    sol.lambda = std::max(0.0, r.values[mp.lambda]);
    sol.w = std::vector<double>(r.values.begin() + mp.w0, r.values.begin() + mp.w0 + k);
    sol.value = -r.objective;
    sol.mapping.clear();
    for (int j = 0; j < k; ++j)
      sol.mapping.push_back(detail::selected_action(r.values, mp.delta[j][0]));
    have_solution = true;
    for (int j = 0; j < k; ++j) {
      BestResponseMapping chosen;
      for (const auto& d : mp.delta[j]) chosen.push_back(detail::selected_action(r.values, d));
      detail::verify_mapping(state.lists[j], sol.x, chosen, detail::kMappingTol);
    }

    IterationRecord rec;
    rec.iteration = tau;
    rec.master_objective = r.objective;
    rec.lambda = *sol.lambda;
    rec.num_utilities = state.total();

    if (ball.theta == 0.0) {
      // The ball is the nominal alone; no other utility can be charged.
      rec.gamma = 0.0;
      rec.wall_time_s = seconds_since(t0);
      sol.log.push_back(rec);
      return finish(SolutionStatus::optimal, "radius zero: single master solve");
    }

    std::vector<OracleResult> results(k);
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) if (ctx.parallel())
    for (int j = 0; j < k; ++j) {
      try {
        results[j] = separate(oracle, g, ball, sol.x, *sol.lambda, j, cfg.bigm.epsilon_strict, ctx);
      } catch (...) {
#pragma omp critical(drstack_alg1_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);

    double gamma = std::numeric_limits<double>::infinity();
    int added = 0;
    for (int j = 0; j < k; ++j) {
      sol.solver_time_s += results[j].solver_time_s;
      const double gap = results[j].gamma - (*sol.w)[j];
      gamma = std::min(gamma, gap);
      if (gap < -cfg.tol_gamma && !is_duplicate(state.lists[j], results[j].violator, cfg.dedup_tol)) {
        state.lists[j].push_back(std::move(results[j].violator));
        ++added;
      }
    }
    rec.gamma = gamma;
    rec.wall_time_s = seconds_since(t0);
    sol.log.push_back(rec);

    if (gamma >= -cfg.tol_gamma) return finish(SolutionStatus::optimal, "converged");
    if (added == 0)
      return finish(SolutionStatus::unconverged, "stalled: violators duplicate existing utilities");
  }
  return finish(SolutionStatus::unconverged, "iteration limit reached");
}

void write_iteration_log(const std::filesystem::path& path,
                         const std::vector<IterationRecord>& log) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.precision(17);
  f << "iteration,master_objective,lambda,num_utilities,gamma,wall_time_s\n";
  for (const auto& r : log)
    f << r.iteration << ',' << r.master_objective << ',' << r.lambda << ',' << r.num_utilities
      << ',' << r.gamma << ',' << r.wall_time_s << '\n';
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace drstack
