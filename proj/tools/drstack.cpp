// drstack command-line interface: instance generation, single solves,
// experiment sweeps and transport distances.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "drstack/baselines.hpp"
#include "drstack/bench.hpp"
#include "drstack/finite_drsse.hpp"
#include "drstack/serialization.hpp"
#include "drstack/wasserstein_drsse.hpp"

using namespace drstack;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "json";
  std::optional<double> time_limit;
  std::optional<std::uint64_t> seed;
  std::string dump_lp;
  std::string backend = "auto";
};

void add_common(CLI::App* app, Common& c, bool with_format) {
  app->add_option("--config", c.config, "JSON file with the subcommand's settings");
  app->add_option("--out", c.out, "output path (stdout when omitted)");
  if (with_format)
    app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--time-limit", c.time_limit, "per-solve time limit in seconds")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--backend", c.backend, "solver backend")
      ->check(CLI::IsMember({"auto", "highs", "reference"}));
}

Json load_config(const Common& c) { return c.config.empty() ? Json::object() : read_json_file(c.config); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

// gen ----------------------------------------------------------------------

struct GenArgs {
  Common common;
  std::string family = "synthetic";
  std::optional<int> s, p, q, k, n, m;
};

int run_gen(const GenArgs& a) {
  const Json cfg = load_config(a.common);
  const Json params = cfg.value("params", Json::object());
  const std::string family = cfg.value("family", a.family);
  const std::uint64_t seed = a.common.seed.value_or(cfg.value("seed", std::uint64_t{0}));
  auto pick = [&](const std::optional<int>& flag, const char* key, int fallback) {
    return flag.value_or(params.value(key, fallback));
  };
  std::optional<GameInstance> g;
  switch (family_from_string(family)) {
    case Family::inspection:
      g = gen_inspection({pick(a.s, "s", 3), pick(a.p, "p", 1), pick(a.q, "q", 1), pick(a.k, "k", 1), seed});
      break;
    case Family::cournot: {
      CournotParams p;
      p.n = pick(a.n, "n", 4);
      p.k = pick(a.k, "k", 1);
      p.seed = seed;
      g = gen_cournot(p);
      break;
    }
    case Family::synthetic:
      g = gen_synthetic({pick(a.n, "n", 2), pick(a.m, "m", 2), pick(a.k, "k", 1), seed});
      break;
  }
  write_text(a.common.out, game_to_json(*g).dump(2) + "\n");
  return 0;
}

// solve --------------------------------------------------------------------

struct SolveArgs {
  Common common;
  std::string game;
  std::string method = "auto";
  std::string ambiguity = "wasserstein";
  std::optional<double> theta, t, M;
  std::optional<int> max_iter;
  std::string dump_iters;
};

int run_solve(const SolveArgs& a) {
  const Json cfg = load_config(a.common);
  const std::string game_path = a.game.empty() ? cfg.value("game", std::string()) : a.game;
  if (game_path.empty()) throw CLI::ValidationError("--game", "a game file is required");
  const GameInstance g = game_from_json(read_json_file(game_path));

  std::string method = a.method != "auto" ? a.method : cfg.value("method", std::string("auto"));
  if (method == "auto") method = g.is_finite() ? "dr_mip_finite" : "dr_algorithm1";
  const std::string ambiguity =
      a.ambiguity != "wasserstein" ? a.ambiguity : cfg.value("ambiguity", a.ambiguity);

  WassersteinBall ball{g.require_nominal(), a.theta.value_or(cfg.value("theta", 0.1)),
                       a.t.value_or(cfg.value("t", 2.0))};
  BigMConfig bigm;
  bigm.M = a.M.value_or(cfg.value("M", 2.0));
  bigm.epsilon_strict = cfg.value("epsilon_strict", bigm.epsilon_strict);

  Context ctx;
  ctx.backend = solver::make_backend(a.common.backend);
  ctx.time_limit_s = a.common.time_limit.value_or(cfg.value("time_limit_s", solver::kInfinity));
  ctx.dump_lp_dir = a.common.dump_lp;

  AmbiguitySpec amb = ball;
  if (ambiguity == "full-simplex") amb = PolytopeAmbiguity::full_simplex(g.finite_utilities());
  if (ambiguity == "nominal")
    amb = PolytopeAmbiguity::singleton(g.require_nominal().support, g.require_nominal().weights);

  DrsssSolution s;
  if (method == "dr_mip_finite") {
    s = solve_wasserstein_finite_mip(g, ball, bigm, ctx);
  } else if (method == "dr_algorithm1") {
    Algorithm1Config c;
    c.bigm = bigm;
    c.max_iter = a.max_iter.value_or(cfg.value("max_iter", c.max_iter));
    c.time_limit_s = ctx.time_limit_s;
    s = run_algorithm1(g, ball, *default_oracle(g), c, ctx);
    if (!a.dump_iters.empty()) write_iteration_log(a.dump_iters, s.log);
  } else if (method == "enum_lp") {
    s = enumeration_lp_baseline(g, ball, bigm, ctx);
  } else if (method == "bayesian") {
    s = bayesian_mip(g, g.require_nominal(), bigm, ctx);
  } else if (method == "enumeration") {
    s = solve_by_enumeration(g, amb, ctx);
  } else if (method == "mip") {
    s = solve_by_mip(g, amb, bigm, ctx);
  } else {
    throw CLI::ValidationError("--method", "unknown method " + method);
  }
  if (!a.dump_iters.empty() && method != "dr_algorithm1")
    std::cerr << "note: --dump-iters only applies to dr_algorithm1\n";
  write_text(a.common.out, solution_to_json(s).dump(2) + "\n");
  return 0;
}

// sweep --------------------------------------------------------------------

struct SweepArgs {
  Common common;
  std::string preset;
  std::string scale = "desk";
  std::optional<int> repetitions, workers;
  std::string plot, summary;
  bool quiet = false;
};

int run_sweep_cmd(const SweepArgs& a) {
  Json cfg = load_config(a.common);
  if (!a.preset.empty()) {
    cfg["preset"] = a.preset;
    cfg["scale"] = a.scale;
  }
  if (!cfg.contains("preset") && a.common.config.empty())
    throw CLI::ValidationError("sweep", "give --config or --preset");
  if (a.common.time_limit) cfg["time_limit_s"] = *a.common.time_limit;
  if (a.common.seed) cfg["seed"] = *a.common.seed;
  if (a.repetitions) cfg["repetitions"] = *a.repetitions;
  if (a.workers) cfg["workers"] = *a.workers;
  if (a.common.backend != "auto") cfg["backend"] = a.common.backend;
  const ExperimentConfig c = config_from_json(cfg);

  const auto records = run_sweep(c, [&](const ExperimentRecord& r) {
    if (!a.quiet)
      std::cerr << r.method << ' ' << r.sweep_var << '=' << r.sweep_value << " seed=" << r.seed
                << ' ' << r.status << ' ' << r.wall_time_s << "s\n";
  });
  const auto fmt = format_from_string(a.common.format);
  if (a.common.out.empty())
    emit_results(records, fmt, std::cout);
  else
    emit_results(records, fmt, a.common.out);
  const auto summary = summarize(records);
  if (!a.summary.empty()) write_summary_csv(summary, a.summary);
  if (!a.plot.empty()) write_svg_plot(summary, c.name, c.sweep_var, a.plot);
  return 0;
}

// wasserstein --------------------------------------------------------------

struct WassersteinArgs {
  Common common;
  std::string mu, nu, game;
  std::optional<double> t;
};

int run_wasserstein(const WassersteinArgs& a) {
  const Json cfg = load_config(a.common);
  std::optional<GameInstance> g;
  const std::string game_path = a.game.empty() ? cfg.value("game", std::string()) : a.game;
  if (!game_path.empty()) g = game_from_json(read_json_file(game_path));
  const std::vector<FollowerUtility>* universe =
      g && g->is_finite() ? &g->finite_utilities() : nullptr;
  auto load = [&](const std::string& flag, const char* key) {
    Json j;
    if (!flag.empty())
      j = read_json_file(flag);
    else if (cfg.contains(key))
      j = cfg.at(key);
    else
      throw CLI::ValidationError(std::string("--") + key, "distribution is required");
    return distribution_from_json(j, g ? g->n() : -1, g ? g->m() : -1, universe);
  };
  const Distribution mu = load(a.mu, "mu"), nu = load(a.nu, "nu");
  const double t = a.t.value_or(cfg.value("t", 2.0));
  Context ctx;
  ctx.backend = solver::make_backend(a.common.backend);
  const auto primal = wasserstein_primal(mu, nu, t, GroundMetric::frobenius, ctx);
  const double dual = wasserstein_dual(mu, nu, t, GroundMetric::frobenius, ctx);
  const Json out{{"t", t},
                 {"distance", primal.value},
                 {"primal_cost", std::pow(primal.value, t)},
                 {"dual_value", dual},
                 {"plan", matrix_to_json(primal.plan)}};
  write_text(a.common.out, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust Stackelberg solver"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a game instance as JSON");
  add_common(g, gen.common, false);
  g->add_option("--family", gen.family)->check(CLI::IsMember({"inspection", "cournot", "synthetic"}));
  g->add_option("-s", gen.s, "inspection ground-set size");
  g->add_option("-p", gen.p, "inspection leader subset size");
  g->add_option("-q", gen.q, "inspection follower subset size");
  g->add_option("-k", gen.k, "nominal utility count");
  g->add_option("-n", gen.n, "leader actions");
  g->add_option("-m", gen.m, "follower actions (synthetic)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve one game");
  add_common(s, solve.common, false);
  s->add_option("--game", solve.game, "game JSON");
  s->add_option("--method", solve.method)
      ->check(CLI::IsMember({"auto", "dr_mip_finite", "dr_algorithm1", "enum_lp", "bayesian",
                             "enumeration", "mip"}));
  s->add_option("--ambiguity", solve.ambiguity, "for enumeration and mip")
      ->check(CLI::IsMember({"wasserstein", "full-simplex", "nominal"}));
  s->add_option("--theta", solve.theta, "Wasserstein radius")->check(CLI::NonNegativeNumber);
  s->add_option("--t", solve.t, "Wasserstein exponent");
  s->add_option("--M", solve.M, "big-M constant")->check(CLI::PositiveNumber);
  s->add_option("--max-iter", solve.max_iter, "iteration cap for dr_algorithm1");
  s->add_option("--dump-iters", solve.dump_iters, "write the dr_algorithm1 iteration log as CSV");
  s->add_option("--dump-lp", solve.common.dump_lp, "write every program to this directory");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "run an experiment sweep");
  add_common(w, sweep.common, true);
  sweep.common.format = "csv";
  w->add_option("--preset", sweep.preset)->check(CLI::IsMember(preset_names()));
  w->add_option("--scale", sweep.scale)->check(CLI::IsMember({"desk", "full"}));
  w->add_option("--repetitions", sweep.repetitions)->check(CLI::PositiveNumber);
  w->add_option("--workers", sweep.workers)->check(CLI::PositiveNumber);
  w->add_option("--plot", sweep.plot, "SVG runtime plot");
  w->add_option("--summary", sweep.summary, "per-sweep-value summary CSV");
  w->add_flag("--quiet", sweep.quiet, "no per-run progress on stderr");

  WassersteinArgs was;
  auto* d = app.add_subcommand("wasserstein", "transport distance between two distributions");
  add_common(d, was.common, false);
  d->add_option("--mu", was.mu, "distribution JSON");
  d->add_option("--nu", was.nu, "distribution JSON");
  d->add_option("--game", was.game, "game whose finite universe resolves support indices");
  d->add_option("--t", was.t, "exponent");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) return run_gen(gen);
    if (*s) return run_solve(solve);
    if (*w) return run_sweep_cmd(sweep);
    if (*d) return run_wasserstein(was);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "drstack: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
