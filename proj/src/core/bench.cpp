#include "drstack/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "drstack/baselines.hpp"
#include "drstack/finite_drsse.hpp"
#include "drstack/wasserstein_drsse.hpp"

namespace drstack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<const char*, E> (&table)[N], const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw std::invalid_argument(std::string("unknown ") + what + " \"" + s + "\"");
}

const std::pair<const char*, Family> kFamilies[] = {
    {"inspection", Family::inspection}, {"cournot", Family::cournot}, {"synthetic", Family::synthetic}};
const std::pair<const char*, Method> kMethods[] = {{"dr_mip_finite", Method::dr_mip_finite},
                                                   {"dr_algorithm1", Method::dr_algorithm1},
                                                   {"enum_lp", Method::enum_lp},
                                                   {"bayesian", Method::bayesian}};

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(std::round(x * 1e9) / 1e9);
  return v;
}

int as_int(double v, const std::string& var) {
  if (v != std::floor(v) || v < 0) throw std::invalid_argument(var + " must be a non-negative integer");
  return static_cast<int>(v);
}

}  // namespace

const char* to_string(Family f) {
  for (const auto& [name, value] : kFamilies)
    if (value == f) return name;
  return "?";
}

const char* to_string(Method m) {
  for (const auto& [name, value] : kMethods)
    if (value == m) return name;
  return "?";
}

Family family_from_string(const std::string& s) { return parse_enum(s, kFamilies, "family"); }
Method method_from_string(const std::string& s) { return parse_enum(s, kMethods, "method"); }

void ExperimentConfig::validate() const {
  if (sweep_values.empty()) throw std::invalid_argument("sweep values must be non-empty");
  if (methods.empty()) throw std::invalid_argument("at least one method is required");
  if (!(time_limit_s > 0)) throw std::invalid_argument("time limit must be positive");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (theta < 0 || t < 1) throw std::invalid_argument("need theta >= 0 and t >= 1");
  static const std::map<Family, std::vector<std::string>> vars{
      {Family::inspection, {"s", "p", "q", "k", "theta"}},
      {Family::cournot, {"n", "k", "theta"}},
      {Family::synthetic, {"n", "m", "k", "theta"}}};
  const auto& ok = vars.at(family);
  if (std::find(ok.begin(), ok.end(), sweep_var) == ok.end())
    throw std::invalid_argument("sweep variable \"" + sweep_var + "\" is not valid for family " +
                                to_string(family));
  // Build the first instance to surface parameter errors before any run.
  make_instance(*this, sweep_values.front(), seed);
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d", "figA1a", "figA1b", "figA1c",
          "figA2a", "figA2b", "figA2c", "figA2d"};
}

ExperimentConfig preset(const std::string& name, Scale scale) {
  const bool desk = scale == Scale::desk;
  ExperimentConfig c;
  c.name = name;
  c.repetitions = desk ? 3 : 10;
  c.time_limit_s = desk ? 60.0 : 1000.0;
  const std::vector<Method> finite_methods{Method::dr_mip_finite, Method::enum_lp, Method::bayesian};
  if (name.rfind("fig2", 0) == 0) {
    c.family = Family::inspection;
    c.methods = {Method::dr_algorithm1};
    auto& p = c.inspection;
    if (name == "fig2a") {
      p = desk ? InspectionParams{4, 1, 1, 2} : InspectionParams{7, 1, 2, 4};
      c.sweep_var = "p";
      c.sweep_values = desk ? std::vector<double>{1, 2, 3} : range(1, 6, 1);
    } else if (name == "fig2b") {
      p = desk ? InspectionParams{5, 1, 1, 2} : InspectionParams{7, 5, 1, 2};
      c.sweep_var = "q";
      c.sweep_values = desk ? std::vector<double>{1, 2, 3} : range(1, 4, 1);
    } else if (name == "fig2c") {
      p = desk ? InspectionParams{3, 1, 1, 1} : InspectionParams{7, 2, 2, 1};
      c.sweep_var = "k";
      c.sweep_values = desk ? range(1, 4, 1) : range(1, 6, 1);
    } else if (name == "fig2d") {
      p = desk ? InspectionParams{4, 1, 1, 2} : InspectionParams{7, 2, 2, 4};
      c.sweep_var = "theta";
      c.sweep_values = desk ? range(0, 2, 0.5) : range(0, 2, 0.25);
    } else {
      throw std::invalid_argument("unknown preset \"" + name + "\"");
    }
    if (desk) c.repetitions = 5;
  } else if (name.rfind("figA1", 0) == 0) {
    c.family = Family::cournot;
    c.methods = finite_methods;
    auto& p = c.cournot;
    if (name == "figA1a") {
      p.k = desk ? 2 : 4;
      c.sweep_var = "n";
      c.sweep_values = desk ? range(2, 6, 1) : range(5, 60, 5);
    } else if (name == "figA1b") {
      p.n = 4;
      c.sweep_var = "k";
      c.sweep_values = desk ? range(1, 5, 1) : range(5, 60, 5);
    } else if (name == "figA1c") {
      // Two sources disagree on k here (10 vs 12); 10 is used.
      p.n = desk ? 4 : 10;
      p.k = desk ? 3 : 10;
      c.sweep_var = "theta";
      c.sweep_values = desk ? range(0, 2, 0.5) : range(0, 2, 0.25);
    } else {
      throw std::invalid_argument("unknown preset \"" + name + "\"");
    }
  } else if (name.rfind("figA2", 0) == 0) {
    c.family = Family::synthetic;
    c.methods = finite_methods;
    auto& p = c.synthetic;
    if (name == "figA2a") {
      p = desk ? SyntheticParams{5, 3, 2} : SyntheticParams{100, 12, 4};
      c.sweep_var = "n";
      c.sweep_values = desk ? std::vector<double>{5, 10, 20, 40} : range(100, 900, 100);
    } else if (name == "figA2b") {
      p = desk ? SyntheticParams{5, 2, 2} : SyntheticParams{50, 5, 4};
      c.sweep_var = "m";
      c.sweep_values = desk ? range(2, 5, 1) : range(5, 50, 5);
    } else if (name == "figA2c") {
      // k is the swept variable, so the fixed "k = 4" is taken to mean m = 4.
      p = desk ? SyntheticParams{4, 3, 1} : SyntheticParams{8, 4, 2};
      c.sweep_var = "k";
      c.sweep_values = desk ? range(1, 4, 1) : range(2, 30, 2);
    } else if (name == "figA2d") {
      p = desk ? SyntheticParams{3, 3, 3} : SyntheticParams{10, 10, 12};
      c.sweep_var = "theta";
      c.sweep_values = desk ? range(0, 2, 0.5) : range(0, 2, 0.25);
    } else {
      throw std::invalid_argument("unknown preset \"" + name + "\"");
    }
  } else {
    throw std::invalid_argument("unknown preset \"" + name + "\"");
  }
  return c;
}

GameInstance make_instance(const ExperimentConfig& c, double v, std::uint64_t seed) {
  const std::string& var = c.sweep_var;
  switch (c.family) {
    case Family::inspection: {
      auto p = c.inspection;
      p.seed = seed;
      if (var == "s") p.s = as_int(v, var);
      if (var == "p") p.p = as_int(v, var);
      if (var == "q") p.q = as_int(v, var);
      if (var == "k") p.k = as_int(v, var);
      return gen_inspection(p);
    }
    case Family::cournot: {
      auto p = c.cournot;
      p.seed = seed;
      if (var == "n") p.n = as_int(v, var);
      if (var == "k") p.k = as_int(v, var);
      return gen_cournot(p);
    }
    case Family::synthetic: {
      auto p = c.synthetic;
      p.seed = seed;
      if (var == "n") p.n = as_int(v, var);
      if (var == "m") p.m = as_int(v, var);
      if (var == "k") p.k = as_int(v, var);
      return gen_synthetic(p);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

ExperimentRecord run_one(const ExperimentConfig& c, Method method, double v, std::uint64_t seed,
                         const solver::BackendPtr& backend, bool nested_parallel) {
  ExperimentRecord r;
  r.family = to_string(c.family);
  r.method = to_string(method);
  r.sweep_var = c.sweep_var;
  r.sweep_value = v;
  r.seed = seed;
  r.objective = kNaN;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const GameInstance g = make_instance(c, v, seed);
    WassersteinBall ball{g.require_nominal(), c.sweep_var == "theta" ? v : c.theta, c.t};
    BigMConfig bigm{c.M, c.epsilon_strict};
    Context ctx;
    ctx.backend = backend;
    ctx.time_limit_s = c.time_limit_s;
    ctx.execution = nested_parallel ? Execution::parallel : Execution::sequential;

    DrsssSolution s;
    switch (method) {
      case Method::dr_mip_finite:
        s = solve_wasserstein_finite_mip(g, ball, bigm, ctx);
        break;
      case Method::enum_lp:
        s = enumeration_lp_baseline(g, ball, bigm, ctx);
        break;
      case Method::bayesian: {
        // Non-robust baseline over the nominal support alone.
        const auto& nom = g.require_nominal();
        const GameInstance nominal_game(g.leader(), FiniteUniverse{nom.support}, nom);
        s = bayesian_mip(nominal_game, nom, bigm, ctx);
        break;
      }
      case Method::dr_algorithm1: {
        Algorithm1Config cfg;
        cfg.bigm = bigm;
        cfg.max_iter = c.max_iter;
        cfg.time_limit_s = c.time_limit_s;
        s = run_algorithm1(g, ball, *default_oracle(g), cfg, ctx);
        break;
      }
    }
    r.objective = s.value;
    r.iterations = s.iterations;
    r.message = s.note;
    switch (s.status) {
      case SolutionStatus::optimal:
        r.status = "ok";
        break;
      case SolutionStatus::unconverged:
        r.status = "unconverged";
        break;
      case SolutionStatus::limit_hit:
        r.status = "timeout";
        break;
    }
  } catch (const std::exception& e) {
    r.status = "error";
    r.message = e.what();
  } catch (...) {
    r.status = "error";
    r.message = "unknown exception";
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& c,
                                        const std::function<void(const ExperimentRecord&)>& progress) {
  c.validate();
  const auto backend = solver::make_backend(c.backend);
  struct Job {
    Method method;
    double value;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double v : c.sweep_values)
    for (int rep = 0; rep < c.repetitions; ++rep)
      for (Method m : c.methods) jobs.push_back({m, v, c.seed + static_cast<std::uint64_t>(rep)});

  std::vector<ExperimentRecord> out(jobs.size());
  const bool serial = c.workers == 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(c.workers) if (!serial)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out[i] = run_one(c, jobs[i].method, jobs[i].value, jobs[i].seed, backend, serial);
    if (progress) {
#pragma omp critical(drstack_sweep_progress)
      progress(out[i]);
    }
  }
  return out;
}

ResultFormat format_from_string(const std::string& s) {
  if (s == "csv") return ResultFormat::csv;
  if (s == "json") return ResultFormat::json;
  throw std::invalid_argument("unknown format \"" + s + "\"");
}

namespace {

const char* kCsvHeader =
    "family,method,sweep_var,sweep_value,seed,status,objective,wall_time_s,iterations";

Json record_to_json(const ExperimentRecord& r) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"family", r.family},       {"method", r.method},
          {"sweep_var", r.sweep_var}, {"sweep_value", r.sweep_value},
          {"seed", r.seed},           {"status", r.status},
          {"objective", num(r.objective)},
          {"wall_time_s", r.wall_time_s},
          {"iterations", r.iterations}, {"message", r.message}};
}

ExperimentRecord record_from_json(const Json& j) {
  ExperimentRecord r;
  r.family = j.at("family").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.sweep_var = j.at("sweep_var").get<std::string>();
  r.sweep_value = j.at("sweep_value").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  r.objective = j.at("objective").is_null() ? kNaN : j.at("objective").get<double>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.message = j.value("message", "");
  return r;
}

}  // namespace

void emit_results(const std::vector<ExperimentRecord>& records, ResultFormat format,
                  std::ostream& out) {
  if (records.empty()) throw std::invalid_argument("no records to emit");
  if (format == ResultFormat::json) {
    Json arr = Json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    out << arr.dump(2) << '\n';
  } else {
    out << kCsvHeader << '\n' << std::setprecision(17);
    for (const auto& r : records)
      out << r.family << ',' << r.method << ',' << r.sweep_var << ',' << r.sweep_value << ','
          << r.seed << ',' << r.status << ',' << r.objective << ',' << r.wall_time_s << ','
          << r.iterations << '\n';
  }
  if (!out) throw std::runtime_error("failed writing results");
}

void emit_results(const std::vector<ExperimentRecord>& records, ResultFormat format,
                  const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_results(records, format, f);
}

std::vector<ExperimentRecord> parse_results(const std::filesystem::path& path, ResultFormat format) {
  std::vector<ExperimentRecord> out;
  if (format == ResultFormat::json) {
    for (const auto& j : read_json_file(path)) out.push_back(record_from_json(j));
    return out;
  }
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != kCsvHeader)
    throw std::runtime_error(path.string() + ": missing results header");
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error(path.string() + ": bad row \"" + line + "\"");
    ExperimentRecord r;
    r.family = cells[0];
    r.method = cells[1];
    r.sweep_var = cells[2];
    r.sweep_value = std::stod(cells[3]);
    r.seed = std::stoull(cells[4]);
    r.status = cells[5];
    r.objective = std::strtod(cells[6].c_str(), nullptr);
    r.wall_time_s = std::stod(cells[7]);
    r.iterations = std::stoi(cells[8]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepSummary> summarize(const std::vector<ExperimentRecord>& records) {
  std::vector<SweepSummary> out;
  std::vector<std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SweepSummary& s) {
      return s.method == r.method && s.sweep_value == r.sweep_value;
    });
    if (it == out.end()) {
      out.push_back({r.method, r.sweep_value});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[it - out.begin()].push_back(&r);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& s = out[i];
    double sum = 0, obj = 0;
    for (const auto* r : groups[i]) {
      sum += r->wall_time_s;
      if (r->status == "ok") {
        ++s.ok;
        obj += r->objective;
      }
    }
    s.runs = static_cast<int>(groups[i].size());
    s.mean_time_s = sum / s.runs;
    double var = 0;
    for (const auto* r : groups[i]) var += std::pow(r->wall_time_s - s.mean_time_s, 2);
    s.std_time_s = s.runs > 1 ? std::sqrt(var / (s.runs - 1)) : 0.0;
    s.mean_objective = s.ok > 0 ? obj / s.ok : kNaN;
  }
  return out;
}

void write_summary_csv(const std::vector<SweepSummary>& s, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << "method,sweep_value,runs,ok,mean_time_s,std_time_s,mean_objective\n" << std::setprecision(10);
  for (const auto& r : s)
    f << r.method << ',' << r.sweep_value << ',' << r.runs << ',' << r.ok << ',' << r.mean_time_s
      << ',' << r.std_time_s << ',' << r.mean_objective << '\n';
}

void write_svg_plot(const std::vector<SweepSummary>& s, const std::string& title,
                    const std::string& x_label, const std::filesystem::path& path) {
  if (s.empty()) throw std::invalid_argument("nothing to plot");
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
  double x0 = s.front().sweep_value, x1 = x0, y1 = 0;
  std::vector<std::string> methods;
  for (const auto& p : s) {
    x0 = std::min(x0, p.sweep_value);
    x1 = std::max(x1, p.sweep_value);
    y1 = std::max(y1, p.mean_time_s + p.std_time_s);
    if (std::find(methods.begin(), methods.end(), p.method) == methods.end())
      methods.push_back(p.method);
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 <= 0) y1 = 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - y / y1 * (H - T - B); };
  const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << std::setprecision(6);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
    << "</text>\n"
    << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
    << x_label << "</text>\n"
    << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
    << ")\" text-anchor=\"middle\">runtime (s)</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = x0 + (x1 - x0) * i / 4, y = y1 * i / 4;
    f << "<text x=\"" << px(x) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << x
      << "</text>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << y
      << "</text>\n";
  }
  for (std::size_t k = 0; k < methods.size(); ++k) {
    const char* colour = colours[k % 4];
    std::vector<const SweepSummary*> pts;
    for (const auto& p : s)
      if (p.method == methods[k]) pts.push_back(&p);
    std::sort(pts.begin(), pts.end(),
              [](auto* a, auto* b) { return a->sweep_value < b->sweep_value; });
    f << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto* p : pts) f << px(p->sweep_value) << ',' << py(p->mean_time_s) << ' ';
    f << "\"/>\n";
    for (const auto* p : pts) {
      const double x = px(p->sweep_value);
      f << "<line x1=\"" << x << "\" y1=\"" << py(std::max(0.0, p->mean_time_s - p->std_time_s))
        << "\" x2=\"" << x << "\" y2=\"" << py(p->mean_time_s + p->std_time_s) << "\" stroke=\""
        << colour << "\"/>\n"
        << "<circle cx=\"" << x << "\" cy=\"" << py(p->mean_time_s) << "\" r=\"3\" fill=\"" << colour
        << "\"/>\n";
    }
    f << "<text x=\"" << W - R + 12 << "\" y=\"" << T + 18 * (k + 1) << "\" fill=\"" << colour
      << "\">" << methods[k] << "</text>\n";
  }
  f << "</svg>\n";
}

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [k, _] : j.items())
    if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) == keys.end())
      throw std::invalid_argument(std::string("config: unknown key \"") + k + "\" in " + where);
}

IntRange range_from_json(const Json& j) {
  const auto v = j.get<std::vector<long>>();
  if (v.size() != 2) throw std::invalid_argument("config: integer ranges are [lo, hi]");
  return {v[0], v[1]};
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  reject_unknown(j,
                 {"preset", "scale", "name", "family", "method", "methods", "params", "sweep",
                  "theta", "t", "M", "epsilon_strict", "time_limit_s", "repetitions", "seed",
                  "workers", "backend", "max_iter"},
                 "config");
  ExperimentConfig c;
  if (j.contains("preset")) {
    const std::string scale = j.value("scale", "desk");
    if (scale != "desk" && scale != "full")
      throw std::invalid_argument("config: scale is \"desk\" or \"full\"");
    c = preset(j.at("preset").get<std::string>(), scale == "full" ? Scale::full : Scale::desk);
  }
  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  if (j.contains("family")) c.family = family_from_string(j.at("family").get<std::string>());
  if (j.contains("method")) c.methods = {method_from_string(j.at("method").get<std::string>())};
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (j.contains("params")) {
    const Json& p = j.at("params");
    switch (c.family) {
      case Family::inspection:
        reject_unknown(p, {"s", "p", "q", "k"}, "inspection params");
        c.inspection.s = p.value("s", c.inspection.s);
        c.inspection.p = p.value("p", c.inspection.p);
        c.inspection.q = p.value("q", c.inspection.q);
        c.inspection.k = p.value("k", c.inspection.k);
        break;
      case Family::cournot: {
        reject_unknown(p,
                       {"n", "k", "intercept", "slope", "leader_fixed", "leader_marginal",
                        "follower_fixed", "follower_marginal"},
                       "cournot params");
        auto& q = c.cournot;
        q.n = p.value("n", q.n);
        q.k = p.value("k", q.k);
        q.intercept = p.value("intercept", q.intercept);
        if (p.contains("slope")) q.slope = range_from_json(p.at("slope"));
        if (p.contains("leader_fixed")) q.leader_fixed = range_from_json(p.at("leader_fixed"));
        if (p.contains("leader_marginal")) q.leader_marginal = range_from_json(p.at("leader_marginal"));
        if (p.contains("follower_fixed")) q.follower_fixed = range_from_json(p.at("follower_fixed"));
        if (p.contains("follower_marginal"))
          q.follower_marginal = range_from_json(p.at("follower_marginal"));
        break;
      }
      case Family::synthetic:
        reject_unknown(p, {"n", "m", "k"}, "synthetic params");
        c.synthetic.n = p.value("n", c.synthetic.n);
        c.synthetic.m = p.value("m", c.synthetic.m);
        c.synthetic.k = p.value("k", c.synthetic.k);
        break;
    }
  }
  if (j.contains("sweep")) {
    const Json& sw = j.at("sweep");
    reject_unknown(sw, {"var", "values"}, "sweep");
    c.sweep_var = sw.at("var").get<std::string>();
    c.sweep_values = sw.at("values").get<std::vector<double>>();
  }
  c.theta = j.value("theta", c.theta);
  c.t = j.value("t", c.t);
  c.M = j.value("M", c.M);
  c.epsilon_strict = j.value("epsilon_strict", c.epsilon_strict);
  c.time_limit_s = j.value("time_limit_s", c.time_limit_s);
  c.repetitions = j.value("repetitions", c.repetitions);
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  c.backend = j.value("backend", c.backend);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  Json params;
  switch (c.family) {
    case Family::inspection:
      params = {{"s", c.inspection.s}, {"p", c.inspection.p}, {"q", c.inspection.q}, {"k", c.inspection.k}};
      break;
    case Family::cournot: {
      const auto& q = c.cournot;
      auto r = [](IntRange x) { return Json::array({x.lo, x.hi}); };
      params = {{"n", q.n},
                {"k", q.k},
                {"intercept", q.intercept},
                {"slope", r(q.slope)},
                {"leader_fixed", r(q.leader_fixed)},
                {"leader_marginal", r(q.leader_marginal)},
                {"follower_fixed", r(q.follower_fixed)},
                {"follower_marginal", r(q.follower_marginal)}};
      break;
    }
    case Family::synthetic:
      params = {{"n", c.synthetic.n}, {"m", c.synthetic.m}, {"k", c.synthetic.k}};
      break;
  }
  return {{"name", c.name},
          {"family", to_string(c.family)},
          {"methods", methods},
          {"params", params},
          {"sweep", {{"var", c.sweep_var}, {"values", c.sweep_values}}},
          {"theta", c.theta},
          {"t", c.t},
          {"M", c.M},
          {"epsilon_strict", c.epsilon_strict},
          {"time_limit_s", c.time_limit_s},
          {"repetitions", c.repetitions},
          {"seed", c.seed},
          {"workers", c.workers},
          {"backend", c.backend},
          {"max_iter", c.max_iter}};
}

}  // namespace drstack
