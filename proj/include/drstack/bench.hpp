#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "drstack/games.hpp"
#include "drstack/serialization.hpp"

namespace drstack {

enum class Family { inspection, cournot, synthetic };
enum class Method { dr_mip_finite, dr_algorithm1, enum_lp, bayesian };
enum class Scale { desk, full };

const char* to_string(Family f);
const char* to_string(Method m);
Family family_from_string(const std::string& s);
Method method_from_string(const std::string& s);

struct ExperimentConfig {
  std::string name = "custom";
  Family family = Family::synthetic;
  std::vector<Method> methods{Method::dr_mip_finite};
  InspectionParams inspection;
  CournotParams cournot;
  SyntheticParams synthetic;
  /// Parameter being varied: one of s, p, q, k (inspection), n, k (Cournot,
  /// n = m), n, m, k (synthetic), or theta for every family.
  std::string sweep_var = "k";
  std::vector<double> sweep_values{1.0};
  double theta = 0.1;
  double t = 2.0;
  double M = 2.0;
  double epsilon_strict = 1e-6;
  double time_limit_s = 1000.0;
  int repetitions = 10;
  /// Repetition r uses instance seed `seed + r`, shared across methods and
  /// sweep values.
  std::uint64_t seed = 0;
  /// Concurrent runs; 1 keeps timings clean.
  int workers = 1;
  std::string backend = "auto";
  int max_iter = 200;

  void validate() const;
};

/// Sweep presets fig2a..fig2d, figA1a..figA1c, figA2a..figA2d. Desk scale keeps every
/// preset to minutes on a laptop; full scale uses the large sizes.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name, Scale scale = Scale::desk);

/// Reads a config document. A "preset" key (with optional "scale") seeds
/// the defaults, and every other key overrides them.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);

struct ExperimentRecord {
  std::string family;
  std::string method;
  std::string sweep_var;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  std::string status;  // ok, timeout, unconverged or error
  double objective = 0.0;
  double wall_time_s = 0.0;
  int iterations = 0;
  std::string message;  // JSON only

  bool operator==(const ExperimentRecord&) const = default;
};

/// The game a run of `c` solves at one sweep value and seed.
GameInstance make_instance(const ExperimentConfig& c, double sweep_value, std::uint64_t seed);

/// One record per method x sweep value x repetition. Errors inside a run
/// are recorded, never thrown. `progress` is called after each run.
std::vector<ExperimentRecord> run_sweep(
    const ExperimentConfig& c,
    const std::function<void(const ExperimentRecord&)>& progress = nullptr);

enum class ResultFormat { csv, json };
ResultFormat format_from_string(const std::string& s);

void emit_results(const std::vector<ExperimentRecord>& records, ResultFormat format,
                  const std::filesystem::path& path);
void emit_results(const std::vector<ExperimentRecord>& records, ResultFormat format,
                  std::ostream& out);
std::vector<ExperimentRecord> parse_results(const std::filesystem::path& path, ResultFormat format);

struct SweepSummary {
  std::string method;
  double sweep_value = 0.0;
  int runs = 0;
  int ok = 0;
  double mean_time_s = 0.0;
  double std_time_s = 0.0;
  double mean_objective = 0.0;  // over ok runs; NaN when none
};

/// Mean and sample standard deviation of wall time per method and sweep
/// value, in first-seen order.
std::vector<SweepSummary> summarize(const std::vector<ExperimentRecord>& records);
void write_summary_csv(const std::vector<SweepSummary>& s, const std::filesystem::path& path);

/// Line plot of mean runtime against the sweep value, one line per method,
/// with one-standard-deviation error bars.
void write_svg_plot(const std::vector<SweepSummary>& s, const std::string& title,
                    const std::string& x_label, const std::filesystem::path& path);

}  // namespace drstack
