#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "drstack/game.hpp"

namespace drstack {

enum class SolutionStatus { optimal, unconverged, limit_hit };

const char* to_string(SolutionStatus s);

/// One master iteration of the incremental MIP.
struct IterationRecord {
  int iteration = 0;
  double master_objective = 0.0;
  double lambda = 0.0;
  int num_utilities = 0;
  double gamma = 0.0;
  double wall_time_s = 0.0;
};

struct DrsssSolution {
  MixedStrategy x;
  /// Leader's worst-case expected payoff at x.
  double value = 0.0;
  BestResponseMapping mapping;
  std::optional<double> lambda;
  std::optional<std::vector<double>> w;
  SolutionStatus status = SolutionStatus::optimal;
  /// Total time spent inside the solver backend.
  double solver_time_s = 0.0;
  /// Master solves for the incremental MIP, programs solved otherwise.
  int iterations = 0;
  std::vector<IterationRecord> log;
  /// Free-form diagnostic, e.g. why a run stopped early.
  std::string note;
};

struct BigMConfig {
  double M = 2.0;
  double epsilon_strict = 1e-6;

  void validate() const;
};

/// The mapping recovered from a big-M program is not a best response at the
/// returned strategy, which means M was chosen too small.
class BigMViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Enumeration would exceed the m^k guard.
class EnumerationGuard : public std::length_error {
  using std::length_error::length_error;
};

inline constexpr double kEnumerationLimit = 1e5;

}  // namespace drstack
