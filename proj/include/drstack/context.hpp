#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "drstack/solver/backend.hpp"

namespace drstack {

/// Selects between the OpenMP kernels and their serial reference versions.
enum class Execution { sequential, parallel };

/// Settings shared by every algorithm entry point.
struct Context {
  solver::BackendPtr backend;  // null selects solver::default_backend()
  Execution execution = Execution::parallel;
  /// Per-solve limit handed to the backend.
  double time_limit_s = solver::kInfinity;
  /// When non-empty, every emitted program is written here in LP format.
  std::string dump_lp_dir;

  const solver::SolverBackend& solver() const;
  solver::SolveOptions options() const { return {time_limit_s}; }

  /// Writes `p` as <dump_lp_dir>/<tag>-<counter>.lp when dumping is enabled.
  void dump(const solver::LinearProgram& p, std::string_view tag,
            const std::vector<solver::QuadTerm>& quadratic = {}) const;

  bool parallel() const { return execution == Execution::parallel; }

 private:
  std::shared_ptr<std::atomic<long>> dump_counter_ = std::make_shared<std::atomic<long>>(0);
};

}  // namespace drstack
