#pragma once

#include <vector>

#include "drstack/solver/backend.hpp"
#include "drstack/solver/highs_backend.hpp"

namespace drstack::testing {

// Every backend that can run here; HiGHS is skipped when not loadable.
inline std::vector<solver::BackendPtr> all_backends() {
  std::vector<solver::BackendPtr> out{solver::make_backend("reference")};
  if (solver::HighsBackend::available()) out.push_back(solver::make_backend("highs"));
  return out;
}

}  // namespace drstack::testing
