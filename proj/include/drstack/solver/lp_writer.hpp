#pragma once

#include <filesystem>
#include <ostream>

#include "drstack/solver/program.hpp"

namespace drstack::solver {

/// Writes `p` in the CPLEX LP dialect. Quadratic objective terms, if any,
/// go in the bracketed `[ ... ] / 2` block.
void write_lp(std::ostream& os, const LinearProgram& p,
              const std::vector<QuadTerm>& quadratic = {});
void write_lp(const std::filesystem::path& path, const LinearProgram& p,
              const std::vector<QuadTerm>& quadratic = {});

}  // namespace drstack::solver
