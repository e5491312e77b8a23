#include "drstack/context.hpp"

#include <filesystem>

#include "drstack/solver/lp_writer.hpp"

namespace drstack {

const solver::SolverBackend& Context::solver() const {
  if (backend) return *backend;
  return *solver::default_backend();
}

void Context::dump(const solver::LinearProgram& p, std::string_view tag,
                   const std::vector<solver::QuadTerm>& quadratic) const {
  if (dump_lp_dir.empty()) return;
  const long id = dump_counter_->fetch_add(1);
  std::filesystem::create_directories(dump_lp_dir);
  const auto path = std::filesystem::path(dump_lp_dir) /
                    (std::string(tag) + "-" + std::to_string(id) + ".lp");
  solver::write_lp(path, p, quadratic);
}

}  // namespace drstack
