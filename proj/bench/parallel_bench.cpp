// Serial reference vs OpenMP timings for the three parallel kernels:
// mapping enumeration, per-nominal separation in the incremental MIP, and
// sweep workers. Each pair must produce identical objectives.

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>

#include "drstack/bench.hpp"
#include "drstack/finite_drsse.hpp"
#include "drstack/games.hpp"
#include "drstack/wasserstein_drsse.hpp"

using namespace drstack;

namespace {

struct Timing {
  double seconds;
  double objective;
};

Timing best_of(int reps, const std::function<double()>& fn) {
  Timing t{1e300, 0.0};
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    t.objective = fn();
    t.seconds = std::min(t.seconds,
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return t;
}

bool report(const char* name, const Timing& serial, const Timing& parallel) {
  const bool same = std::abs(serial.objective - parallel.objective) <= 1e-9;
  std::printf("%-26s %10.4f %10.4f %8.2fx  %s\n", name, serial.seconds, parallel.seconds,
              serial.seconds / parallel.seconds, same ? "match" : "MISMATCH");
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernels"};
  int reps = 3;
  std::string backend = "auto";
  app.add_option("--reps", reps, "repetitions per measurement (best time kept)");
  app.add_option("--backend", backend)->check(CLI::IsMember({"auto", "highs", "reference"}));
  CLI11_PARSE(app, argc, argv);

  Context seq, par;
  seq.backend = par.backend = solver::make_backend(backend);
  seq.execution = Execution::sequential;
  std::printf("backend %s, %d OpenMP threads\n", std::string(seq.solver().name()).c_str(),
              omp_get_max_threads());
  std::printf("%-26s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");
  bool ok = true;

  {
    const auto g = gen_synthetic({4, 4, 5, 1});
    WassersteinBall ball{g.require_nominal(), 0.1};
    auto run = [&](const Context& c) { return solve_by_enumeration(g, ball, c).value; };
    ok &= report("enumeration 4^5 LPs", best_of(reps, [&] { return run(seq); }),
                 best_of(reps, [&] { return run(par); }));
  }
  {
    const auto g = gen_inspection({4, 2, 1, 6, 3});
    WassersteinBall ball{g.require_nominal(), 0.1};
    const InspectionOracle oracle;
    Algorithm1Config cfg;
    auto run = [&](const Context& c) { return run_algorithm1(g, ball, oracle, cfg, c).value; };
    ok &= report("dr_algorithm1 separation k=6", best_of(reps, [&] { return run(seq); }),
                 best_of(reps, [&] { return run(par); }));
  }
  {
    ExperimentConfig c = preset("figA2c", Scale::desk);
    c.backend = backend;
    c.repetitions = 4;
    auto run = [&](int workers) {
      c.workers = workers;
      double sum = 0.0;
      for (const auto& r : run_sweep(c))
        if (r.status == "ok") sum += r.objective;
      return sum;
    };
    ok &= report("sweep figA2c desk", best_of(1, [&] { return run(1); }),
                 best_of(1, [&] { return run(omp_get_max_threads()); }));
  }
  return ok ? 0 : 1;
}
