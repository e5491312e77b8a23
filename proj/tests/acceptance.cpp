// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and instance counts are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "drstack/baselines.hpp"
#include "drstack/bench.hpp"
#include "drstack/finite_drsse.hpp"
#include "drstack/games.hpp"
#include "drstack/wasserstein_drsse.hpp"
#include "oracles.hpp"

using namespace drstack;

namespace {

constexpr double kAgreeTol = 1e-5;       // 1: pairwise method agreement
constexpr double kBayesTol = 1e-6;       // 2: radius zero vs Bayesian
constexpr double kRobustTol = 1e-5;      // 2: large radius vs full simplex, singleton vs SSE
constexpr double kDualityTol = 1e-6;     // 3: transport primal vs dual
constexpr double kGammaTol = 1e-6;       // 4: convergence certificate
constexpr int kMaxIter = 50;             // 4
constexpr double kOracleTol = 5e-3;      // 4: value vs brute force
constexpr int kGridSteps = 100;          // 4: leader simplex grid step 1/100
constexpr int kFamilySamples = 10000;    // 4
constexpr int kProbesPerNominal = 50;    // 5
constexpr double kProbeTol = 1e-5;       // 5
constexpr double kMonotoneSlack = 1e-6;  // 6
constexpr double kMinSpearman = 0.8;     // 7
constexpr int kTrendSeeds = 5;           // 7
constexpr double kOracleAgreeTol = 1e-5; // 9

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

GameInstance random_finite_game(std::mt19937_64& rng, int n, int m, int k) {
  const Matrix ul = oracle::random_matrix(rng, n, m);
  std::vector<Matrix> us;
  for (int i = 0; i < k; ++i) us.push_back(oracle::random_matrix(rng, n, m));
  Distribution nominal{us, oracle::random_weights(rng, k)};
  return GameInstance(ul, FiniteUniverse{us}, nominal);
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t q = i; q <= j; ++q) r[idx[q]] = 0.5 * (i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return saa > 0 && sbb > 0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

// Alpha and beta of a two-valued inspection utility.
std::pair<double, double> family_roles(const Matrix& mask, const Matrix& u) {
  double a = -1, b = -1;
  for (int i = 0; i < mask.rows(); ++i)
    for (int j = 0; j < mask.cols(); ++j) (mask(i, j) > 0.5 ? a : b) = u(i, j);
  return {a, b};
}

Outcome method_agreement() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(2, 4), support(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0;
  int polytopes = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng), m = size(rng), k = support(rng);
    const auto g = random_finite_game(rng, n, m, k);
    const auto& us = g.finite_utilities();

    WassersteinBall ball{g.require_nominal(), 0.5 * unit(rng)};
    worst = std::max(worst, spread({solve_by_enumeration(g, ball).value,
                                    solve_by_mip(g, ball).value,
                                    solve_wasserstein_finite_mip(g, ball).value,
                                    enumeration_lp_baseline(g, ball).value}));

    // A random half-space cut through the simplex, kept non-empty by
    // passing it through the uniform distribution.
    Matrix a(1, k);
    for (int j = 0; j < k; ++j) a(0, j) = 2.0 * unit(rng) - 1.0;
    Vector b(1);
    b[0] = a.sum() / k + 0.05 * unit(rng);
    const auto poly = PolytopeAmbiguity::create(us, a, b);
    worst = std::max(worst, spread({solve_by_enumeration(g, poly).value,
                                    solve_by_mip(g, poly).value}));
    ++polytopes;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "100 Wasserstein + %d polytope games, max spread %.2e", polytopes,
                worst);
  return {worst <= kAgreeTol, buf};
}

Outcome reduction_chain() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> size(2, 4), support(1, 3);
  double bayes_gap = 0, robust_gap = 0, sse_gap = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = size(rng), m = size(rng), k = support(rng);
    const auto g = random_finite_game(rng, n, m, k);
    const auto& us = g.finite_utilities();
    const auto& nom = g.require_nominal();

    const double at_zero = solve_wasserstein_finite_mip(g, WassersteinBall{nom, 0.0}).value;
    bayes_gap = std::max(bayes_gap, std::abs(at_zero - bayesian_mip(g, nom).value));

    double diameter = 0;
    for (const auto& u : us)
      for (const auto& v : us) diameter = std::max(diameter, (u - v).norm());
    const double wide =
        solve_wasserstein_finite_mip(g, WassersteinBall{nom, diameter + 0.01}).value;
    const double robust = solve_by_mip(g, PolytopeAmbiguity::full_simplex(us)).value;
    robust_gap = std::max(robust_gap, std::abs(wide - robust));

    GameInstance single(g.leader(), FiniteUniverse{{us[0]}});
    const double dr = solve_wasserstein_finite_mip(single, WassersteinBall{
                                                               single.require_nominal(), 0.3})
                          .value;
    double sse = -1e300;
    for (const auto& x : oracle::grid_points(n, n <= 3 ? 200 : 60))
      sse = std::max(sse, oracle::tiebreak_payoff(g.leader(), us[0], x));
    const double lps = sse_multiple_lps(g.leader(), us[0]).value;
    sse_gap = std::max(sse_gap, std::abs(dr - lps));
    // The grid only approaches the SSE from below.
    if (sse > lps + kRobustTol) sse_gap = std::max(sse_gap, sse - lps);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "30 games: theta=0 vs Bayesian %.2e, wide ball vs full simplex %.2e, "
                "singleton vs SSE %.2e",
                bayes_gap, robust_gap, sse_gap);
  return {bayes_gap <= kBayesTol && robust_gap <= kRobustTol && sse_gap <= kRobustTol, buf};
}

Outcome duality() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> size(1, 4), support(1, 6);
  std::uniform_real_distribution<double> expo(1.0, 3.0);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng), m = size(rng);
    const double t = trial % 2 ? 2.0 : expo(rng);
    auto draw = [&] {
      const int k = support(rng);
      std::vector<Matrix> s;
      for (int i = 0; i < k; ++i) s.push_back(oracle::random_matrix(rng, n, m));
      return Distribution{s, oracle::random_weights(rng, k)};
    };
    const auto mu = draw(), nu = draw();
    const double primal = std::pow(wasserstein_primal(mu, nu, t, GroundMetric::frobenius).value, t);
    const double dual = wasserstein_dual(mu, nu, t, GroundMetric::frobenius);
    worst = std::max(worst, std::abs(primal - dual));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "200 pairs, max |W^t - dual| %.2e", worst);
  return {worst <= kDualityTol, buf};
}

// Criteria 4 and 5 share the solves.
std::pair<Outcome, Outcome> incremental_mip_on_inspection() {
  constexpr double theta = 0.1, t = 2.0;
  Outcome c4, c5;
  double worst_gap = 0, worst_probe = -1e300, min_gamma = 1e300;
  int max_iters = 0, runs = 0;
  std::mt19937_64 probe_rng(505);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s : {3, 4})
    for (int k : {1, 2}) {
      const auto g = gen_inspection({s, 1, 1, k, static_cast<std::uint64_t>(40 + 10 * s + k)});
      const auto& nom = g.require_nominal();
      const auto& fam = std::get<InspectionFamily>(g.universe());
      Algorithm1Config cfg;
      cfg.max_iter = kMaxIter;
      cfg.bigm.M = 2.0;
      const auto sol = run_algorithm1(g, WassersteinBall{nom, theta, t}, InspectionOracle(), cfg);
      ++runs;
      max_iters = std::max(max_iters, sol.iterations);
      const double gamma = sol.log.empty() ? -1e300 : sol.log.back().gamma;
      min_gamma = std::min(min_gamma, gamma);
      if (sol.status != SolutionStatus::optimal || gamma < -kGammaTol ||
          sol.iterations > kMaxIter)
        c4.pass = false;

      std::vector<std::pair<double, double>> ab;
      for (const auto& u : nom.support) ab.push_back(family_roles(fam.mask, u));
      const auto cands =
          oracle::family_candidates(fam.mask, nom.support, ab, kFamilySamples, 7 + s * k, t);
      double best = -1e300;
      oracle::for_each_grid_point(g.n(), kGridSteps, [&](const Vector& x) {
        best = std::max(best, oracle::family_inner(g.leader(), fam.mask, cands, nom.weights,
                                                   std::pow(theta, t), x));
      });
      worst_gap = std::max(worst_gap, std::abs(sol.value - best));

      // Certificate: w_j <= lambda d^t(u, nominal_j) + h(x, u) for probes u
      // drawn from the family.
      if (!sol.lambda || !sol.w) {
        c5.pass = false;
        continue;
      }
      for (int j = 0; j < nom.size(); ++j)
        for (int r = 0; r < kProbesPerNominal; ++r) {
          const Matrix u = oracle::family_member(fam.mask, unit(probe_rng), unit(probe_rng));
          const double rhs = *sol.lambda * oracle::dist_pow(u, nom.support[j], t) +
                             oracle::tiebreak_payoff(g.leader(), u, sol.x);
          worst_probe = std::max(worst_probe, (*sol.w)[j] - rhs);
        }
    }
  if (worst_gap > kOracleTol) c4.pass = false;
  if (worst_probe > kProbeTol) c5.pass = false;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d inspection runs, max iterations %d, min final gamma %.2e, max |value - "
                "oracle| %.2e",
                runs, max_iters, min_gamma, worst_gap);
  c4.detail = buf;
  std::snprintf(buf, sizeof buf, "%d probes per nominal, max violation %.2e", kProbesPerNominal,
                worst_probe);
  c5.detail = buf;
  return {c4, c5};
}

Outcome monotonicity() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> size(2, 4), support(1, 3);
  const std::vector<double> radii{0.0, 0.1, 0.25, 0.5, 1.0};
  double rise = -1e300, over_bayes = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_finite_game(rng, size(rng), size(rng), support(rng));
    const double bayes = bayesian_mip(g, g.require_nominal()).value;
    double prev = 1e300;
    for (double theta : radii) {
      const double v = solve_wasserstein_finite_mip(g, WassersteinBall{g.require_nominal(), theta})
                           .value;
      rise = std::max(rise, v - prev);
      over_bayes = std::max(over_bayes, v - bayes);
      prev = v;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "20 games x 5 radii: max increase %.2e, max DR - Bayesian %.2e",
                rise, over_bayes);
  return {rise <= kMonotoneSlack && over_bayes <= kMonotoneSlack, buf};
}

Outcome runtime_trends() {
  auto mean_times = [](ExperimentConfig c) {
    c.repetitions = kTrendSeeds;
    c.workers = 1;
    std::vector<double> xs, ts;
    for (const auto& s : summarize(run_sweep(c))) {
      xs.push_back(s.sweep_value);
      ts.push_back(s.ok == s.runs ? s.mean_time_s : 1e300);
    }
    return std::make_pair(xs, ts);
  };
  ExperimentConfig q = preset("fig2b", Scale::desk);
  q.inspection = {5, 1, 1, 2, 0};
  q.sweep_values = {1, 2, 3};
  ExperimentConfig k = preset("fig2c", Scale::desk);
  k.inspection = {3, 1, 1, 1, 0};
  k.sweep_values = {1, 2, 3, 4};

  const auto [qx, qt] = mean_times(q);
  const auto [kx, kt] = mean_times(k);
  const double rq = spearman(qx, qt), rk = spearman(kx, kt);
  std::string d = "q sweep (s=5) rho " + std::to_string(rq) + " times";
  for (double v : qt) d += " " + std::to_string(v);
  d += "; k sweep (s=3) rho " + std::to_string(rk) + " times";
  for (double v : kt) d += " " + std::to_string(v);
  return {rq >= kMinSpearman && rk >= kMinSpearman, d};
}

Outcome mip_sizes() {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> size(1, 6), support(1, 5);
  int bad = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = size(rng), m = size(rng), k = support(rng);
    const auto g = random_finite_game(rng, n, m, k);
    const auto shape = wasserstein_finite_mip_shape(g, WassersteinBall{g.require_nominal(), 0.2});
    if (shape.continuous != n + k + 1 || shape.binaries != m * k) ++bad;
  }
  return {bad == 0, "10 sizes, " + std::to_string(bad) + " mismatched"};
}

Outcome oracle_cross_check() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0;
  for (int call = 0; call < 20; ++call) {
    const int s = 3 + call % 2, p = 1 + (call / 2) % 2, q = 1 + (call / 4) % 2;
    const auto g = gen_inspection({s, p, q, 2, static_cast<std::uint64_t>(call)});
    const auto& fam = std::get<InspectionFamily>(g.universe());
    const Matrix& nominal = g.require_nominal().support[call % 2];
    Vector x = oracle::random_matrix(rng, g.n(), 1).col(0);
    x /= x.sum();
    SeparationQuery query;
    query.game = &g;
    query.x = x;
    query.lambda = call % 5 == 0 ? 0.0 : 3.0 * unit(rng);
    query.nominal = &nominal;
    const double a = InspectionOracle().separate(query, {}).gamma;
    const double b = BoxFrobeniusOracle(fam.mask).separate(query, {}).gamma;
    worst = std::max(worst, std::abs(a - b));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "20 separation calls, max |gamma difference| %.2e", worst);
  return {worst <= kOracleAgreeTol, buf};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const Outcome& o, double seconds) {
    std::printf("criterion %d: %s  (%.1f s) %s\n", id, o.pass ? "PASS" : "FAIL", seconds,
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };
  auto timed = [&](int id, const std::function<Outcome()>& fn) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, o, std::chrono::duration<double>(Clock::now() - start).count());
  };

  timed(1, method_agreement);
  timed(2, reduction_chain);
  timed(3, duality);
  {
    const auto start = Clock::now();
    std::pair<Outcome, Outcome> r;
    try {
      r = incremental_mip_on_inspection();
    } catch (const std::exception& e) {
      r.first = r.second = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    report(4, r.first, secs);
    report(5, r.second, 0.0);
  }
  timed(6, monotonicity);
  timed(7, runtime_trends);
  timed(8, mip_sizes);
  timed(9, oracle_cross_check);
  return all ? 0 : 1;
}
