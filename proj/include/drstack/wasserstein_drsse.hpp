#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "drstack/ambiguity.hpp"
#include "drstack/context.hpp"
#include "drstack/solution.hpp"
#include "drstack/solver/program.hpp"

namespace drstack {

/// B_x(a): actions giving the leader strictly more than a at x, as a 0/1
/// flag per action. `tol` absorbs rounding in the comparison.
std::vector<char> leader_better_actions(const Matrix& u_l, const MixedStrategy& x, int a,
                                        double tol = 1e-9);

struct SeparationQuery {
  const GameInstance* game = nullptr;
  MixedStrategy x;
  double lambda = 0.0;
  const FollowerUtility* nominal = nullptr;
  double t = 2.0;
  GroundMetric metric = GroundMetric::frobenius;
  double epsilon_strict = 1e-6;
};

struct OracleResult {
  /// lambda d^t(violator, nominal) + u_l(x, action), minimised over actions.
  double gamma = 0.0;
  FollowerUtility violator;
  int action = -1;
  double solver_time_s = 0.0;
};

/// Solves the separation subproblem: for each follower action a, the
/// cheapest utility (in lambda d^t to the nominal) under which a is a best
/// response at x that the follower prefers strictly over every action in
/// B_x(a). Actions whose region is empty are skipped.
class SeparationOracle {
 public:
  virtual ~SeparationOracle() = default;
  virtual std::string_view name() const = 0;
  virtual bool supports(const GameInstance& g, const WassersteinBall& ball) const = 0;
  virtual OracleResult separate(const SeparationQuery& q, const Context& ctx) const;

 protected:
  struct Candidate {
    double distance_term;  // lambda d^t(violator, nominal)
    FollowerUtility violator;
    double solver_time_s = 0.0;
  };
  /// Inner infimum for one action; nullopt when its region is empty.
  virtual std::optional<Candidate> inner(const SeparationQuery& q, int a,
                                         const std::vector<char>& better,
                                         const Context& ctx) const = 0;
};

/// Box universe [0,1]^{n x m}, Frobenius metric, t = 2: one convex QP in
/// n*m variables per action. With a mask, the search is restricted to the
/// two-valued family of that mask through equality rows.
class BoxFrobeniusOracle final : public SeparationOracle {
 public:
  explicit BoxFrobeniusOracle(std::optional<Matrix> family_mask = std::nullopt)
      : mask_(std::move(family_mask)) {}
  std::string_view name() const override { return "box-frobenius"; }
  bool supports(const GameInstance& g, const WassersteinBall& ball) const override;

 protected:
  std::optional<Candidate> inner(const SeparationQuery& q, int a, const std::vector<char>& better,
                                 const Context& ctx) const override;

 private:
  std::optional<Matrix> mask_;
};

/// Inspection family: one QP in (alpha, beta) per action.
class InspectionOracle final : public SeparationOracle {
 public:
  std::string_view name() const override { return "inspection"; }
  bool supports(const GameInstance& g, const WassersteinBall& ball) const override;

 protected:
  std::optional<Candidate> inner(const SeparationQuery& q, int a, const std::vector<char>& better,
                                 const Context& ctx) const override;
};

/// Finite universe: exact minimum of lambda d^t(u_i, nominal) + h(x, u_i)
/// over the universe's utilities.
class FiniteSupportOracle final : public SeparationOracle {
 public:
  std::string_view name() const override { return "finite"; }
  bool supports(const GameInstance& g, const WassersteinBall& ball) const override;
  OracleResult separate(const SeparationQuery& q, const Context& ctx) const override;

 protected:
  std::optional<Candidate> inner(const SeparationQuery&, int, const std::vector<char>&,
                                 const Context&) const override {
    return std::nullopt;
  }
};

/// The natural oracle for the game's universe.
std::shared_ptr<const SeparationOracle> default_oracle(const GameInstance& g);

struct Algorithm1Config {
  BigMConfig bigm;
  double tol_gamma = 1e-6;
  int max_iter = 200;
  /// Violators this close (Frobenius) to an existing list member are dropped.
  double dedup_tol = 1e-8;
  /// Wall-clock guard across all iterations.
  double time_limit_s = solver::kInfinity;
};

/// Utility lists E_{tau,j}, one per nominal point.
struct MasterState {
  int tau = 1;
  std::vector<std::vector<FollowerUtility>> lists;

  static MasterState initial(const WassersteinBall& ball);
  int total() const;
};

struct MasterProgram {
  solver::MixedIntegerProgram mip;
  int x0 = 0;
  int lambda = 0;
  int w0 = 0;
  /// delta[j][e][a] for entry e of list j.
  std::vector<std::vector<std::vector<int>>> delta;
  int br_rows = 0;
  int value_rows = 0;
  int onehot_rows = 0;
};

/// Master MIP: minimise lambda theta^t - sum_j nu_j w_j over the current
/// lists. Row counts are asserted: m^2 |E| best-response rows,
/// m sum_j |E_j| value rows and |E| one-hot rows.
MasterProgram build_master_mip(const MasterState& state, const GameInstance& g,
                               const WassersteinBall& ball, const BigMConfig& cfg);

OracleResult separate(const SeparationOracle& oracle, const GameInstance& g,
                      const WassersteinBall& ball, const MixedStrategy& x, double lambda, int j,
                      double epsilon_strict, const Context& ctx = {});

/// Incremental MIP with separation. The returned solution is the last
/// master solution; status is `unconverged` when max_iter is exhausted or
/// no new violator could be added while the gap remains, `limit_hit` when
/// the time guard fires.
DrsssSolution run_algorithm1(const GameInstance& g, const WassersteinBall& ball,
                             const SeparationOracle& oracle, const Algorithm1Config& cfg = {},
                             const Context& ctx = {});

/// Iteration log as CSV with a header row.
void write_iteration_log(const std::filesystem::path& path,
                         const std::vector<IterationRecord>& log);

}  // namespace drstack
