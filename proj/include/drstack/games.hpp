#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "drstack/game.hpp"

namespace drstack {

/// Portable random source: std::mt19937_64 with explicitly defined
/// derivations, so instances reproduce across standard libraries.
///   uniform01(): (next() >> 11) * 2^-53, in [0,1)
///   uniform(lo, hi): lo + (hi - lo) * uniform01()
///   randint(a, b): inclusive, by rejection sampling on next() % span
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  long randint(long a, long b);

 private:
  std::mt19937_64 engine_;
};

struct InspectionParams {
  int s = 3;
  int p = 1;
  int q = 1;
  int k = 1;
  std::uint64_t seed = 0;
  void validate() const;
};

struct IntRange {
  long lo;
  long hi;
};

struct CournotParams {
  int n = 4;
  int k = 1;
  std::uint64_t seed = 0;
  double intercept = 75.0;
  IntRange slope{1, 10};
  IntRange leader_fixed{10, 40};
  IntRange leader_marginal{10, 20};
  IntRange follower_fixed{2, 20};
  IntRange follower_marginal{1, 5};
  void validate() const;
};

struct SyntheticParams {
  int n = 2;
  int m = 2;
  int k = 1;
  std::uint64_t seed = 0;
  void validate() const;
};

/// Subsets of {0..s-1} with 1..max_size elements, ordered by size then
/// lexicographically; each subset as a bit mask.
std::vector<unsigned> ordered_subsets(int s, int max_size);

/// Inspection game: leader payoff 0.5 where the chosen sets intersect and 0
/// otherwise; nominal follower payoffs alpha ~ U[0.3,0.6) on intersecting
/// cells and beta ~ U[0.7,1) elsewhere; uniform nominal weights.
GameInstance gen_inspection(const InspectionParams& p);

/// Cournot duopoly on the quantity grid {1..n}; payoffs P(y1+y2) y_i - C_i(y_i)
/// min-max normalised per matrix. Each follower utility uses its own demand
/// slope and cost draws. Nominal weights are a random probability vector.
GameInstance gen_cournot(const CournotParams& p);

/// iid U[0,1) leader and follower matrices with a random nominal weight vector.
GameInstance gen_synthetic(const SyntheticParams& p);

/// Weights u_i / sum u with u_i ~ U(0,1].
std::vector<double> random_probability_vector(Rng& rng, int k);

}  // namespace drstack
