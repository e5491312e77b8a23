#include "drstack/games.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace drstack {

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

long Rng::randint(long a, long b) {
  if (b < a) throw std::invalid_argument("randint: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(b - a) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do v = next();
  while (v >= limit);
  return a + static_cast<long>(v % span);
}

void InspectionParams::validate() const {
  if (s <= 0 || s > 8) throw std::invalid_argument("inspection: s must be in 1..8");
  if (p <= 0 || p > s || q <= 0 || q > s)
    throw std::invalid_argument("inspection: p and q must be in 1..s");
  if (k < 1) throw std::invalid_argument("inspection: k must be positive");
}

void CournotParams::validate() const {
  if (n < 2) throw std::invalid_argument("cournot: n must be at least 2");
  if (k < 1) throw std::invalid_argument("cournot: k must be positive");
  for (const IntRange& r : {slope, leader_fixed, leader_marginal, follower_fixed, follower_marginal})
    if (r.hi < r.lo) throw std::invalid_argument("cournot: empty coefficient range");
}

void SyntheticParams::validate() const {
  if (n < 1 || m < 1 || k < 1) throw std::invalid_argument("synthetic: n, m, k must be positive");
}

std::vector<unsigned> ordered_subsets(int s, int max_size) {
  std::vector<unsigned> out;
  for (int size = 1; size <= max_size; ++size)
    for (unsigned mask = 0; mask < (1u << s); ++mask)
      if (std::popcount(mask) == size) out.push_back(mask);
  // Within one size, increasing bit masks are not lexicographic over sorted
  // element lists; sort by the element sequence instead.
  auto elements = [s](unsigned mask) {
    std::vector<int> e;
    for (int i = 0; i < s; ++i)
      if (mask >> i & 1u) e.push_back(i);
    return e;
  };
  std::stable_sort(out.begin(), out.end(), [&](unsigned a, unsigned b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return elements(a) < elements(b);
  });
  return out;
}

std::vector<double> random_probability_vector(Rng& rng, int k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& v : w) {
    v = 1.0 - rng.uniform01();  // (0,1]
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

GameInstance gen_inspection(const InspectionParams& p) {
  p.validate();
  const auto leader = ordered_subsets(p.s, p.p);
  const auto follower = ordered_subsets(p.s, p.q);
  const int n = static_cast<int>(leader.size()), m = static_cast<int>(follower.size());
  Matrix mask(n, m);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) mask(i, a) = (leader[i] & follower[a]) ? 1.0 : 0.0;
  InspectionFamily family{mask};
  Rng rng(p.seed);
  std::vector<FollowerUtility> nominals;
  for (int j = 0; j < p.k; ++j) {
    const double alpha = rng.uniform(0.3, 0.6);
    const double beta = rng.uniform(0.7, 1.0);
    nominals.push_back(family.member(alpha, beta));
  }
  return GameInstance(0.5 * mask, family, Distribution::uniform(std::move(nominals)));
}

namespace {

Matrix min_max_normalise(Matrix u) {
  const double lo = u.minCoeff(), hi = u.maxCoeff();
  if (hi - lo <= 0.0) return Matrix::Zero(u.rows(), u.cols());
  return (u.array() - lo) / (hi - lo);
}

}  // namespace

GameInstance gen_cournot(const CournotParams& p) {
  p.validate();
  Rng rng(p.seed);
  const int n = p.n;
  auto payoff = [&](double slope, double fixed, double marginal, bool leader_side) {
    Matrix u(n, n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        const double y1 = i + 1, y2 = a + 1;
        const double own = leader_side ? y1 : y2;
        u(i, a) = (p.intercept - slope * (y1 + y2)) * own - (fixed + marginal * own);
      }
    return min_max_normalise(u);
  };
  const double slope = rng.randint(p.slope.lo, p.slope.hi);
  const double lf = rng.randint(p.leader_fixed.lo, p.leader_fixed.hi);
  const double lm = rng.randint(p.leader_marginal.lo, p.leader_marginal.hi);
  Matrix u_l = payoff(slope, lf, lm, true);
  std::vector<FollowerUtility> us;
  for (int j = 0; j < p.k; ++j) {
    const double fs = rng.randint(p.slope.lo, p.slope.hi);
    const double ff = rng.randint(p.follower_fixed.lo, p.follower_fixed.hi);
    const double fm = rng.randint(p.follower_marginal.lo, p.follower_marginal.hi);
    us.push_back(payoff(fs, ff, fm, false));
  }
  Distribution nominal{us, random_probability_vector(rng, p.k)};
  return GameInstance(std::move(u_l), FiniteUniverse{std::move(us)}, std::move(nominal));
}

GameInstance gen_synthetic(const SyntheticParams& p) {
  p.validate();
  Rng rng(p.seed);
  auto draw = [&] {
    Matrix u(p.n, p.m);
    for (int i = 0; i < p.n; ++i)
      for (int a = 0; a < p.m; ++a) u(i, a) = rng.uniform01();
    return u;
  };
  Matrix u_l = draw();
  std::vector<FollowerUtility> us;
  for (int j = 0; j < p.k; ++j) us.push_back(draw());
  Distribution nominal{us, random_probability_vector(rng, p.k)};
  return GameInstance(std::move(u_l), FiniteUniverse{std::move(us)}, std::move(nominal));
}

}  // namespace drstack
