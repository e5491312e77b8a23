#include <doctest.h>

#include <random>

#include "backends.hpp"
#include "drstack/baselines.hpp"
#include "drstack/finite_drsse.hpp"
#include "drstack/games.hpp"
#include "oracles.hpp"

using namespace drstack;
using drstack::testing::all_backends;

namespace {

double grid_robust(const Matrix& ul, const std::vector<Matrix>& us, int steps) {
  double best = -1e300;
  oracle::for_each_grid_point(static_cast<int>(ul.rows()), steps, [&](const Vector& x) {
    double v = 1e300;
    for (const auto& u : us) v = std::min(v, oracle::tiebreak_payoff(ul, u, x));
    best = std::max(best, v);
  });
  return best;
}

double grid_bayes(const Matrix& ul, const std::vector<Matrix>& us, const std::vector<double>& nu,
                  int steps) {
  double best = -1e300;
  oracle::for_each_grid_point(static_cast<int>(ul.rows()), steps, [&](const Vector& x) {
    double v = 0;
    for (std::size_t i = 0; i < us.size(); ++i) v += nu[i] * oracle::tiebreak_payoff(ul, us[i], x);
    best = std::max(best, v);
  });
  return best;
}

Context ctx_for(const solver::BackendPtr& b) {
  Context c;
  c.backend = b;
  return c;
}

}  // namespace

TEST_CASE("SSE on the textbook 2x2 game") {
  Matrix ul(2, 2), uf(2, 2);
  ul << 1, 0, 0, 0;
  uf << 0, 1, 1, 0;
  GameInstance g(ul, FiniteUniverse{{uf}});
  const auto amb = PolytopeAmbiguity::singleton({uf}, {1.0});
  for (const auto& b : all_backends()) {
    const auto ctx = ctx_for(b);
    const auto e = solve_by_enumeration(g, amb, ctx);
    const double oracle_v = grid_robust(ul, {uf}, 200);
    CHECK(e.value == doctest::Approx(oracle_v).epsilon(5e-3));
    CHECK(e.value >= oracle_v - 1e-9);
    CHECK(solve_by_mip(g, amb, {}, ctx).value == doctest::Approx(e.value).epsilon(1e-6));
    CHECK(sse_multiple_lps(ul, uf, ctx).value == doctest::Approx(e.value).epsilon(1e-6));
    CHECK(bayesian_mip(g, Distribution{{uf}, {1.0}}, {}, ctx).value ==
          doctest::Approx(e.value).epsilon(1e-6));
  }
}

TEST_CASE("robust value equals the grid oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const Matrix ul = oracle::random_matrix(rng, 2, 3);
    std::vector<Matrix> us{oracle::random_matrix(rng, 2, 3), oracle::random_matrix(rng, 2, 3)};
    GameInstance g(ul, FiniteUniverse{us});
    const auto amb = PolytopeAmbiguity::full_simplex(us);
    const auto e = solve_by_enumeration(g, amb);
    const double grid = grid_robust(ul, us, 2000);
    CHECK(e.value >= grid - 1e-7);
    CHECK(e.value <= grid + 5e-3);
    CHECK(solve_by_mip(g, amb).value == doctest::Approx(e.value).epsilon(1e-5));
    // The reported strategy attains the reported value.
    CHECK(leader_worstcase_value(g, amb, e.x, 1e-7) == doctest::Approx(e.value).epsilon(1e-6));
  }
}

TEST_CASE("duplicated support changes nothing") {
  std::mt19937_64 rng(4);
  const Matrix ul = oracle::random_matrix(rng, 3, 3), uf = oracle::random_matrix(rng, 3, 3);
  GameInstance one(ul, FiniteUniverse{{uf}}), two(ul, FiniteUniverse{{uf, uf}});
  const double v1 = solve_by_mip(one, PolytopeAmbiguity::full_simplex({uf})).value;
  CHECK(solve_by_mip(two, PolytopeAmbiguity::full_simplex({uf, uf})).value ==
        doctest::Approx(v1).epsilon(1e-6));
  CHECK(solve_by_enumeration(two, PolytopeAmbiguity::singleton({uf, uf}, {0.3, 0.7})).value ==
        doctest::Approx(v1).epsilon(1e-6));
}

TEST_CASE("Wasserstein methods agree with each other and with the dual oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2, m = 2 + trial % 2, k = 1 + trial % 3;
    const Matrix ul = oracle::random_matrix(rng, n, m);
    std::vector<Matrix> us;
    for (int i = 0; i < k; ++i) us.push_back(oracle::random_matrix(rng, n, m));
    const auto nu = oracle::random_weights(rng, k);
    GameInstance g(ul, FiniteUniverse{us}, Distribution{us, nu});
    WassersteinBall ball{Distribution{us, nu}, 0.1 + 0.2 * (trial % 3)};
    for (const auto& b : all_backends()) {
      const auto ctx = ctx_for(b);
      const auto e = solve_by_enumeration(g, ball, ctx);
      const auto mip = solve_by_mip(g, ball, {}, ctx);
      const auto direct = solve_wasserstein_finite_mip(g, ball, {}, ctx);
      const auto lp = enumeration_lp_baseline(g, ball, {}, ctx);
      CHECK(mip.value == doctest::Approx(e.value).epsilon(1e-5));
      CHECK(direct.value == doctest::Approx(e.value).epsilon(1e-5));
      CHECK(lp.value == doctest::Approx(e.value).epsilon(1e-5));
      const double grid = oracle::grid_wasserstein_value(ul, us, nu, ball.theta, 2, 2000);
      CHECK(e.value >= grid - 1e-7);
      CHECK(e.value <= grid + 5e-3);
    }
  }
}

TEST_CASE("radius zero is the Bayesian problem") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix ul = oracle::random_matrix(rng, 2, 3);
    std::vector<Matrix> us{oracle::random_matrix(rng, 2, 3), oracle::random_matrix(rng, 2, 3)};
    const auto nu = oracle::random_weights(rng, 2);
    GameInstance g(ul, FiniteUniverse{us});
    const double bayes = bayesian_mip(g, Distribution{us, nu}).value;
    CHECK(bayes >= grid_bayes(ul, us, nu, 2000) - 1e-7);
    CHECK(bayes <= grid_bayes(ul, us, nu, 2000) + 5e-3);
    WassersteinBall ball{Distribution{us, nu}, 0.0};
    CHECK(solve_wasserstein_finite_mip(g, ball).value == doctest::Approx(bayes).epsilon(1e-6));
    CHECK(solve_by_enumeration(g, ball).value == doctest::Approx(bayes).epsilon(1e-6));
    CHECK(enumeration_lp_baseline(g, ball).value == doctest::Approx(bayes).epsilon(1e-6));
  }
}

TEST_CASE("Bayesian value ignores zero-weight utilities") {
  std::mt19937_64 rng(8);
  const Matrix ul = oracle::random_matrix(rng, 3, 2);
  const Matrix u1 = oracle::random_matrix(rng, 3, 2), u2 = oracle::random_matrix(rng, 3, 2);
  const double a =
      bayesian_mip(GameInstance(ul, FiniteUniverse{{u1, u2}}), Distribution{{u1, u2}, {1.0, 0.0}})
          .value;
  CHECK(a == doctest::Approx(sse_multiple_lps(ul, u1).value).epsilon(1e-6));
}

TEST_CASE("finite Wasserstein MIP shape") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3, m = 2 + trial / 2 % 3, k = 1 + trial % 3;
    std::vector<Matrix> us;
    for (int i = 0; i < k; ++i) us.push_back(oracle::random_matrix(rng, n, m));
    GameInstance g(oracle::random_matrix(rng, n, m), FiniteUniverse{us});
    WassersteinBall ball{Distribution::uniform(us), 0.1};
    const auto s = wasserstein_finite_mip_shape(g, ball);
    CHECK(s.continuous == n + k + 1);
    CHECK(s.binaries == m * k);
    CHECK(s.rows == m * m * k + m * k * k + k + 1);
  }
}

TEST_CASE("guards and errors") {
  std::vector<Matrix> us(6, Matrix::Constant(2, 10, 0.5));
  GameInstance g(Matrix::Zero(2, 10), FiniteUniverse{us});
  CHECK_THROWS_AS(solve_by_enumeration(g, PolytopeAmbiguity::full_simplex(us)), EnumerationGuard);
  BigMConfig bad;
  bad.M = 0.0;
  CHECK_THROWS(bad.validate());
  GameInstance box(Matrix::Zero(2, 2), BoxUniverse{});
  WassersteinBall ball{Distribution{{Matrix::Zero(2, 2)}, {1.0}}, 0.1};
  CHECK_THROWS(solve_wasserstein_finite_mip(box, ball));
  WassersteinBall neg = ball;
  neg.theta = -1;
  CHECK_THROWS(neg.validate());
}
