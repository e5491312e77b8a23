#include <doctest.h>

#include <random>
#include <sstream>

#include "backends.hpp"
#include "drstack/solver/lp_writer.hpp"

using namespace drstack::solver;
using drstack::testing::all_backends;

TEST_CASE("lp: bounded maximisation") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    LinearProgram p;
    const int x = p.add_variable("x");
    p.add_constraint({{x, 1.0}}, Relation::less_equal, 3.0);
    p.set_objective(Sense::maximize, {{x, 1.0}});
    const auto r = be->solve_lp(p);
    REQUIRE(r.optimal());
    CHECK(r.value(x) == doctest::Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("lp: infeasible bounds") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    LinearProgram p;
    const int x = p.add_variable("x", -kInfinity, kInfinity);
    p.add_constraint({{x, 1.0}}, Relation::greater_equal, 5.0);
    p.add_constraint({{x, 1.0}}, Relation::less_equal, 4.0);
    p.set_objective(Sense::minimize, {{x, 1.0}});
    const auto r = be->solve_lp(p);
    CHECK(r.status == Status::infeasible);
    CHECK(r.values.empty());
  }
}

TEST_CASE("lp: simplex face") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    LinearProgram p;
    const int x = p.add_variable("x");
    const int y = p.add_variable("y");
    p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::less_equal, 1.0);
    p.set_objective(Sense::maximize, {{x, 1.0}, {y, 1.0}});
    const auto r = be->solve_lp(p);
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("lp: unbounded and free variables") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    LinearProgram p;
    const int x = p.add_variable("x", -kInfinity, kInfinity);
    p.set_objective(Sense::maximize, {{x, 1.0}});
    p.add_constraint({{x, 1.0}}, Relation::greater_equal, 0.0);
    const auto r = be->solve_lp(p);
    CHECK(r.status == Status::unbounded);

    LinearProgram f;
    const int a = f.add_variable("a", -kInfinity, kInfinity);
    const int b = f.add_variable("b", -kInfinity, 2.0);
    f.add_constraint({{a, 1.0}, {b, 1.0}}, Relation::equal, -1.0);
    f.add_constraint({{a, 1.0}}, Relation::greater_equal, -5.0);
    f.set_objective(Sense::minimize, {{a, 2.0}, {b, 1.0}});
    const auto s = be->solve_lp(f);
    REQUIRE(s.optimal());
    // b = -1 - a <= 2 forces a >= -3; the objective reduces to a - 1.
    CHECK(s.value(a) == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(s.objective == doctest::Approx(-4.0).epsilon(1e-9));
  }
}

TEST_CASE("milp: trivial binaries") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    {
      MixedIntegerProgram p;
      const int d = p.add_binary("d");
      p.set_objective(Sense::maximize, {{d, 1.0}});
      const auto r = be->solve_milp(p);
      REQUIRE(r.optimal());
      CHECK(r.value(d) == doctest::Approx(1.0));
    }
    {
      MixedIntegerProgram p;
      const int x = p.add_variable("x", -kInfinity, 10.0);
      const int d = p.add_binary("d");
      // x <= 10 d + 3 (1 - d)
      p.add_constraint({{x, 1.0}, {d, -7.0}}, Relation::less_equal, 3.0);
      p.set_objective(Sense::maximize, {{x, 1.0}});
      const auto r = be->solve_milp(p);
      REQUIRE(r.optimal());
      CHECK(r.value(x) == doctest::Approx(10.0));
      CHECK(r.value(d) == doctest::Approx(1.0));
    }
    {
      MixedIntegerProgram p;
      const int d1 = p.add_binary("d1");
      const int d2 = p.add_binary("d2");
      p.add_constraint({{d1, 1.0}, {d2, 1.0}}, Relation::less_equal, 1.0);
      p.set_objective(Sense::maximize, {{d1, 2.0}, {d2, 3.0}});
      const auto r = be->solve_milp(p);
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(3.0));
    }
  }
}

TEST_CASE("qp: trivial programs and KKT") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    {
      // (x-1)^2 = x^2 - 2x + 1
      QuadraticProgram p;
      const int x = p.add_variable("x", -kInfinity, kInfinity);
      p.add_constraint({{x, 1.0}}, Relation::greater_equal, 2.0);
      p.set_objective(Sense::minimize, {{x, -2.0}}, 1.0);
      p.add_quadratic(x, x, 2.0);
      const auto r = be->solve_qp(p);
      REQUIRE(r.optimal());
      CHECK(r.value(x) == doctest::Approx(2.0).epsilon(1e-7));
      CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-7));
      CHECK(kkt_residual(p, r) <= kKktTol);
      REQUIRE(r.row_duals.size() == 1);
      CHECK(r.row_duals[0] == doctest::Approx(2.0).epsilon(1e-6));
    }
    {
      QuadraticProgram p;
      const int x = p.add_variable("x", -kInfinity, kInfinity);
      const int y = p.add_variable("y", -kInfinity, kInfinity);
      p.set_objective(Sense::minimize, {});
      p.add_quadratic(x, x, 2.0);
      p.add_quadratic(y, y, 2.0);
      const auto r = be->solve_qp(p);
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(0.0));
      CHECK(kkt_residual(p, r) <= kKktTol);
    }
    {
      QuadraticProgram p;
      const int x = p.add_variable("x", 0.0, 1.0);
      p.set_objective(Sense::minimize, {{x, -1.0}}, 0.25);
      p.add_quadratic(x, x, 2.0);
      const auto r = be->solve_qp(p);
      REQUIRE(r.optimal());
      CHECK(r.value(x) == doctest::Approx(0.5).epsilon(1e-7));
      CHECK(r.objective == doctest::Approx(0.0));
      CHECK(kkt_residual(p, r) <= kKktTol);
    }
    {
      // Upper bound active: min (x-3)^2, x <= 1 gives a negative column dual.
      QuadraticProgram p;
      const int x = p.add_variable("x", 0.0, 1.0);
      p.set_objective(Sense::minimize, {{x, -6.0}}, 9.0);
      p.add_quadratic(x, x, 2.0);
      const auto r = be->solve_qp(p);
      REQUIRE(r.optimal());
      CHECK(r.value(x) == doctest::Approx(1.0));
      CHECK(r.col_duals[0] == doctest::Approx(-4.0).epsilon(1e-6));
      CHECK(kkt_residual(p, r) <= kKktTol);
    }
  }
}

TEST_CASE("qp: non-convex programs are rejected") {
  for (const auto& be : all_backends()) {
    QuadraticProgram p;
    const int x = p.add_variable("x", 0.0, 1.0);
    p.add_quadratic(x, x, -1.0);
    CHECK_THROWS_AS(be->solve_qp(p), NonConvexRejected);
  }
}

TEST_CASE("qp: semidefinite Hessian with a linear descent direction") {
  for (const auto& be : all_backends()) {
    CAPTURE(be->name());
    // min (x-0.2)^2 - y  s.t. x + y <= 1, y >= 0, x in [0,1]
    QuadraticProgram p;
    const int x = p.add_variable("x", 0.0, 1.0);
    const int y = p.add_variable("y", 0.0, kInfinity);
    p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::less_equal, 1.0);
    p.set_objective(Sense::minimize, {{x, -0.4}, {y, -1.0}}, 0.04);
    p.add_quadratic(x, x, 2.0);
    const auto r = be->solve_qp(p);
    REQUIRE(r.optimal());
    CHECK(kkt_residual(p, r) <= kKktTol);
    CHECK(r.value(x) + r.value(y) == doctest::Approx(1.0));
  }
}

TEST_CASE("property: random LPs agree across backends and accept hand-built points") {
  const auto backends = all_backends();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram p;
    const int n = 2 + trial % 5;
    std::vector<double> feasible(n);
    for (int j = 0; j < n; ++j) {
      p.add_variable("x", -1.0, 2.0);
      feasible[j] = 0.5 * (u(rng) + 1.0);
    }
    for (int i = 0; i < n + 1; ++i) {
      std::vector<Term> row;
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = u(rng);
        row.push_back({j, a});
        lhs += a * feasible[j];
      }
      const Relation rel = i % 3 == 0 ? Relation::greater_equal : Relation::less_equal;
      p.add_constraint(row, rel, rel == Relation::less_equal ? lhs + 0.1 : lhs - 0.1);
    }
    std::vector<Term> obj;
    for (int j = 0; j < n; ++j) obj.push_back({j, u(rng)});
    p.set_objective(trial % 2 ? Sense::maximize : Sense::minimize, obj);
    CHECK(p.max_violation(feasible) <= 1e-12);

    double first = 0.0;
    for (std::size_t b = 0; b < backends.size(); ++b) {
      const auto r = backends[b]->solve_lp(p);
      REQUIRE(r.optimal());
      const auto again = backends[b]->solve_lp(p);
      CHECK(again.objective == doctest::Approx(r.objective).epsilon(1e-7));
      if (b == 0)
        first = r.objective;
      else
        CHECK(r.objective == doctest::Approx(first).epsilon(1e-7));
      const double hand = p.evaluate_linear(feasible);
      if (p.sense() == Sense::maximize)
        CHECK(r.objective >= hand - 1e-7);
      else
        CHECK(r.objective <= hand + 1e-7);
    }
  }
}

TEST_CASE("property: random knapsacks match exhaustive search") {
  const auto backends = all_backends();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 6;
    MixedIntegerProgram p;
    std::vector<double> value(n), weight(n);
    std::vector<Term> obj, row;
    for (int j = 0; j < n; ++j) {
      p.add_binary("d");
      value[j] = u(rng);
      weight[j] = u(rng);
      obj.push_back({j, value[j]});
      row.push_back({j, weight[j]});
    }
    const double cap = 0.4 * n * 0.55;
    p.add_constraint(row, Relation::less_equal, cap);
    p.set_objective(Sense::maximize, obj);
    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double v = 0.0, w = 0.0;
      for (int j = 0; j < n; ++j)
        if (mask >> j & 1) v += value[j], w += weight[j];
      if (w <= cap) best = std::max(best, v);
    }
    for (const auto& be : backends) {
      const auto r = be->solve_milp(p);
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(best).epsilon(1e-9));
    }
  }
}

TEST_CASE("lp writer emits the CPLEX sections") {
  MixedIntegerProgram p;
  const int x = p.add_variable("x", 0.0, 1.0);
  const int d = p.add_binary("delta");
  const int w = p.add_variable("w", -kInfinity, kInfinity);
  p.add_constraint({{x, 1.0}, {d, -2.0}}, Relation::less_equal, 0.5);
  p.add_constraint({{w, 1.0}}, Relation::equal, 0.0);
  p.set_objective(Sense::maximize, {{x, 1.0}, {w, -1.0}});
  std::ostringstream os;
  write_lp(os, p);
  const std::string s = os.str();
  for (const char* section : {"Maximize", "Subject To", "Bounds", "Binaries", "End"})
    CHECK(s.find(section) != std::string::npos);
  CHECK(s.find("free") != std::string::npos);
}
