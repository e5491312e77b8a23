#include "formulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drstack::detail {

int add_leader_simplex(LinearProgram& p, int n) {
  const int x0 = p.num_variables();
  std::vector<Term> row;
  for (int i = 0; i < n; ++i) {
    p.add_variable("x" + std::to_string(i), 0.0, 1.0);
    row.push_back({x0 + i, 1.0});
  }
  p.add_constraint(row, Relation::equal, 1.0, "simplex");
  return x0;
}

std::vector<Term> payoff_terms(const Matrix& u, int x0, int a, double coef) {
  std::vector<Term> terms;
  for (int i = 0; i < u.rows(); ++i)
    if (u(i, a) != 0.0) terms.push_back({x0 + i, coef * u(i, a)});
  return terms;
}

void add_fixed_br_rows(LinearProgram& p, const Matrix& u, int x0, int a) {
  for (int b = 0; b < u.cols(); ++b) {
    if (b == a) continue;
    std::vector<Term> row;
    for (int i = 0; i < u.rows(); ++i) {
      const double c = u(i, a) - u(i, b);
      if (c != 0.0) row.push_back({x0 + i, c});
    }
    p.add_constraint(row, Relation::greater_equal, 0.0);
  }
}

void add_bigm_br_rows(LinearProgram& p, const Matrix& u, int x0, const std::vector<int>& delta,
                      double M, bool include_trivial) {
  for (int a = 0; a < u.cols(); ++a)
    for (int b = 0; b < u.cols(); ++b) {
      if (a == b && !include_trivial) continue;
      std::vector<Term> row;
      for (int i = 0; i < u.rows(); ++i) {
        const double c = u(i, a) - u(i, b);
        if (c != 0.0) row.push_back({x0 + i, c});
      }
      row.push_back({delta[a], -M});
      p.add_constraint(row, Relation::greater_equal, -M);
    }
}

MixedStrategy extract_strategy(const std::vector<double>& values, int x0, int n) {
  MixedStrategy x(n);
  for (int i = 0; i < n; ++i) x[i] = std::max(values[x0 + i], 0.0);
  const double s = x.sum();
  if (s > 0) x /= s;
  return x;
}

int selected_action(const std::vector<double>& values, const std::vector<int>& delta) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(delta.size()); ++a)
    if (values[delta[a]] > values[delta[best]]) best = a;
  return best;
}

void verify_mapping(const std::vector<FollowerUtility>& utilities, const MixedStrategy& x,
                    const BestResponseMapping& mapping, double tol) {
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    const Vector v = expected_payoffs(utilities[i], x);
    if (v[mapping[i]] < v.maxCoeff() - tol)
      throw BigMViolation("selected action " + std::to_string(mapping[i]) + " for utility " +
                          std::to_string(i) + " is not a best response; increase M");
  }
}

long enumeration_count(int m, int k) {
  const double c = std::pow(static_cast<double>(m), static_cast<double>(k));
  if (c > kEnumerationLimit)
    throw EnumerationGuard("m^k = " + std::to_string(m) + "^" + std::to_string(k) +
                           " exceeds the enumeration guard");
  return std::lround(c);
}

BestResponseMapping decode_mapping(long index, int m, int k) {
  BestResponseMapping z(k);
  for (int i = 0; i < k; ++i) {
    z[i] = static_cast<int>(index % m);
    index /= m;
  }
  return z;
}

DrsssSolution limit_hit_solution(double solver_time_s, std::string note) {
  DrsssSolution s;
  s.status = SolutionStatus::limit_hit;
  s.value = std::numeric_limits<double>::quiet_NaN();
  s.solver_time_s = solver_time_s;
  s.note = std::move(note);
  return s;
}

}  // namespace drstack::detail
