#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "dense_simplex.hpp"

namespace drstack::solver::detail {
namespace {

constexpr long kMaxNodes = 2'000'000;

struct Node {
  std::vector<std::pair<int, double>> fixes;
  double parent_bound = -kInfinity;  // minimisation sense
};

/// Node program with fixed variables substituted out and rows dropped that
/// the remaining bounds already satisfy. Deep in the tree most big-M rows
/// are switched off this way, which keeps node LPs small.
struct Reduced {
  LinearProgram lp;
  std::vector<int> column;  // original variable -> reduced index, -1 if fixed
  bool infeasible = false;
};

struct Bounds {
  std::vector<double> lower, upper;
};

// Fixes binaries whose other value would violate some row given the current
// activity bounds. Returns false when a row cannot be satisfied at all.
bool propagate(const MixedIntegerProgram& p, Bounds& b) {
  constexpr double kTol = 1e-9;
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (const auto& c : p.constraints()) {
      double lo = 0.0, hi = 0.0;
      for (const auto& t : c.terms) {
        const double l = b.lower[t.var], u = b.upper[t.var];
        lo += t.coef > 0 ? t.coef * l : t.coef * u;
        hi += t.coef > 0 ? t.coef * u : t.coef * l;
      }
      const double tol = kTol * std::max(1.0, std::abs(c.rhs));
      const bool check_lo = c.relation != Relation::greater_equal && std::isfinite(lo);
      const bool check_hi = c.relation != Relation::less_equal && std::isfinite(hi);
      if ((check_lo && lo > c.rhs + kFeasibilityTol) ||
          (check_hi && hi < c.rhs - kFeasibilityTol))
        return false;
      for (const auto& t : c.terms) {
        const int j = t.var;
        if (!p.is_binary(j) || b.upper[j] - b.lower[j] < 0.5) continue;
        const double span = std::abs(t.coef);
        // Activity range if x_j is pushed to the value that raises the row.
        if (check_lo && lo + span > c.rhs + tol) {
          (t.coef > 0 ? b.upper[j] : b.lower[j]) = t.coef > 0 ? 0.0 : 1.0;
          changed = true;
        } else if (check_hi && hi - span < c.rhs - tol) {
          (t.coef > 0 ? b.lower[j] : b.upper[j]) = t.coef > 0 ? 1.0 : 0.0;
          changed = true;
        } else {
          continue;
        }
        // Restart this row with the new bounds on the next pass.
        break;
      }
    }
    if (!changed) break;
  }
  return true;
}

Reduced reduce(const LinearProgram& p, const Bounds& b) {
  constexpr double kTol = 1e-9;
  Reduced out;
  const auto& vars = p.variables();
  out.column.assign(vars.size(), -1);
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (b.upper[j] - b.lower[j] > 1e-12)
      out.column[j] = out.lp.add_variable({}, b.lower[j], b.upper[j]);

  for (const auto& c : p.constraints()) {
    double rhs = c.rhs, lo = 0.0, hi = 0.0;
    std::vector<Term> terms;
    for (const auto& t : c.terms) {
      const double l = b.lower[t.var], u = b.upper[t.var];
      if (out.column[t.var] < 0) {
        rhs -= t.coef * l;
        continue;
      }
      terms.push_back({out.column[t.var], t.coef});
      lo += t.coef * (t.coef > 0 ? l : u);
      hi += t.coef * (t.coef > 0 ? u : l);
    }
    const double tol = kTol * std::max(1.0, std::abs(rhs));
    const bool upper_ok = hi <= rhs + tol, lower_ok = lo >= rhs - tol;
    switch (c.relation) {
      case Relation::less_equal:
        if (lo > rhs + kFeasibilityTol) out.infeasible = true;
        if (upper_ok) continue;
        break;
      case Relation::greater_equal:
        if (hi < rhs - kFeasibilityTol) out.infeasible = true;
        if (lower_ok) continue;
        break;
      case Relation::equal:
        if (lo > rhs + kFeasibilityTol || hi < rhs - kFeasibilityTol) out.infeasible = true;
        if (upper_ok && lower_ok) continue;
        break;
    }
    if (out.infeasible) return out;
    out.lp.add_constraint(std::move(terms), c.relation, rhs);
  }

  const auto coef = p.objective_coefficients();
  double offset = p.objective_offset();
  std::vector<Term> obj;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (coef[j] == 0.0) continue;
    if (out.column[j] < 0)
      offset += coef[j] * b.lower[j];
    else
      obj.push_back({out.column[j], coef[j]});
  }
  out.lp.set_objective(p.sense(), std::move(obj), offset);
  return out;
}

SolveOutcome solve_node(const MixedIntegerProgram& p, Bounds b, Clock::time_point deadline) {
  SolveOutcome r;
  if (!propagate(p, b)) return r;
  Reduced red = reduce(p, b);
  if (red.infeasible) return r;
  if (red.lp.num_variables() == 0) {
    r.status = Status::optimal;
  } else {
    r = dense_simplex(red.lp, deadline);
    if (r.status != Status::optimal) return r;
  }
  std::vector<double> full(p.num_variables());
  for (int j = 0; j < p.num_variables(); ++j)
    full[j] = red.column[j] < 0 ? b.lower[j] : r.values[red.column[j]];
  r.values = std::move(full);
  r.objective = p.evaluate_linear(r.values);
  r.row_duals.clear();
  r.col_duals.clear();
  return r;
}

}  // namespace

// Best-bound search with plunging: after branching we keep diving into the
// nearer rounding and park the other child; when a dive ends the open node
// with the smallest parent bound is resumed. Node LPs are presolved and
// solved from scratch.
SolveOutcome branch_and_bound(const MixedIntegerProgram& p, Clock::time_point deadline) {
  const double sense = p.sense() == Sense::maximize ? -1.0 : 1.0;
  Bounds root;
  for (const auto& v : p.variables()) {
    root.lower.push_back(v.lower);
    root.upper.push_back(v.upper);
  }

  SolveOutcome best;
  best.status = Status::infeasible;
  double incumbent = kInfinity;  // in minimisation sense
  bool hit_limit = false;

  auto worse = [](const Node& a, const Node& b) { return a.parent_bound > b.parent_bound; };
  std::vector<Node> open;
  std::optional<Node> dive = Node{};
  long nodes = 0;
  while (dive || !open.empty()) {
    if (++nodes > kMaxNodes || Clock::now() > deadline) {
      hit_limit = true;
      break;
    }
    Node node;
    if (dive) {
      node = std::move(*dive);
      dive.reset();
    } else {
      std::pop_heap(open.begin(), open.end(), worse);
      node = std::move(open.back());
      open.pop_back();
    }
    const double cutoff = incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
    if (node.parent_bound >= cutoff) continue;

    Bounds b = root;
    for (auto [var, value] : node.fixes) b.lower[var] = b.upper[var] = value;
    SolveOutcome r = solve_node(p, std::move(b), deadline);
    if (r.status == Status::limit_hit) {
      hit_limit = true;
      break;
    }
    if (r.status == Status::unbounded) {
      best = r;
      return best;
    }
    if (r.status != Status::optimal) continue;
    const double bound = sense * r.objective;
    if (bound >= cutoff) continue;

    int branch = -1;
    double worst = kIntegralityTol;
    for (int j = 0; j < p.num_variables(); ++j) {
      if (!p.is_binary(j)) continue;
      const double frac = std::abs(r.values[j] - std::round(r.values[j]));
      if (frac > worst) {
        worst = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      for (int j = 0; j < p.num_variables(); ++j)
        if (p.is_binary(j)) r.values[j] = std::round(r.values[j]);
      r.objective = p.evaluate_linear(r.values);
      incumbent = bound;
      best = std::move(r);
      continue;
    }
    const double near = r.values[branch] >= 0.5 ? 1.0 : 0.0;
    node.parent_bound = bound;
    Node far_child = node;
    far_child.fixes.emplace_back(branch, 1.0 - near);
    node.fixes.emplace_back(branch, near);
    open.push_back(std::move(far_child));
    std::push_heap(open.begin(), open.end(), worse);
    dive = std::move(node);
  }

  if (hit_limit) {
    SolveOutcome out;
    out.status = Status::limit_hit;
    return out;
  }
  return best;
}

}  // namespace drstack::solver::detail
