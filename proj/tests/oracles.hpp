#pragma once

// Brute-force reference computations used as test oracles. Nothing here
// calls into the library's solvers; only plain Eigen arithmetic.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Leader payoff when the follower best-responds to x under u_f and breaks
/// ties in the leader's favour. `tol` widens the best-response set.
inline double tiebreak_payoff(const Mat& u_l, const Mat& u_f, const Vec& x, double tol = 1e-7) {
  const Vec f = u_f.transpose() * x;
  const Vec l = u_l.transpose() * x;
  const double best = f.maxCoeff();
  double out = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < f.size(); ++a)
    if (f[a] >= best - tol) out = std::max(out, l[a]);
  return out;
}

/// Every point of the simplex in R^n with coordinates in multiples of 1/steps.
inline void for_each_grid_point(int n, int steps, const std::function<void(const Vec&)>& fn) {
  std::vector<int> c(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      c[i] = left;
      Vec x(n);
      for (int j = 0; j < n; ++j) x[j] = static_cast<double>(c[j]) / steps;
      fn(x);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, steps);
}

/// Squared-or-t-th power Frobenius distance.
inline double dist_pow(const Mat& a, const Mat& b, double t) {
  return std::pow((a - b).norm(), t);
}

/// inf over distributions mu on `cands` with W_t(mu, nu)^t <= theta_t of
/// sum mu_i h_i, via the one-dimensional dual
///   max_{lambda >= 0} sum_j nu_j min_i (h_i + lambda D_ij) - lambda theta_t,
/// a concave piecewise-linear function maximised at a breakpoint.
inline double wasserstein_inner(const std::vector<double>& h, const Mat& d, const std::vector<double>& nu,
                                double theta_t) {
  const int c = static_cast<int>(h.size()), k = static_cast<int>(nu.size());
  auto f = [&](double lambda) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < c; ++i) best = std::min(best, h[i] + lambda * d(i, j));
      s += nu[j] * best;
    }
    return s - lambda * theta_t;
  };
  std::vector<double> breaks{0.0};
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < c; ++i)
      for (int i2 = 0; i2 < c; ++i2) {
        const double dd = d(i2, j) - d(i, j);
        if (std::abs(dd) < 1e-15) continue;
        const double l = (h[i] - h[i2]) / dd;
        if (l > 0) breaks.push_back(l);
      }
  double best = -std::numeric_limits<double>::infinity();
  for (double l : breaks) best = std::max(best, f(l));
  return best;
}

/// Robust DR value of a finite-universe game under a Wasserstein ball whose
/// nominal is the universe with weights nu, maximised over a simplex grid.
inline double grid_wasserstein_value(const Mat& u_l, const std::vector<Mat>& us,
                                     const std::vector<double>& nu, double theta, double t,
                                     int steps) {
  const int k = static_cast<int>(us.size());
  Mat d(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) d(i, j) = dist_pow(us[i], us[j], t);
  double best = -std::numeric_limits<double>::infinity();
  for_each_grid_point(static_cast<int>(u_l.rows()), steps, [&](const Vec& x) {
    std::vector<double> h(k);
    for (int i = 0; i < k; ++i) h[i] = tiebreak_payoff(u_l, us[i], x);
    best = std::max(best, wasserstein_inner(h, d, nu, std::pow(theta, t)));
  });
  return best;
}

/// Closed-form Euclidean projection of v onto the probability simplex.
inline Vec project_simplex(const Vec& v) {
  Vec s = v;
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    cum += s[i];
    const double cand = (cum - 1.0) / (i + 1);
    if (s[i] - cand > 0) tau = cand;
  }
  return (v.array() - tau).max(0.0);
}

/// Uniform random matrix in [0,1)^{r x c} from a test-local engine.
inline Mat random_matrix(std::mt19937_64& rng, int r, int c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

inline std::vector<double> random_weights(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& v : w) s += (v = u(rng));
  for (auto& v : w) v /= s;
  return w;
}

/// All simplex grid points with step 1/steps, materialised.
inline std::vector<Vec> grid_points(int n, int steps) {
  std::vector<Vec> out;
  for_each_grid_point(n, steps, [&](const Vec& x) { out.push_back(x); });
  return out;
}

/// Two-valued matrix: alpha where mask = 1, beta elsewhere.
inline Mat family_member(const Mat& mask, double alpha, double beta) {
  return (mask.array() * alpha + (1.0 - mask.array()) * beta).matrix();
}

/// Sampled approximation of the DR value of an inspection-family game.
/// Candidates are `samples` uniform (alpha, beta) pairs plus the nominal
/// members themselves; for every x on the simplex grid the inner infimum
/// over distributions on the candidates is computed exactly by the scalar
/// dual, after grouping candidates by the follower action they induce.
struct FamilyCandidates {
  std::vector<double> alpha, beta;
  Mat dist_t;  // candidates x nominals
};

inline FamilyCandidates family_candidates(const Mat& mask, const std::vector<Mat>& nominals,
                                          const std::vector<std::pair<double, double>>& nominal_ab,
                                          int samples, std::uint64_t seed, double t) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FamilyCandidates c;
  for (const auto& [a, b] : nominal_ab) {
    c.alpha.push_back(a);
    c.beta.push_back(b);
  }
  for (int i = 0; i < samples; ++i) {
    c.alpha.push_back(u(rng));
    c.beta.push_back(u(rng));
  }
  const int total = static_cast<int>(c.alpha.size()), k = static_cast<int>(nominals.size());
  c.dist_t.resize(total, k);
  for (int i = 0; i < total; ++i) {
    const Mat m = family_member(mask, c.alpha[i], c.beta[i]);
    for (int j = 0; j < k; ++j) c.dist_t(i, j) = dist_pow(m, nominals[j], t);
  }
  return c;
}

/// Inner infimum at x over distributions supported on the candidates.
inline double family_inner(const Mat& u_l, const Mat& mask, const FamilyCandidates& c,
                           const std::vector<double>& nu, double theta_t, const Vec& x) {
  const int m = static_cast<int>(u_l.cols()), k = static_cast<int>(nu.size());
  const Vec v = mask.transpose() * x;
  const Vec lead = u_l.transpose() * x;
  Mat dmin = Mat::Constant(m, k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < c.alpha.size(); ++i) {
    const double a = c.alpha[i], b = c.beta[i];
    double best = -1e300;
    for (int f = 0; f < m; ++f) best = std::max(best, b + (a - b) * v[f]);
    int act = -1;
    for (int f = 0; f < m; ++f)
      if (b + (a - b) * v[f] >= best - 1e-9 && (act < 0 || lead[f] > lead[act])) act = f;
    for (int j = 0; j < k; ++j) dmin(act, j) = std::min(dmin(act, j), c.dist_t(i, j));
  }
  std::vector<double> h;
  std::vector<int> rows;
  for (int f = 0; f < m; ++f)
    if (std::isfinite(dmin.row(f).minCoeff())) {
      rows.push_back(f);
      h.push_back(lead[f]);
    }
  Mat d(rows.size(), k);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    d.row(r) = dmin.row(rows[r]);
    // An action unreachable from some nominal point is priced out.
    for (int j = 0; j < k; ++j)
      if (!std::isfinite(d(r, j))) d(r, j) = 1e12;
  }
  return wasserstein_inner(h, d, nu, theta_t);
}

}  // namespace oracle
