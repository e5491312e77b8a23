#include "drstack/solver/highs_backend.hpp"

#include <dlfcn.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <vector>

#include "drstack/solver/reference_backend.hpp"

namespace drstack::solver {
namespace {

// HiGHS is built with 32-bit HighsInt unless HIGHSINT64 is set; the size is
// checked against Highs_getSizeofHighsInt once the library is loaded.
using HighsInt = std::int32_t;

constexpr HighsInt kRowwise = 2;
constexpr HighsInt kHessianTriangular = 1;
constexpr HighsInt kObjSenseMinimize = 1;
constexpr HighsInt kObjSenseMaximize = -1;
constexpr HighsInt kStatusError = -1;

constexpr HighsInt kModelOptimal = 7;
constexpr HighsInt kModelInfeasible = 8;
constexpr HighsInt kModelUnboundedOrInfeasible = 9;
constexpr HighsInt kModelUnbounded = 10;
constexpr HighsInt kModelTimeLimit = 13;
constexpr HighsInt kModelIterationLimit = 14;
constexpr HighsInt kModelSolutionLimit = 16;
constexpr HighsInt kModelEmpty = 6;

struct HighsApi {
  void* handle = nullptr;
  std::string path;
  void* (*create)() = nullptr;
  void (*destroy)(void*) = nullptr;
  HighsInt (*run)(void*) = nullptr;
  HighsInt (*pass_lp)(void*, HighsInt, HighsInt, HighsInt, HighsInt, HighsInt, double,
                      const double*, const double*, const double*, const double*,
                      const double*, const HighsInt*, const HighsInt*,
                      const double*) = nullptr;
  HighsInt (*pass_mip)(void*, HighsInt, HighsInt, HighsInt, HighsInt, HighsInt, double,
                       const double*, const double*, const double*, const double*,
                       const double*, const HighsInt*, const HighsInt*, const double*,
                       const HighsInt*) = nullptr;
  HighsInt (*pass_hessian)(void*, HighsInt, HighsInt, HighsInt, const HighsInt*,
                           const HighsInt*, const double*) = nullptr;
  HighsInt (*get_model_status)(const void*) = nullptr;
  HighsInt (*get_solution)(const void*, double*, double*, double*, double*) = nullptr;
  double (*get_objective_value)(const void*) = nullptr;
  double (*get_infinity)(const void*) = nullptr;
  HighsInt (*set_bool_option)(void*, const char*, HighsInt) = nullptr;
  HighsInt (*set_double_option)(void*, const char*, double) = nullptr;
  HighsInt (*get_sizeof_highs_int)(const void*) = nullptr;

  bool ok() const { return handle != nullptr; }
};

template <class Fn>
bool bind(void* handle, const char* symbol, Fn& fn) {
  fn = reinterpret_cast<Fn>(dlsym(handle, symbol));
  return fn != nullptr;
}

HighsApi load_api() {
  std::vector<std::string> candidates;
  if (const char* env = std::getenv("DRSTACK_HIGHS_LIBRARY"); env && *env)
    candidates.emplace_back(env);
#ifdef DRSTACK_HIGHS_DEFAULT_PATH
  candidates.emplace_back(DRSTACK_HIGHS_DEFAULT_PATH);
#endif
  candidates.emplace_back("libhighs.so");
  candidates.emplace_back("libhighs.so.1");

  for (const auto& path : candidates) {
    void* h = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!h) continue;
    HighsApi api;
    api.handle = h;
    api.path = path;
    const bool bound =
        bind(h, "Highs_create", api.create) && bind(h, "Highs_destroy", api.destroy) &&
        bind(h, "Highs_run", api.run) && bind(h, "Highs_passLp", api.pass_lp) &&
        bind(h, "Highs_passMip", api.pass_mip) &&
        bind(h, "Highs_passHessian", api.pass_hessian) &&
        bind(h, "Highs_getModelStatus", api.get_model_status) &&
        bind(h, "Highs_getSolution", api.get_solution) &&
        bind(h, "Highs_getObjectiveValue", api.get_objective_value) &&
        bind(h, "Highs_getInfinity", api.get_infinity) &&
        bind(h, "Highs_setBoolOptionValue", api.set_bool_option) &&
        bind(h, "Highs_setDoubleOptionValue", api.set_double_option) &&
        bind(h, "Highs_getSizeofHighsInt", api.get_sizeof_highs_int);
    if (!bound) {
      dlclose(h);
      continue;
    }
    void* probe = api.create();
    const bool int_ok = api.get_sizeof_highs_int(probe) == sizeof(HighsInt);
    api.destroy(probe);
    if (!int_ok) {
      dlclose(h);
      continue;
    }
    return api;
  }
  return {};
}

const HighsApi& api() {
  static const HighsApi instance = load_api();
  return instance;
}

struct Instance {
  explicit Instance(const HighsApi& a) : api(a), ptr(a.create()) {}
  ~Instance() { api.destroy(ptr); }
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;
  const HighsApi& api;
  void* ptr;
};

struct CsrModel {
  std::vector<double> cost, col_lower, col_upper, row_lower, row_upper, value;
  std::vector<HighsInt> start, index;
};

CsrModel to_csr(const LinearProgram& p, double inf) {
  auto clip = [inf](double v) { return std::isinf(v) ? std::copysign(inf, v) : v; };
  CsrModel m;
  m.cost = p.objective_coefficients();
  for (const auto& v : p.variables()) {
    m.col_lower.push_back(clip(v.lower));
    m.col_upper.push_back(clip(v.upper));
  }
  for (const auto& row : p.constraints()) {
    m.start.push_back(static_cast<HighsInt>(m.index.size()));
    for (const auto& t : row.terms) {
      if (t.coef == 0.0) continue;
      m.index.push_back(t.var);
      m.value.push_back(t.coef);
    }
    switch (row.relation) {
      case Relation::less_equal:
        m.row_lower.push_back(-inf);
        m.row_upper.push_back(row.rhs);
        break;
      case Relation::greater_equal:
        m.row_lower.push_back(row.rhs);
        m.row_upper.push_back(inf);
        break;
      case Relation::equal:
        m.row_lower.push_back(row.rhs);
        m.row_upper.push_back(row.rhs);
        break;
    }
  }
  // Duplicate entries within a row are not accepted by HiGHS; merge them.
  CsrModel merged = m;
  merged.index.clear();
  merged.value.clear();
  merged.start.clear();
  for (std::size_t r = 0; r < m.start.size(); ++r) {
    merged.start.push_back(static_cast<HighsInt>(merged.index.size()));
    const std::size_t end = r + 1 < m.start.size() ? m.start[r + 1] : m.index.size();
    const std::size_t row_begin = merged.index.size();
    for (std::size_t e = m.start[r]; e < end; ++e) {
      bool found = false;
      for (std::size_t q = row_begin; q < merged.index.size(); ++q)
        if (merged.index[q] == m.index[e]) {
          merged.value[q] += m.value[e];
          found = true;
          break;
        }
      if (!found) {
        merged.index.push_back(m.index[e]);
        merged.value.push_back(m.value[e]);
      }
    }
  }
  return merged;
}

SolveOutcome run(const LinearProgram& p, const SolveOptions& opt,
                 const std::vector<HighsInt>* integrality,
                 const std::vector<QuadTerm>* hessian) {
  const HighsApi& a = api();
  if (!a.ok()) throw BackendUnavailable("HiGHS shared library not found");
  Instance h(a);
  const double inf = a.get_infinity(h.ptr);
  a.set_bool_option(h.ptr, "output_flag", 0);
  if (std::isfinite(opt.time_limit_s))
    a.set_double_option(h.ptr, "time_limit", opt.time_limit_s);
  if (integrality) {
    a.set_double_option(h.ptr, "mip_rel_gap", 0.0);
    a.set_double_option(h.ptr, "mip_abs_gap", 1e-10);
  }

  const CsrModel m = to_csr(p, inf);
  const HighsInt ncol = p.num_variables();
  const HighsInt nrow = p.num_constraints();
  const HighsInt nnz = static_cast<HighsInt>(m.index.size());
  const HighsInt sense =
      p.sense() == Sense::minimize ? kObjSenseMinimize : kObjSenseMaximize;
  const HighsInt* start = m.start.empty() ? nullptr : m.start.data();
  HighsInt status;
  if (integrality) {
    status = a.pass_mip(h.ptr, ncol, nrow, nnz, kRowwise, sense, p.objective_offset(),
                        m.cost.data(), m.col_lower.data(), m.col_upper.data(),
                        m.row_lower.data(), m.row_upper.data(), start, m.index.data(),
                        m.value.data(), integrality->data());
  } else {
    status = a.pass_lp(h.ptr, ncol, nrow, nnz, kRowwise, sense, p.objective_offset(),
                       m.cost.data(), m.col_lower.data(), m.col_upper.data(),
                       m.row_lower.data(), m.row_upper.data(), start, m.index.data(),
                       m.value.data());
  }
  if (status == kStatusError) throw NumericalFailure("HiGHS rejected the model");

  if (hessian && !hessian->empty()) {
    // Diagonal Hessian in column-wise lower-triangular form.
    std::vector<double> diag(ncol, 0.0);
    for (const auto& q : *hessian) diag[q.row] += q.value;
    std::vector<HighsInt> q_start, q_index;
    std::vector<double> q_value;
    for (HighsInt j = 0; j < ncol; ++j) {
      q_start.push_back(static_cast<HighsInt>(q_index.size()));
      if (diag[j] != 0.0) {
        q_index.push_back(j);
        q_value.push_back(diag[j]);
      }
    }
    if (!q_index.empty() &&
        a.pass_hessian(h.ptr, ncol, static_cast<HighsInt>(q_index.size()),
                       kHessianTriangular, q_start.data(), q_index.data(),
                       q_value.data()) == kStatusError)
      throw NumericalFailure("HiGHS rejected the Hessian");
  }

  if (a.run(h.ptr) == kStatusError) throw NumericalFailure("HiGHS run failed");

  SolveOutcome out;
  const HighsInt ms = a.get_model_status(h.ptr);
  switch (ms) {
    case kModelOptimal:
    case kModelEmpty:
      out.status = Status::optimal;
      break;
    case kModelInfeasible:
      out.status = Status::infeasible;
      return out;
    case kModelUnbounded:
    case kModelUnboundedOrInfeasible:
      out.status = Status::unbounded;
      return out;
    case kModelTimeLimit:
    case kModelIterationLimit:
    case kModelSolutionLimit:
      out.status = Status::limit_hit;
      return out;
    default:
      throw NumericalFailure("HiGHS returned model status " + std::to_string(ms));
  }
  out.values.assign(ncol, 0.0);
  out.col_duals.assign(ncol, 0.0);
  std::vector<double> row_value(nrow, 0.0);
  out.row_duals.assign(nrow, 0.0);
  a.get_solution(h.ptr, out.values.data(), out.col_duals.data(), row_value.data(),
                 out.row_duals.data());
  if (integrality) {
    out.row_duals.clear();
    out.col_duals.clear();
  }
  out.objective = a.get_objective_value(h.ptr);
  return out;
}

}  // namespace

HighsBackend::HighsBackend() {
  if (!available()) throw BackendUnavailable("HiGHS shared library not found");
}

bool HighsBackend::available() { return api().ok(); }

std::string HighsBackend::library_path() { return api().path; }

SolveOutcome HighsBackend::do_solve_lp(const LinearProgram& p,
                                       const SolveOptions& opt) const {
  return run(p, opt, nullptr, nullptr);
}

SolveOutcome HighsBackend::do_solve_milp(const MixedIntegerProgram& p,
                                         const SolveOptions& opt) const {
  std::vector<HighsInt> integrality(p.num_variables(), 0);
  for (int j = 0; j < p.num_variables(); ++j) integrality[j] = p.is_binary(j) ? 1 : 0;
  SolveOutcome out = run(p, opt, &integrality, nullptr);
  if (out.optimal()) out.objective = p.evaluate_linear(out.values);
  return out;
}

SolveOutcome HighsBackend::do_solve_qp(const QuadraticProgram& p,
                                       const SolveOptions& opt) const {
  SolveOutcome out;
  try {
    out = run(p, opt, nullptr, &p.quadratic());
  } catch (const NumericalFailure&) {
    // The HiGHS QP solver can discard tiny nonzero row bounds (for example
    // a strict-preference margin of 1e-6) and then report a solve error on
    // its own primal check. Such programs are small; hand them to the
    // dense active-set solver.
    return ReferenceBackend().solve_qp(p, opt);
  }
  if (out.optimal()) out.objective = p.evaluate(out.values);
  return out;
}

}  // namespace drstack::solver
