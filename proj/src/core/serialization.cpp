#include "drstack/serialization.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace drstack {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

[[noreturn]] void schema_error(const std::string& what) {
  throw std::invalid_argument("json: " + what);
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || j.empty()) schema_error("matrix must be a non-empty array");
  if (j.front().is_number()) {
    if (rows < 0 || cols < 0) schema_error("flat matrix needs a known shape");
    if (static_cast<int>(j.size()) != rows * cols) schema_error("flat matrix has the wrong length");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int c = 0; c < cols; ++c) m(i, c) = j[i * cols + c].get<double>();
    return m;
  }
  const int r = static_cast<int>(j.size());
  const int c = static_cast<int>(j.front().size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) schema_error("matrix has the wrong shape");
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) schema_error("ragged matrix");
    for (int k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Json distribution_to_json(const Distribution& d) {
  Json sup = Json::array();
  for (const auto& u : d.support) sup.push_back(matrix_to_json(u));
  return {{"weights", d.weights}, {"support", sup}};
}

Distribution distribution_from_json(const Json& j, int rows, int cols,
                                    const std::vector<FollowerUtility>* universe) {
  if (!j.contains("weights") || !j.contains("support")) schema_error("distribution needs weights and support");
  Distribution d;
  d.weights = j.at("weights").get<std::vector<double>>();
  for (const auto& e : j.at("support")) {
    if (e.is_number_integer()) {
      if (!universe) schema_error("support index without a finite universe");
      const auto i = e.get<long>();
      if (i < 0 || i >= static_cast<long>(universe->size())) schema_error("support index out of range");
      d.support.push_back((*universe)[i]);
    } else {
      d.support.push_back(matrix_from_json(e, rows, cols));
    }
  }
  d.validate();
  return d;
}

Json game_to_json(const GameInstance& g) {
  Json j{{"n", g.n()}, {"m", g.m()}, {"u_l", matrix_to_json(g.leader())}};
  std::visit(
      [&](const auto& u) {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, FiniteUniverse>) {
          Json us = Json::array();
          for (const auto& m : u.utilities) us.push_back(matrix_to_json(m));
          j["follower"] = {{"kind", "finite"}, {"utilities", us}};
        } else if constexpr (std::is_same_v<T, BoxUniverse>) {
          j["follower"] = {{"kind", "box"}};
        } else {
          j["follower"] = {{"kind", "inspection"}, {"mask", matrix_to_json(u.mask)}};
        }
      },
      g.universe());
  if (g.nominal()) j["nominal"] = distribution_to_json(*g.nominal());
  return j;
}

GameInstance game_from_json(const Json& j) {
  for (const char* key : {"n", "m", "u_l", "follower"})
    if (!j.contains(key)) schema_error(std::string("game needs \"") + key + "\"");
  const int n = j.at("n").get<int>(), m = j.at("m").get<int>();
  if (n < 1 || m < 1) schema_error("n and m must be positive");
  Matrix u_l = matrix_from_json(j.at("u_l"), n, m);
  const Json& f = j.at("follower");
  const std::string kind = f.at("kind").get<std::string>();
  FollowerUniverse universe;
  const std::vector<FollowerUtility>* finite = nullptr;
  if (kind == "finite") {
    FiniteUniverse fu;
    for (const auto& u : f.at("utilities")) fu.utilities.push_back(matrix_from_json(u, n, m));
    universe = std::move(fu);
    finite = &std::get<FiniteUniverse>(universe).utilities;
  } else if (kind == "box") {
    universe = BoxUniverse{};
  } else if (kind == "inspection") {
    universe = InspectionFamily{matrix_from_json(f.at("mask"), n, m)};
  } else {
    schema_error("unknown follower kind \"" + kind + "\"");
  }
  std::optional<Distribution> nominal;
  if (j.contains("nominal") && !j.at("nominal").is_null())
    nominal = distribution_from_json(j.at("nominal"), n, m, finite);
  return GameInstance(std::move(u_l), std::move(universe), std::move(nominal));
}

Json solution_to_json(const DrsssSolution& s) {
  Json j;
  j["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
  j["value"] = number_or_null(s.value);
  j["mapping"] = s.mapping;
  j["lambda"] = s.lambda ? number_or_null(*s.lambda) : Json(nullptr);
  j["w"] = s.w ? Json(*s.w) : Json(nullptr);
  j["solver_time_s"] = s.solver_time_s;
  j["status"] = to_string(s.status);
  j["iterations"] = s.iterations;
  j["note"] = s.note;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace drstack
