#pragma once

#include <filesystem>

#include <json.hpp>

#include "drstack/ambiguity.hpp"
#include "drstack/game.hpp"
#include "drstack/solution.hpp"

namespace drstack {

using Json = nlohmann::json;

/// Matrices are arrays of rows. Readers also accept a flat row-major array
/// when the shape is known.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, int rows = -1, int cols = -1);

/// {"n", "m", "u_l", "follower": {"kind": "finite", "utilities": [...]} |
///  {"kind": "box"} | {"kind": "inspection", "mask": [...]}, "nominal"?}
Json game_to_json(const GameInstance& g);
GameInstance game_from_json(const Json& j);

/// {"weights": [...], "support": [...]}. Support entries are matrices, or
/// indices into `universe` when one is given.
Json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const Json& j, int rows, int cols,
                                    const std::vector<FollowerUtility>* universe = nullptr);

/// {"x", "value", "mapping", "lambda", "w", "solver_time_s", "status",
///  "iterations", "note"}; absent lambda/w and non-finite values are null.
Json solution_to_json(const DrsssSolution& s);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace drstack
