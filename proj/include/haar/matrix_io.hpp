#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "haar/linalg.hpp"

namespace haar {

// Matrix file: {"rows": r, "cols": c, "data": [re, im, re, im, ...]} in row-major
// order, numbers printed with 17 significant digits so the round trip is exact.
std::string matrix_to_text(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);
CMat matrix_from_text(const std::string& text);

void save_matrix(const std::filesystem::path& path, const CMat& m);
CMat load_matrix(const std::filesystem::path& path);

// Matrix as a json value (same schema), for embedding in reports.
nlohmann::json matrix_to_json(const CMat& m);

}  // namespace haar
