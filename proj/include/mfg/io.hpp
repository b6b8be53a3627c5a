#pragma once

// Output helpers. CSV numbers use 17 significant digits; JSON numbers use the
// shortest representation that round-trips, which is equally exact.

#include <filesystem>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "mfg/diagnostics.hpp"
#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/problem.hpp"
#include "mfg/solver.hpp"

namespace mfg {

std::string format_number(double v);

/// One row per index; all columns must have the same length. Empty strings
/// in `text` columns are written as empty cells.
struct CsvColumn {
  std::string name;
  std::vector<double> values;
};
void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// x,value (1D) or x,y,value (2D), one line per node.
void write_field_slice(const std::filesystem::path& path, std::span<const double> values, const Grid& g);

nlohmann::json to_json(const Grid& g);
nlohmann::json to_json(const ProblemSpec& p);
nlohmann::json to_json(const SolverConfig& s);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const AprioriReport& a);

/// Throws ConfigError when the directory cannot be created.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace mfg
