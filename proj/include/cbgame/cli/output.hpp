#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cbgame/boundary.hpp"
#include "cbgame/regimes.hpp"
#include "cbgame/vi_solver.hpp"

namespace cbgame::cli {

/// Filesystem failure; maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

std::string surface_csv(const SolutionSurface& surface);
std::string boundary_csv(const BoundaryCurve& curve);

nlohmann::ordered_json to_json(const RegimeReport& report);
nlohmann::ordered_json to_json(const ShapeDiagnosis& diagnosis);
nlohmann::ordered_json to_json(const BoundaryCurve& curve);
nlohmann::ordered_json surface_json(const SolutionSurface& surface);

/// JSON text with numbers in shortest round-trip form and a trailing newline.
std::string dump(const nlohmann::ordered_json& value);

}  // namespace cbgame::cli
