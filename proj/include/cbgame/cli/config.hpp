#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbgame/core.hpp"

namespace cbgame::cli {

enum class OutputFormat { Csv, Json };

struct Sweep {
  std::string parameter;  // one of c, q, r, sigma, K, L, T
  std::vector<double> values;
};

/// Everything one CLI invocation needs. Grid fields left unset are filled from default_grid().
struct RunConfig {
  MarketParams market{0.05, 0.02, 0.3};
  ContractParams contract{1.0, 110.0, 100.0, 1.0, 1.0};
  int nx = 400;
  int nt = 400;
  std::optional<double> n;
  std::optional<double> epsilon;
  double theta = 1.0;
  bool smooth_initial = true;
  std::optional<double> contact_tol;
  int lattice_steps = 2000;
  OutputFormat format = OutputFormat::Csv;
  std::string out;
  std::optional<double> S;
  std::optional<double> t;
  double tol = 0.005;  // cross-check tolerance, fraction of K
  std::optional<Sweep> sweep;

  GridSpec grid() const;
};

/// Field-level configuration problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets one key from its textual value. Throws ConfigError naming the key on unknown keys or
/// unparsable values.
void set_value(RunConfig& config, const std::string& key, const std::string& value);

/// Parses a flat `key = value` file body; `#` starts a comment. Later keys override earlier ones.
RunConfig parse_config(const std::string& text, RunConfig base = {});

RunConfig load_config(const std::string& path, RunConfig base = {});

/// Throws ConfigError listing every violated parameter or grid invariant.
void check(const RunConfig& config);

}  // namespace cbgame::cli
