#include "cbgame/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cbgame::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

Sweep parse_sweep(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("sweep: expected 'name:v1,v2,...'");
  Sweep sweep;
  sweep.parameter = trim(text.substr(0, colon));
  static const char* allowed[] = {"c", "q", "r", "sigma", "K", "L", "T"};
  bool known = false;
  for (const char* a : allowed) known = known || sweep.parameter == a;
  if (!known) throw ConfigError("sweep: parameter '" + sweep.parameter + "' is not one of c, q, r, sigma, K, L, T");
  std::stringstream list(text.substr(colon + 1));
  std::string item;
  while (std::getline(list, item, ',')) sweep.values.push_back(parse_double("sweep", item));
  if (sweep.values.empty()) throw ConfigError("sweep: no values given");
  return sweep;
}

}  // namespace

GridSpec RunConfig::grid() const {
  GridSpec g = default_grid(market, contract, nx, nt);
  if (n) g.n = *n;
  if (epsilon) g.epsilon = *epsilon;
  g.theta = theta;
  g.smooth_initial = smooth_initial;
  return g;
}

void set_value(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "r") cfg.market.r = parse_double(key, value);
  else if (key == "q") cfg.market.q = parse_double(key, value);
  else if (key == "sigma") cfg.market.sigma = parse_double(key, value);
  else if (key == "c") cfg.contract.c = parse_double(key, value);
  else if (key == "K") cfg.contract.K = parse_double(key, value);
  else if (key == "L") cfg.contract.L = parse_double(key, value);
  else if (key == "gamma") cfg.contract.gamma = parse_double(key, value);
  else if (key == "T") cfg.contract.T = parse_double(key, value);
  else if (key == "nx") cfg.nx = parse_int(key, value);
  else if (key == "nt") cfg.nt = parse_int(key, value);
  else if (key == "n") cfg.n = parse_double(key, value);
  else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
  else if (key == "theta") cfg.theta = parse_double(key, value);
  else if (key == "smooth_initial") cfg.smooth_initial = parse_bool(key, value);
  else if (key == "contact_tol") cfg.contact_tol = parse_double(key, value);
  else if (key == "lattice_steps") cfg.lattice_steps = parse_int(key, value);
  else if (key == "S") cfg.S = parse_double(key, value);
  else if (key == "t") cfg.t = parse_double(key, value);
  else if (key == "tol") cfg.tol = parse_double(key, value);
  else if (key == "out") cfg.out = trim(value);
  else if (key == "sweep") cfg.sweep = parse_sweep(value);
  else if (key == "format") {
    const std::string f = trim(value);
    if (f == "csv") cfg.format = OutputFormat::Csv;
    else if (f == "json") cfg.format = OutputFormat::Json;
    else throw ConfigError("format: expected csv or json, got '" + f + "'");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text, RunConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    try {
      set_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

void check(const RunConfig& cfg) {
  ValidationOutcome outcome = validate(cfg.grid(), cfg.market, cfg.contract);
  if (cfg.lattice_steps < 1) outcome.violations.push_back("lattice_steps ≥ 1 violated");
  if (!(cfg.tol > 0.0)) outcome.violations.push_back("tol > 0 violated");
  if (cfg.contact_tol && !(*cfg.contact_tol > 0.0)) outcome.violations.push_back("contact_tol > 0 violated");
  if (!outcome) throw ConfigError(outcome.message());
}

}  // namespace cbgame::cli
