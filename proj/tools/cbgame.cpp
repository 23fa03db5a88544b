#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbgame/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace cbgame::cli;

  CLI::App app{"Convertible bond game engine: regime classification, VI solver, free boundary and lattice oracle"};
  app.set_help_flag("-h,--help", "Print this help message");

  std::string command;
  std::string config_path;
  std::vector<std::string> sets;
  std::string S, t, out, format, steps, nx, nt, T, tol;
  app.add_option("command", command, "classify | price | surface | boundary | sweep | validate")
      ->required()
      ->check(CLI::IsMember({"classify", "price", "surface", "boundary", "sweep", "validate"}));
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--S", S, "stock price");
  app.add_option("--t", t, "calendar time");
  app.add_option("--out", out, "output path (written atomically)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--steps", steps, "lattice steps");
  app.add_option("--nx", nx, "spatial intervals");
  app.add_option("--nt", nt, "time steps");
  app.add_option("--T", T, "maturity in years");
  app.add_option("--tol", tol, "cross-check tolerance as a fraction of K");
  app.add_option("--set", sets, "override any config key, as key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    const std::pair<const char*, const std::string*> flags[] = {
        {"S", &S}, {"t", &t}, {"out", &out}, {"format", &format}, {"lattice_steps", &steps},
        {"nx", &nx}, {"nt", &nt}, {"T", &T}, {"tol", &tol}};
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      set_value(config, s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [key, value] : flags)
      if (!value->empty()) set_value(config, key, *value);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return run_command(command, config, std::cout, std::cerr);
}
