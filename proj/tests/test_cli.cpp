#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "cbgame/boundary.hpp"
#include "cbgame/cli/commands.hpp"
#include "cbgame/cli/output.hpp"
#include "cbgame/cli/validate.hpp"
#include "cbgame/vi_solver.hpp"

using namespace cbgame;
using namespace cbgame::cli;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = CBGAME_CONFIG_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::string& command, const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run_command(command, cfg, out, err);
  return {code, out.str(), err.str()};
}

// Runs the built executable through the shell; stderr is folded into the captured text.
Run run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + CBGAME_CLI_PATH + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunConfig small(double c, double T = 1.0) {
  RunConfig cfg;
  cfg.contract.c = c;
  cfg.contract.T = T;
  cfg.nx = 60;
  cfg.nt = 40;
  cfg.lattice_steps = 200;
  return cfg;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cbgame_cli_" + std::to_string(::getpid()) + "_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

long count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("keys, comments and overrides") {
    const auto cfg = parse_config("# header\nc = 3  # trailing\nT=2\n\nnx = 100\nc = 4\nformat = json\n");
    CHECK(cfg.contract.c == 4.0);
    CHECK(cfg.contract.T == 2.0);
    CHECK(cfg.nx == 100);
    CHECK(cfg.format == OutputFormat::Json);
    CHECK(cfg.market.r == 0.05);
  }
  SUBCASE("sweep syntax") {
    const auto cfg = parse_config("sweep = c:0.5,1,2\n");
    REQUIRE(cfg.sweep);
    CHECK(cfg.sweep->parameter == "c");
    CHECK(cfg.sweep->values == std::vector<double>{0.5, 1.0, 2.0});
    CHECK_THROWS_AS(parse_config("sweep = gamma:1,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep = c:\n"), ConfigError);
  }
  SUBCASE("errors name the line and the field") {
    CHECK_THROWS_WITH_AS(parse_config("c = 1\nsigma = abc\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("sigma = abc\n"), doctest::Contains("sigma"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("volatility = 0.3\n"), doctest::Contains("volatility"), ConfigError);
    CHECK_THROWS_AS(parse_config("c 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nx = 1.5\n"), ConfigError);
  }
  SUBCASE("checks cover parameters and the grid") {
    RunConfig cfg;
    cfg.market.sigma = -0.3;
    CHECK_THROWS_AS(check(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.nx = 1;
    CHECK_THROWS_AS(check(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.n = 0.01;
    CHECK_THROWS_AS(check(cfg), ConfigError);
    CHECK_NOTHROW(check(RunConfig{}));
  }
  SUBCASE("shipped configs load and check") {
    for (const char* name : {"conversion.cfg", "dirichlet.cfg", "call.cfg", "nonmonotone.cfg"}) {
      CAPTURE(name);
      CHECK_NOTHROW(check(load_config(kConfigDir + "/" + name)));
    }
    CHECK_THROWS_AS(load_config(kConfigDir + "/missing.cfg"), std::exception);
  }
}

TEST_CASE("classify") {
  auto text = run("classify", small(3.0));
  CHECK(text.code == kOk);
  CHECK(text.out.rfind("Dirichlet, qK=2.2, rK=5.5", 0) == 0);

  text = run("classify", small(1.0));
  CHECK(text.out.find("ConversionVI") != std::string::npos);
  CHECK(text.out.find("first_mover=Bondholder") != std::string::npos);

  RunConfig cfg = small(6.0);
  cfg.format = OutputFormat::Json;
  const auto j = nlohmann::json::parse(run("classify", cfg).out);
  CHECK(j["regime"] == "CallVI");
  CHECK(j["first_mover"] == "Firm");

  cfg.contract.K = -1;
  const auto bad = run("classify", cfg);
  CHECK(bad.code == kConfigError);
  CHECK(bad.err.find("config error") == 0);
}

TEST_CASE("price") {
  RunConfig cfg = small(3.0);
  cfg.format = OutputFormat::Json;

  cfg.S = 130.0;
  auto j = nlohmann::json::parse(run("price", cfg).out);
  CHECK(j["fd"] == 130.0);
  CHECK(j["lattice"] == 130.0);
  CHECK(j["delta"] == 0.0);

  cfg.nx = cfg.nt = 400;
  cfg.lattice_steps = 2000;
  cfg.S = 0.8 * 110.0;
  const auto ok = run("price", cfg);
  CHECK(ok.code == kOk);
  j = nlohmann::json::parse(ok.out);
  CHECK(std::abs(j["delta"].get<double>()) <= 0.005 * 110.0);
  CHECK(j["agree"] == true);

  cfg.tol = 1e-9;
  CHECK(run("price", cfg).code == kCheckFailed);

  cfg = small(3.0);
  cfg.S = 88.0;
  cfg.t = 2.0;
  CHECK(run("price", cfg).code == kConfigError);
  cfg.t.reset();
  cfg.S.reset();
  CHECK(run("price", cfg).code == kConfigError);
}

TEST_CASE("surface and boundary output") {
  RunConfig cfg = small(1.0);
  const auto surf = run("surface", cfg);
  CHECK(surf.code == kOk);
  CHECK(surf.out.rfind("x,tau,u,contact_lower,contact_upper\n", 0) == 0);
  CHECK(count_lines(surf.out) == 1 + (cfg.nx + 1) * (cfg.nt + 1));
  CHECK(run("surface", cfg).out == surf.out);

  cfg.format = OutputFormat::Json;
  const auto j = nlohmann::json::parse(run("surface", cfg).out);
  CHECK(j["rows"].size() == static_cast<std::size_t>((cfg.nx + 1) * (cfg.nt + 1)));

  cfg = small(1.0);
  const auto bnd = run("boundary", cfg);
  CHECK(bnd.out.rfind("tau,c_tau,all_contact\n", 0) == 0);
  CHECK(bnd.out.find("\"monotone_nondecreasing\"") != std::string::npos);

  CHECK(run("boundary", small(3.0)).code == kConfigError);
}

TEST_CASE("boundary on the nonmonotone config") {
  RunConfig cfg = load_config(kConfigDir + "/nonmonotone.cfg");
  cfg.format = OutputFormat::Json;
  const auto r = run("boundary", cfg);
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["diagnosis"]["nonmonotone"] == true);
  CHECK(j["diagnosis"]["witness"]["fall"].get<double>() > 0.0);
  CHECK(j["boundary"]["rows"].size() == static_cast<std::size_t>(cfg.nt + 1));
}

TEST_CASE("sweep matches individual runs") {
  RunConfig cfg = small(1.0, 5.0);
  cfg.sweep = Sweep{"c", {0.5, 1.0, 2.0, 3.0}};
  cfg.format = OutputFormat::Json;

  ::setenv("CBGAME_THREADS", "1", 1);
  CHECK(sweep_threads() == 1);
  const auto serial = run("sweep", cfg);
  ::setenv("CBGAME_THREADS", "4", 1);
  CHECK(sweep_threads() == 4);
  const auto parallel = run("sweep", cfg);
  ::unsetenv("CBGAME_THREADS");
  REQUIRE(serial.code == kOk);
  CHECK(serial.out == parallel.out);

  const auto rows = nlohmann::json::parse(serial.out);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RunConfig one = cfg;
    one.sweep.reset();
    one.contract.c = cfg.sweep->values[i];
    CAPTURE(one.contract.c);
    CHECK(rows[i]["value"] == one.contract.c);
    const auto s = solve(one.market, one.contract, one.grid());
    if (s.regime.regime == Regime::Dirichlet) {
      CHECK(rows[i]["diagnosis"].is_null());
      continue;
    }
    const auto d = diagnose(extract(s), landmarks(one.market, one.contract), s.dx());
    CHECK(rows[i]["diagnosis"]["limit_value"] == d.limit_value);
    CHECK(rows[i]["diagnosis"]["start_value"] == d.start_value);
    CHECK(rows[i]["diagnosis"]["absorbed_at_zero"] == d.absorbed_at_zero);
  }

  cfg.format = OutputFormat::Csv;
  const auto csv = run("sweep", cfg);
  CHECK(count_lines(csv.out) == 5);

  cfg.sweep = Sweep{"sigma", {0.3, -1.0}};
  CHECK(run("sweep", cfg).code == kConfigError);
  cfg.sweep.reset();
  CHECK(run("sweep", cfg).code == kConfigError);
}

TEST_CASE("validate") {
  const auto good = run("validate", load_config(kConfigDir + "/dirichlet.cfg"));
  CHECK(good.code == kOk);
  CHECK(good.out.find("invariants passed") != std::string::npos);
  CHECK(good.out.find("FAIL") == std::string::npos);

  RunConfig cfg = load_config(kConfigDir + "/dirichlet.cfg");
  cfg.tol = 1e-9;
  const auto bad = run("validate", cfg);
  CHECK(bad.code == kCheckFailed);
  CHECK(bad.out.find("failing: closed-form agreement / K") != std::string::npos);

  const auto results = run_invariants(small(6.0));
  CHECK(results.front().name == "regime matches coupon thresholds");
  const auto table = format_table(results);
  CHECK(table.find(std::to_string(results.size()) + " invariants passed") != std::string::npos);
}

TEST_CASE("file output") {
  TempDir dir;
  RunConfig cfg = small(1.0);
  cfg.out = dir.file("surface.csv");
  const auto r = run("surface", cfg);
  CHECK(r.code == kOk);
  CHECK(r.out.empty());
  CHECK(slurp(cfg.out) == run("surface", small(1.0)).out);
  CHECK_FALSE(fs::exists(cfg.out + ".tmp"));

  cfg.out = dir.file("boundary.csv");
  CHECK(run("boundary", cfg).code == kOk);
  CHECK(slurp(cfg.out).rfind("tau,c_tau,all_contact\n", 0) == 0);
  const auto diag = nlohmann::json::parse(slurp(cfg.out + ".diagnosis.json"));
  CHECK(diag.contains("nonmonotone"));

  cfg.out = dir.file("no/such/dir/out.csv");
  const auto fail = run("surface", cfg);
  CHECK(fail.code == kIoError);
  CHECK(fail.err.find("i/o error") == 0);

  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("executable") {
  const std::string dirichlet = "--config \"" + kConfigDir + "/dirichlet.cfg\"";

  auto r = run_binary("classify " + dirichlet);
  CHECK(r.code == 0);
  CHECK(r.out.rfind("Dirichlet, qK=2.2, rK=5.5", 0) == 0);

  r = run_binary("classify " + dirichlet + " --set c=1");
  CHECK(r.out.find("ConversionVI") != std::string::npos);

  // Flags win over --set, which wins over the file.
  r = run_binary("price " + dirichlet + " --set S=50 --S 130 --format json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["fd"] == 130.0);
  r = run_binary("price " + dirichlet + " --set T=3 --T 2 --t 2.5 --S 80");
  CHECK(r.code == 2);

  TempDir dir;
  const std::string broken = dir.file("broken.cfg");
  std::ofstream(broken) << "c = 1\nsigma = fast\n";
  r = run_binary("classify --config \"" + broken + "\"");
  CHECK(r.code == 2);
  CHECK(r.out.find("line 2") != std::string::npos);
  CHECK(r.out.find("sigma") != std::string::npos);

  CHECK(run_binary("explode").code == 2);
  CHECK(run_binary("classify --set c").code == 2);
  CHECK(run_binary("surface --nx 40 --nt 20 --out \"" + dir.file("none/x.csv") + "\"").code == 4);

  const auto first = run_binary("validate " + dirichlet);
  const auto second = run_binary("validate " + dirichlet);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
}
