#include "cbgame/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "cbgame/boundary.hpp"
#include "cbgame/cli/output.hpp"
#include "cbgame/cli/validate.hpp"
#include "cbgame/closedform.hpp"
#include "cbgame/lattice.hpp"
#include "cbgame/vi_solver.hpp"

namespace cbgame::cli {

namespace {

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty())
    out << text;
  else
    write_atomic(cfg.out, text);
}

SolutionSurface solve_config(const RunConfig& cfg) {
  SolverOptions opts;
  opts.contact_tol = cfg.contact_tol;
  return solve(cfg.market, cfg.contract, cfg.grid(), opts);
}

std::optional<BoundaryLandmarks> landmarks_if_any(const RunConfig& cfg) {
  const auto& k = cfg.contract;
  if (classify(cfg.market, k).regime != Regime::ConversionVI || !(k.c > 0.0)) return std::nullopt;
  return landmarks(cfg.market, k);
}

void set_parameter(RunConfig& cfg, const std::string& name, double v) {
  if (name == "c") cfg.contract.c = v;
  else if (name == "q") cfg.market.q = v;
  else if (name == "r") cfg.market.r = v;
  else if (name == "sigma") cfg.market.sigma = v;
  else if (name == "K") cfg.contract.K = v;
  else if (name == "L") cfg.contract.L = v;
  else if (name == "T") cfg.contract.T = v;
}

struct SweepRow {
  double value = 0.0;
  RegimeReport regime;
  std::optional<ShapeDiagnosis> diagnosis;
  std::string error;
};

}  // namespace

unsigned sweep_threads() {
  if (const char* env = std::getenv("CBGAME_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const RegimeReport r = classify(cfg.market, cfg.contract);
  if (cfg.format == OutputFormat::Json) {
    emit(cfg, out, dump(to_json(r)));
  } else {
    emit(cfg, out,
         std::string(to_string(r.regime)) + ", qK=" + format_double(r.qK) + ", rK=" + format_double(r.rK) +
             ", strict=" + (r.strict ? "true" : "false") + ", first_mover=" + std::string(to_string(r.first_mover)) +
             "\n");
  }
  return kOk;
}

int cmd_price(const RunConfig& cfg, std::ostream& out) {
  const auto& k = cfg.contract;
  if (!cfg.S) throw ConfigError("S: required for price");
  const double S = *cfg.S;
  const double t = cfg.t.value_or(0.0);
  to_transformed(S, t, k);  // rejects S <= 0 and t outside [0, T]

  double fd = 0.0;
  double tree = 0.0;
  if (k.gamma * S >= k.K) {
    fd = tree = k.gamma * S;
  } else {
    fd = price(solve_config(cfg), S, t);
    if (t == k.T) {
      tree = std::max(k.L, k.gamma * S);
    } else {
      const ContractParams remaining{k.c, k.K, k.L, k.gamma, k.T - t};
      tree = lattice_price(cfg.market, remaining, S, cfg.lattice_steps).root();
    }
  }
  const double delta = fd - tree;
  const bool ok = std::abs(delta) <= cfg.tol * k.K;
  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json j = {{"S", S},   {"t", t},         {"fd", fd}, {"lattice", tree},
                                {"delta", delta}, {"tolerance", cfg.tol * k.K}, {"agree", ok}};
    emit(cfg, out, dump(j));
  } else {
    emit(cfg, out,
         "fd=" + format_double(fd) + "\nlattice=" + format_double(tree) + " (" + std::to_string(cfg.lattice_steps) +
             " steps)\ndelta=" + format_double(delta) + "\n");
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_surface(const RunConfig& cfg, std::ostream& out) {
  const SolutionSurface s = solve_config(cfg);
  emit(cfg, out, cfg.format == OutputFormat::Json ? dump(surface_json(s)) : surface_csv(s));
  return kOk;
}

int cmd_boundary(const RunConfig& cfg, std::ostream& out) {
  const SolutionSurface s = solve_config(cfg);
  const BoundaryCurve curve = extract(s);
  const ShapeDiagnosis d = diagnose(curve, landmarks_if_any(cfg), s.dx());
  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json j = {{"boundary", to_json(curve)}, {"diagnosis", to_json(d)}};
    emit(cfg, out, dump(j));
  } else if (cfg.out.empty()) {
    out << boundary_csv(curve) << dump(to_json(d));
  } else {
    write_atomic(cfg.out, boundary_csv(curve));
    write_atomic(cfg.out + ".diagnosis.json", dump(to_json(d)));
  }
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.sweep) throw ConfigError("sweep: required for the sweep command");
  const Sweep& sweep = *cfg.sweep;
  std::vector<RunConfig> configs;
  for (double v : sweep.values) {
    RunConfig c = cfg;
    set_parameter(c, sweep.parameter, v);
    c.sweep.reset();
    try {
      check(c);
    } catch (const ConfigError& e) {
      throw ConfigError("sweep " + sweep.parameter + "=" + format_double(v) + ": " + e.what());
    }
    configs.push_back(std::move(c));
  }

  std::vector<SweepRow> rows(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = sweep.values[i];
      try {
        row.regime = classify(configs[i].market, configs[i].contract);
        if (row.regime.regime != Regime::Dirichlet) {
          const SolutionSurface s = solve_config(configs[i]);
          row.diagnosis = diagnose(extract(s), landmarks_if_any(configs[i]), s.dx());
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const unsigned n_threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& row : rows)
    if (!row.error.empty())
      throw Error(ErrorKind::Convergence, "sweep " + sweep.parameter + "=" + format_double(row.value) + ": " + row.error);

  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      arr.push_back({{"parameter", sweep.parameter},
                     {"value", row.value},
                     {"regime", to_json(row.regime)},
                     {"diagnosis", row.diagnosis ? to_json(*row.diagnosis) : nlohmann::ordered_json(nullptr)}});
    }
    emit(cfg, out, dump(arr));
  } else {
    std::string text = "parameter,value,regime,start_value,limit_value,monotone_nondecreasing,nonmonotone,absorbed_at_zero\n";
    for (const auto& row : rows) {
      text += sweep.parameter + "," + format_double(row.value) + "," + std::string(to_string(row.regime.regime));
      if (row.diagnosis) {
        const auto& d = *row.diagnosis;
        text += "," + format_double(d.start_value) + "," + format_double(d.limit_value) + "," +
                (d.monotone_nondecreasing ? "1" : "0") + "," + (d.nonmonotone ? "1" : "0") + "," +
                (d.absorbed_at_zero ? "1" : "0");
      } else {
        text += ",,,,,";
      }
      text += "\n";
    }
    emit(cfg, out, text);
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto results = run_invariants(cfg);
  std::string failing;
  for (const auto& r : results)
    if (!r.passed) failing += (failing.empty() ? "" : ", ") + r.name;
  emit(cfg, out, format_table(results));
  if (!failing.empty()) {
    out << "failing: " << failing << "\n";
    return kCheckFailed;
  }
  return kOk;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check(cfg);
    if (name == "classify") return cmd_classify(cfg, out);
    if (name == "price") return cmd_price(cfg, out);
    if (name == "surface") return cmd_surface(cfg, out);
    if (name == "boundary") return cmd_boundary(cfg, out);
    if (name == "sweep") return cmd_sweep(cfg, out);
    if (name == "validate") return cmd_validate(cfg, out);
    err << "error: unknown command '" << name << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Convergence) {
      err << "solver error: " << e.what() << "\n";
      return kSolverError;
    }
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  }
}

}  // namespace cbgame::cli
