#include "cbgame/cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cbgame/boundary.hpp"
#include "cbgame/closedform.hpp"
#include "cbgame/lattice.hpp"
#include "cbgame/vi_solver.hpp"

namespace cbgame::cli {

namespace {

constexpr std::uint64_t kSaddleSeed = 20240611;
constexpr int kSaddleSteps = 300;
constexpr int kSaddlePerturbations = 50;

InvariantResult at_most(std::string name, double measured, double limit) {
  return {std::move(name), measured <= limit, measured, limit, "<="};
}

InvariantResult at_least(std::string name, double measured, double limit) {
  return {std::move(name), measured >= limit, measured, limit, ">="};
}

void surface_checks(const SolutionSurface& s, const RunConfig& cfg, std::vector<InvariantResult>& out) {
  const auto& m = cfg.market;
  const auto& k = cfg.contract;
  const int nx = s.grid.nx;
  const int nt = s.grid.nt;
  const double est_tol = 2.0 * (s.dx() + s.dtau()) * k.K;
  const Eigen::ArrayXd obstacle = k.K * s.xs.array().exp();

  double right = 0.0;
  for (int j = 0; j <= nt; ++j) right = std::max(right, std::abs(s.u(nx, j) - k.K));
  out.push_back(at_most("right edge equals K", right, 0.0));

  double initial = 0.0;
  for (int i = 0; i <= nx; ++i) initial = std::max(initial, std::abs(s.u(i, 0) - std::max(k.L, obstacle(i))));
  out.push_back(at_most("initial row equals payoff", initial, 0.0));

  const Regime regime = s.regime.regime;
  const double below = (s.u.array().colwise() - obstacle).minCoeff();
  const double above = (s.u.array() - k.K).maxCoeff();
  if (regime != Regime::CallVI) out.push_back(at_least("value above conversion obstacle", below, -est_tol));
  if (regime != Regime::ConversionVI) out.push_back(at_most("value below call price", above, est_tol));

  if (regime == Regime::ConversionVI) {
    double lower_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= nt; ++j) {
      const double floor_j = k.c / m.r + (m.r * k.L - k.c) / m.r * std::exp(-m.r * s.taus(j));
      for (int i = 0; i <= nx; ++i) lower_gap = std::min(lower_gap, s.u(i, j) - std::max(obstacle(i), floor_j));
    }
    out.push_back(at_least("estimate: value lower bound", lower_gap, -est_tol));
    out.push_back(at_most("estimate: value upper bound", above, est_tol));

    double grad_low = std::numeric_limits<double>::infinity();
    double grad_high = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= nt; ++j) {
      for (int i = 1; i < nx; ++i) {
        const double d = (s.u(i + 1, j) - s.u(i - 1, j)) / (2.0 * s.dx());
        grad_low = std::min(grad_low, d);
        grad_high = std::max(grad_high, d - obstacle(i));
      }
    }
    out.push_back(at_least("estimate: gradient nonnegative", grad_low, -est_tol));
    out.push_back(at_most("estimate: gradient below obstacle slope", grad_high, est_tol));

    if (k.c >= m.r * k.L) {
      double dtau_min = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= nt; ++j)
        for (int i = 1; i < nx; ++i) dtau_min = std::min(dtau_min, (s.u(i, j) - s.u(i, j - 1)) / s.dtau());
      out.push_back(at_least("estimate: value nondecreasing in tau", dtau_min, -2.0 * s.dtau() * k.K));
    }
  }

  if (regime == Regime::Dirichlet) {
    // Every node would cost a quadrature each; a strided subsample keeps validate quick.
    const int sx = std::max(1, nx / 50);
    const int st = std::max(1, nt / 50);
    const double corner = std::log(k.L) - std::log(k.K);
    double worst = 0.0;
    for (int j = 0; j <= nt; j += st) {
      for (int i = 0; i <= nx; i += sx) {
        if (std::hypot(s.xs(i) - corner, s.taus(j)) <= 3.0 * s.dx()) continue;
        worst = std::max(worst, std::abs(s.u(i, j) - dirichlet_explicit(s.xs(i), s.taus(j), m, k)));
      }
    }
    out.push_back(at_most("closed-form agreement / K", worst / k.K, cfg.tol));
  }

  const auto comp = complementarity_residual(s, m, k);
  out.push_back(at_most("complementarity residual max / K", comp.max, s.contact_tol));
}

void boundary_checks(const SolutionSurface& s, const RunConfig& cfg, std::vector<InvariantResult>& out) {
  const auto& m = cfg.market;
  const auto& k = cfg.contract;
  if (s.regime.regime == Regime::Dirichlet) return;
  const BoundaryCurve curve = extract(s);
  const double dx = s.dx();
  if (s.regime.regime == Regime::CallVI || k.c <= 0.0) {
    const auto d = diagnose(curve, std::nullopt, dx);
    out.push_back(at_most("boundary max jump / dx", d.max_jump / dx, static_cast<double>(s.grid.nx)));
    return;
  }
  const BoundaryLandmarks lm = landmarks(m, k);
  const auto d = diagnose(curve, lm, dx);
  out.push_back(at_least("boundary above contact-set bound", *d.min_margin_above_underline_X, -2.0 * dx));
  if (k.c >= m.r * k.L)
    out.push_back({"boundary nondecreasing", d.monotone_nondecreasing, d.monotone_nondecreasing ? 1.0 : 0.0, 1.0, "=="});
  if (lm.absorbing) {
    out.push_back({"boundary absorbed at zero", d.absorbed_at_zero, d.absorbed_at_zero ? 1.0 : 0.0, 1.0, "=="});
  } else if (lm.nonmonotone_expected) {
    out.push_back({"boundary nonmonotone", d.nonmonotone, d.nonmonotone ? 1.0 : 0.0, 1.0, "=="});
  }
}

void lattice_checks(const SolutionSurface& s, const RunConfig& cfg, std::vector<InvariantResult>& out) {
  const auto& m = cfg.market;
  const auto& k = cfg.contract;
  const double S = cfg.S.value_or(0.8 * k.K / k.gamma);
  const double t = cfg.t.value_or(0.0);
  const ContractParams remaining{k.c, k.K, k.L, k.gamma, k.T - t};

  const double fd = price(s, S, t);
  if (remaining.T > 0.0) {
    const LatticeValuation lv = lattice_price(m, remaining, S, cfg.lattice_steps);
    out.push_back(at_most("lattice cross-check / K", std::abs(fd - lv.root()) / k.K, cfg.tol));
  }

  const LatticeValuation tree = lattice_price(m, k, S, std::min(cfg.lattice_steps, kSaddleSteps));
  const RegimeReport& reg = s.regime;
  int stray = 0;
  for (int j = 0; j < tree.steps; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (k.gamma * tree.spot(j, i) >= k.K) continue;
      const NodeAction a = tree.action_at(j, i);
      if (a == NodeAction::Call && k.c < reg.rK) ++stray;
      if (a == NodeAction::Convert && k.c > reg.qK) ++stray;
    }
  }
  out.push_back(at_most("lattice action labels match regime", stray, 0.0));

  const SaddleReport rep = verify_saddle(tree, kSaddlePerturbations, kSaddleSeed);
  out.push_back(at_least("saddle point min slack / K", rep.min_slack / k.K, -1e-10));
  out.push_back(at_most("saddle point equilibrium mismatch / K", rep.equilibrium_mismatch / k.K, 1e-10));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

std::vector<InvariantResult> run_invariants(const RunConfig& cfg) {
  std::vector<InvariantResult> out;
  const RegimeReport reg = classify(cfg.market, cfg.contract);
  const bool consistent = (reg.regime == Regime::ConversionVI) == (cfg.contract.c < reg.qK) &&
                          (reg.regime == Regime::CallVI) == (cfg.contract.c > reg.rK);
  out.push_back({"regime matches coupon thresholds", consistent, consistent ? 1.0 : 0.0, 1.0, "=="});

  SolverOptions opts;
  opts.contact_tol = cfg.contact_tol;
  const SolutionSurface s = solve(cfg.market, cfg.contract, cfg.grid(), opts);
  surface_checks(s, cfg, out);
  boundary_checks(s, cfg, out);
  lattice_checks(s, cfg, out);
  return out;
}

std::string format_table(const std::vector<InvariantResult>& results) {
  std::size_t width = 9;
  for (const auto& r : results) width = std::max(width, r.name.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  std::string out = pad("invariant", width) + "  result  " + pad("measured", 14) + "  limit\n";
  int failed = 0;
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    out += pad(r.name, width) + (r.passed ? "  PASS    " : "  FAIL    ") + pad(fmt(r.measured), 14) + "  " +
           r.relation + " " + fmt(r.limit) + "\n";
  }
  out += std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " invariants passed\n";
  return out;
}

}  // namespace cbgame::cli
