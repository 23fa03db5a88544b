#include "cbgame/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cbgame {

double LatticeValuation::spot(int j, int i) const {
  return S0 * std::pow(up, i) * std::pow(down, j - i);
}

LatticeValuation lattice_price(const MarketParams& m, const ContractParams& k, double S0, int steps) {
  require_valid(m, k);
  if (!(S0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial stock price must be positive");
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "lattice needs at least one step");

  LatticeValuation lv;
  lv.market = m;
  lv.contract = k;
  lv.S0 = S0;
  lv.steps = steps;
  lv.dt = k.T / steps;
  lv.up = std::exp(m.sigma * std::sqrt(lv.dt));
  lv.down = 1.0 / lv.up;
  lv.p = (std::exp((m.r - m.q) * lv.dt) - lv.down) / (lv.up - lv.down);
  if (!(lv.p > 0.0 && lv.p < 1.0)) {
    // p < 1 needs (r - q) sqrt(dt) < sigma (to first order); report the exact bound.
    const double drift = std::abs(m.r - m.q);
    std::ostringstream msg;
    msg << "risk-neutral probability " << lv.p << " outside (0, 1); time step must be below "
        << (drift > 0.0 ? (m.sigma / drift) * (m.sigma / drift) : std::numeric_limits<double>::infinity());
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }

  const std::size_t nodes = LatticeValuation::index(steps + 1, 0);
  lv.values.assign(nodes, 0.0);
  lv.action.assign(nodes, NodeAction::Continue);

  const double disc = std::exp(-m.r * lv.dt);
  const double coupon = k.c * lv.dt * disc;
  for (int i = 0; i <= steps; ++i) {
    const double conv = k.gamma * lv.spot(steps, i);
    lv.values[LatticeValuation::index(steps, i)] = std::max(k.L, conv);
    lv.action[LatticeValuation::index(steps, i)] = NodeAction::Terminal;
  }
  for (int j = steps - 1; j >= 0; --j) {
    for (int i = 0; i <= j; ++i) {
      const std::size_t at = LatticeValuation::index(j, i);
      const double conv = k.gamma * lv.spot(j, i);
      if (conv >= k.K) {
        lv.values[at] = conv;
        lv.action[at] = NodeAction::Convert;
        continue;
      }
      const double cont = disc * (lv.p * lv.value(j + 1, i + 1) + (1.0 - lv.p) * lv.value(j + 1, i)) + coupon;
      if (cont >= k.K) {
        lv.values[at] = k.K;
        lv.action[at] = NodeAction::Call;
      } else if (cont <= conv) {
        lv.values[at] = conv;
        lv.action[at] = NodeAction::Convert;
      } else {
        lv.values[at] = cont;
      }
    }
  }
  return lv;
}

std::vector<double> evaluate_strategies(const LatticeValuation& lv, const std::vector<bool>& holder_stop,
                                        const std::vector<bool>& firm_stop) {
  const auto& k = lv.contract;
  std::vector<double> v(lv.values.size());
  const double disc = std::exp(-lv.market.r * lv.dt);
  const double coupon = k.c * lv.dt * disc;
  for (int i = 0; i <= lv.steps; ++i)
    v[LatticeValuation::index(lv.steps, i)] = std::max(k.L, k.gamma * lv.spot(lv.steps, i));
  for (int j = lv.steps - 1; j >= 0; --j) {
    for (int i = 0; i <= j; ++i) {
      const std::size_t at = LatticeValuation::index(j, i);
      if (holder_stop[at]) {
        v[at] = k.gamma * lv.spot(j, i);
      } else if (firm_stop[at]) {
        v[at] = k.K;
      } else {
        v[at] = disc * (lv.p * v[LatticeValuation::index(j + 1, i + 1)] +
                        (1.0 - lv.p) * v[LatticeValuation::index(j + 1, i)]) +
                coupon;
      }
    }
  }
  return v;
}

std::vector<bool> equilibrium_holder_stops(const LatticeValuation& lv) {
  std::vector<bool> stop(lv.values.size(), false);
  for (std::size_t n = 0; n < stop.size(); ++n) stop[n] = lv.action[n] == NodeAction::Convert;
  return stop;
}

std::vector<bool> equilibrium_firm_stops(const LatticeValuation& lv) {
  std::vector<bool> stop(lv.values.size(), false);
  for (int j = 0; j < lv.steps; ++j) {
    for (int i = 0; i <= j; ++i) {
      const std::size_t at = LatticeValuation::index(j, i);
      stop[at] = lv.action[at] == NodeAction::Call || lv.contract.gamma * lv.spot(j, i) >= lv.contract.K;
    }
  }
  return stop;
}

SaddleReport verify_saddle(const LatticeValuation& lv, int perturbations, std::uint64_t seed) {
  SaddleReport rep;
  rep.seed = seed;
  rep.perturbations = perturbations;

  const auto holder_eq = equilibrium_holder_stops(lv);
  const auto firm_eq = equilibrium_firm_stops(lv);
  const auto v_eq = evaluate_strategies(lv, holder_eq, firm_eq);
  for (std::size_t n = 0; n < v_eq.size(); ++n)
    rep.equilibrium_mismatch = std::max(rep.equilibrium_mismatch, std::abs(v_eq[n] - lv.values[n]));

  const std::size_t interior = LatticeValuation::index(lv.steps, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rate_dist(0.001, 0.5);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto perturb = [&](std::vector<bool> stops) {
    const double rate = rate_dist(rng);
    for (std::size_t n = 0; n < interior; ++n)
      if (coin(rng) < rate) stops[n] = !stops[n];
    return stops;
  };
  auto min_diff = [](const std::vector<double>& hi, const std::vector<double>& lo) {
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < hi.size(); ++n) slack = std::min(slack, hi[n] - lo[n]);
    return slack;
  };

  for (int d = 0; d < perturbations; ++d) {
    const auto deviated = evaluate_strategies(lv, perturb(holder_eq), firm_eq);
    rep.holder_slacks.push_back(min_diff(v_eq, deviated));
  }
  for (int d = 0; d < perturbations; ++d) {
    const auto deviated = evaluate_strategies(lv, holder_eq, perturb(firm_eq));
    rep.firm_slacks.push_back(min_diff(deviated, v_eq));
  }
  rep.min_slack = 0.0;
  for (double s : rep.holder_slacks) rep.min_slack = std::min(rep.min_slack, s);
  for (double s : rep.firm_slacks) rep.min_slack = std::min(rep.min_slack, s);
  return rep;
}

}  // namespace cbgame
