#pragma once

#include <cstdint>
#include <vector>

#include "cbgame/core.hpp"

namespace cbgame {

enum class NodeAction : std::uint8_t { Continue, Convert, Call, Terminal };

/// Recombining CRR tree for the convertible bond game, solved by backward induction.
///
/// Node (j, i) is time step j with i up-moves; storage is level-major, offset j(j+1)/2.
struct LatticeValuation {
  MarketParams market;
  ContractParams contract;
  double S0 = 0.0;
  int steps = 0;
  double dt = 0.0;
  double up = 1.0;
  double down = 1.0;
  double p = 0.5;
  std::vector<double> values;
  std::vector<NodeAction> action;

  static std::size_t index(int j, int i) { return static_cast<std::size_t>(j) * (j + 1) / 2 + i; }
  double spot(int j, int i) const;
  double value(int j, int i) const { return values[index(j, i)]; }
  NodeAction action_at(int j, int i) const { return action[index(j, i)]; }
  double root() const { return values[0]; }
};

/// Backward induction with one-step coupon accrual c dt e^{-r dt}:
///   V = gamma S                                   if gamma S >= K
///   V = min(max(e^{-r dt} E[V'] + c dt e^{-r dt}, gamma S), K)   otherwise
/// and V = max{L, gamma S} at maturity. Throws when the risk-neutral probability leaves (0, 1).
LatticeValuation lattice_price(const MarketParams& market, const ContractParams& contract, double S0, int steps);

/// Value of the payoff functional on the tree for fixed stopping sets.
///
/// The holder stops where `holder_stop` is set (conversion wins ties), the firm where `firm_stop`
/// is set; flags at maturity are ignored. Returns the value at every node.
std::vector<double> evaluate_strategies(const LatticeValuation& valuation, const std::vector<bool>& holder_stop,
                                        const std::vector<bool>& firm_stop);

/// Equilibrium stopping sets read off the action labels; both players stop where gamma S >= K.
std::vector<bool> equilibrium_holder_stops(const LatticeValuation& valuation);
std::vector<bool> equilibrium_firm_stops(const LatticeValuation& valuation);

struct SaddleReport {
  std::uint64_t seed = 0;
  int perturbations = 0;            // per side
  std::vector<double> holder_slacks;  // V* - V(tau*, theta'), minimum over nodes, per deviation
  std::vector<double> firm_slacks;    // V(tau', theta*) - V*, minimum over nodes, per deviation
  double min_slack = 0.0;             // over both lists; 0 when there are no deviations
  double equilibrium_mismatch = 0.0;  // max |V(tau*, theta*) - lattice value|
  bool passed(double tolerance) const { return min_slack >= -tolerance && equilibrium_mismatch <= tolerance; }
};

/// Checks the Nash inequalities V(tau*, theta) <= V* <= V(tau, theta*) on every node of the tree
/// against `perturbations` random deviations of each player (the other held at equilibrium).
/// Each deviation flips each non-terminal node of the stopping set with its own random probability.
SaddleReport verify_saddle(const LatticeValuation& valuation, int perturbations, std::uint64_t seed);

}  // namespace cbgame
