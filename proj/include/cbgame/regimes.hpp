#pragma once

#include <string_view>

#include "cbgame/core.hpp"

namespace cbgame {

/// Which obstacle problem governs the bond on the effective domain S < K/gamma.
enum class Regime {
  ConversionVI,  // c < qK: lower obstacle only, the holder converts first
  Dirichlet,     // qK <= c <= rK: plain parabolic problem, nobody stops early
  CallVI,        // c > rK: upper obstacle only, the firm calls first
};

enum class FirstMover { Bondholder, Firm, Simultaneous, Indeterminate };

struct RegimeReport {
  Regime regime = Regime::Dirichlet;
  double qK = 0.0;
  double rK = 0.0;
  bool strict = false;  // c strictly inside the regime's defining inequality
  FirstMover first_mover = FirstMover::Indeterminate;
};

/// Classifies by the coupon thresholds qK <= rK.
///
/// Ties c == qK or c == rK fall in Dirichlet with strict = false and an indeterminate first mover.
/// The report describes the effective domain only: for gamma*S >= K the game stops at once with
/// value gamma*S regardless of the regime.
RegimeReport classify(const MarketParams& market, const ContractParams& contract);

std::string_view to_string(Regime regime);
std::string_view to_string(FirstMover mover);

}  // namespace cbgame
