#pragma once

#include "cbgame/core.hpp"

namespace fixtures {

// Reference market and contract used throughout the suite.
inline cbgame::MarketParams market() { return {0.05, 0.02, 0.3}; }

inline cbgame::ContractParams contract(double c, double T = 1.0, double L = 100.0) {
  return {c, 110.0, L, 1.0, T};
}

}  // namespace fixtures
