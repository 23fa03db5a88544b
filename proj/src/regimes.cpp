#include "cbgame/regimes.hpp"

namespace cbgame {

RegimeReport classify(const MarketParams& m, const ContractParams& k) {
  RegimeReport rep;
  rep.qK = m.q * k.K;
  rep.rK = m.r * k.K;
  const double c = k.c;
  if (c < rep.qK) {
    rep.regime = Regime::ConversionVI;
    rep.strict = true;
    rep.first_mover = FirstMover::Bondholder;
  } else if (c > rep.rK) {
    rep.regime = Regime::CallVI;
    rep.strict = true;
    rep.first_mover = FirstMover::Firm;
  } else {
    rep.regime = Regime::Dirichlet;
    rep.strict = c > rep.qK && c < rep.rK;
    rep.first_mover = rep.strict ? FirstMover::Simultaneous : FirstMover::Indeterminate;
  }
  return rep;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::ConversionVI: return "ConversionVI";
    case Regime::Dirichlet: return "Dirichlet";
    case Regime::CallVI: return "CallVI";
  }
  return "?";
}

std::string_view to_string(FirstMover mover) {
  switch (mover) {
    case FirstMover::Bondholder: return "Bondholder";
    case FirstMover::Firm: return "Firm";
    case FirstMover::Simultaneous: return "Simultaneous";
    case FirstMover::Indeterminate: return "Indeterminate";
  }
  return "?";
}

}  // namespace cbgame
