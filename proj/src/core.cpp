#include "cbgame/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbgame {

std::string ValidationOutcome::message() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out << "; ";
    out << violations[i];
  }
  return out.str();
}

ValidationOutcome validate(const MarketParams& m, const ContractParams& k) {
  ValidationOutcome out;
  auto check = [&](bool holds, const char* name) {
    if (!holds) out.violations.emplace_back(std::string(name) + " violated");
  };
  const double fields[] = {m.r, m.q, m.sigma, k.c, k.K, k.L, k.gamma, k.T};
  if (!std::all_of(std::begin(fields), std::end(fields), [](double v) { return std::isfinite(v); })) {
    out.violations.emplace_back("all parameters finite violated");
    return out;
  }
  check(m.r > 0.0, "r > 0");
  check(m.q >= 0.0, "q ≥ 0");
  check(m.r >= m.q, "r ≥ q");
  check(m.sigma > 0.0, "sigma > 0");
  check(k.L > 0.0, "L > 0");
  check(k.K > k.L, "K > L");
  check(k.c >= 0.0, "c ≥ 0");
  check(k.gamma > 0.0, "gamma > 0");
  check(k.T > 0.0, "T > 0");
  return out;
}

ValidationOutcome validate(const GridSpec& g, const MarketParams& m, const ContractParams& k) {
  ValidationOutcome out = validate(m, k);
  auto check = [&](bool holds, const char* name) {
    if (!holds) out.violations.emplace_back(std::string(name) + " violated");
  };
  check(g.nx >= 2, "nx ≥ 2");
  check(g.nt >= 1, "nt ≥ 1");
  check(g.epsilon > 0.0, "epsilon > 0");
  check(g.theta >= 0.5 && g.theta <= 1.0, "0.5 ≤ theta ≤ 1");
  if (out.ok()) check(g.n > min_truncation_depth(m, k), "n > max{ln K - ln L, ln(rK/c)}");
  return out;
}

void require_valid(const MarketParams& market, const ContractParams& contract) {
  const auto outcome = validate(market, contract);
  if (!outcome) throw Error(ErrorKind::InvalidArgument, outcome.message());
}

TransformedPoint to_transformed(double S, double t, const ContractParams& k) {
  if (!(S > 0.0)) throw Error(ErrorKind::InvalidArgument, "stock price must be positive");
  if (!(t >= 0.0 && t <= k.T)) throw Error(ErrorKind::InvalidArgument, "time outside [0, T]");
  return {std::log(S) - std::log(k.K) + std::log(k.gamma), k.T - t};
}

SpotTime from_transformed(const TransformedPoint& p, const ContractParams& k) {
  return {k.K / k.gamma * std::exp(p.x), k.T - p.tau};
}

double min_truncation_depth(const MarketParams& m, const ContractParams& k) {
  double depth = std::log(k.K) - std::log(k.L);
  if (k.c > 0.0) depth = std::max(depth, std::log(m.r) + std::log(k.K) - std::log(k.c));
  return depth;
}

GridSpec default_grid(const MarketParams& m, const ContractParams& k, int nx, int nt) {
  GridSpec g;
  g.nx = nx;
  g.nt = nt;
  g.n = min_truncation_depth(m, k) + kDefaultTruncationSigmas * m.sigma * std::sqrt(k.T);
  g.epsilon = kDefaultEpsilonRelative * k.K;
  g.theta = 1.0;
  g.smooth_initial = true;
  return g;
}

double far_field_value(const MarketParams& m, const ContractParams& k, double tau) {
  const double v = k.c / m.r + (m.r * k.L - k.c) / m.r * std::exp(-m.r * tau);
  return std::min(v, k.K);
}

}  // namespace cbgame
