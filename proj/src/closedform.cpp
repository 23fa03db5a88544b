#include "cbgame/closedform.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cbgame/normal.hpp"
#include "cbgame/quadrature.hpp"
#include "cbgame/regimes.hpp"

namespace cbgame {

BoundaryLandmarks landmarks(const MarketParams& m, const ContractParams& k) {
  require_valid(m, k);
  if (!(k.c > 0.0))
    throw Error(ErrorKind::InvalidArgument,
                "no coupon: the contact-set bound ln c - ln K - ln q is undefined for c = 0");
  if (classify(m, k).regime != Regime::ConversionVI)
    throw Error(ErrorKind::Domain, "landmarks require the ConversionVI regime (c < qK)");

  BoundaryLandmarks lm;
  const double ap = char_roots(m).alpha_plus;
  lm.alpha_plus = ap;
  lm.underline_X = std::log(k.c) - std::log(k.K) - std::log(m.q);
  lm.c0 = std::max(lm.underline_X, std::log(k.L) - std::log(k.K));
  lm.absorbing_threshold = m.r * k.K * (ap - 1.0) / ap;
  lm.nonmonotone_threshold = m.r * k.L * (ap - 1.0) / ap;
  lm.absorbing = k.c > lm.absorbing_threshold;
  lm.nonmonotone_expected = k.c <= lm.nonmonotone_threshold;
  if (!lm.absorbing) lm.c_inf = std::log(ap / (ap - 1.0) * k.c / (m.r * k.K));
  return lm;
}

namespace {

// A signed term  sign * exp(log_coef - rate * s^2 + log Phi(d(y, s))),  where
// d(y, s) = y / (sigma s) - sigma * shift * s  and s = sqrt(tau - t) is the elapsed-time root.
struct GaussianTerm {
  double sign;
  double log_coef;
  double rate;
  double y;
  double shift;

  double eval(double s, double sigma) const {
    const double d = y / (sigma * s) - sigma * shift * s;
    const double log_value = log_coef - rate * s * s + log_normal_cdf(d);
    return sign * std::exp(log_value);
  }
};

// Value at s = sqrt(tau) of a boundary-data term, with the tau -> 0 limit of Phi taken exactly.
double boundary_term(const GaussianTerm& term, double s, double sigma) {
  if (s > 0.0) return term.eval(s, sigma);
  const double phi = term.y > 0.0 ? 1.0 : (term.y < 0.0 ? 0.0 : 0.5);
  return phi == 0.0 ? 0.0 : term.sign * std::exp(term.log_coef) * phi;
}

}  // namespace

double dirichlet_explicit(double x, double tau, const MarketParams& m, const ContractParams& k) {
  if (x > 0.0) throw Error(ErrorKind::InvalidArgument, "dirichlet_explicit requires x <= 0");
  if (!(tau >= 0.0)) throw Error(ErrorKind::InvalidArgument, "dirichlet_explicit requires tau >= 0");
  if (x == 0.0) return k.K;
  if (tau == 0.0) return std::max(k.L, k.K * std::exp(x));

  const double sigma = m.sigma;
  const double alpha1 = -0.5 + (m.r - m.q) / (sigma * sigma);
  const double logK = std::log(k.K);
  const double logL = std::log(k.L);
  const double a = logL - logK;
  const double reflect = -2.0 * alpha1 * x;
  const double ninf = -std::numeric_limits<double>::infinity();
  const double log_c = k.c > 0.0 ? std::log(k.c) : ninf;
  const double log_qK = m.q > 0.0 ? std::log(m.q) + logK : ninf;

  // Time-integrated terms: Phi_1 carries rate r and shift alpha_1, Phi_2 rate q and alpha_1 + 1.
  const GaussianTerm integrated[4] = {
      {+1.0, log_c, m.r, -x, alpha1},
      {-1.0, log_qK + x, m.q, -x, alpha1 + 1.0},
      {-1.0, log_c + reflect, m.r, x, alpha1},
      {+1.0, log_qK + reflect - x, m.q, x, alpha1 + 1.0},
  };
  // Initial-data terms, evaluated at t = 0.
  const GaussianTerm initial[4] = {
      {+1.0, logL, m.r, a - x, alpha1},
      {-1.0, logK + x, m.q, a - x, alpha1 + 1.0},
      {-1.0, logL + reflect, m.r, a + x, alpha1},
      {+1.0, logK + reflect - x, m.q, a + x, alpha1 + 1.0},
  };

  const double root_tau = std::sqrt(tau);
  auto integrand = [&](double s) {
    Eigen::Array4d v;
    for (int i = 0; i < 4; ++i) v(i) = integrated[i].eval(s, sigma) * 2.0 * s;
    return v;
  };
  const Eigen::Array4d integrals = integrate_adaptive<4>(integrand, 0.0, root_tau, 1e-10 * k.K);

  double value = k.K * std::exp(x) + integrals.sum();
  for (const auto& term : initial) value += boundary_term(term, root_tau, sigma);
  return value;
}

}  // namespace cbgame
