#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "cbgame/core.hpp"

namespace cbgame {

/// Roots of (sigma^2/2) a^2 + (r - q - sigma^2/2) a - r = 0, the characteristic equation of the
/// stationary operator L u = (sigma^2/2) u'' + (r - q - sigma^2/2) u' - r u.
template <typename Scalar>
struct CharRootsT {
  Scalar alpha_plus;
  Scalar alpha_minus;
};
using CharRoots = CharRootsT<double>;

template <typename Scalar>
CharRootsT<Scalar> char_roots(Scalar r, Scalar q, Scalar sigma) {
  const Scalar a = Scalar(0.5) * sigma * sigma;
  const Scalar b = r - q - a;
  const Scalar root_disc = std::sqrt(b * b + Scalar(4) * a * r);
  // Cancellation-free form: take the root without subtraction, the other from the product -r/a.
  if (b >= Scalar(0)) {
    const Scalar plus = Scalar(2) * r / (b + root_disc);
    return {plus, -r / (a * plus)};
  }
  const Scalar plus = (root_disc - b) / (Scalar(2) * a);
  return {plus, -r / (a * plus)};
}

inline CharRoots char_roots(const MarketParams& m) { return char_roots(m.r, m.q, m.sigma); }

/// Residual of the characteristic quadratic at alpha.
template <typename Scalar>
Scalar char_residual(Scalar alpha, Scalar r, Scalar q, Scalar sigma) {
  const Scalar a = Scalar(0.5) * sigma * sigma;
  return a * alpha * alpha + (r - q - a) * alpha - r;
}

/// Landmarks of the conversion boundary in log-moneyness units.
struct BoundaryLandmarks {
  double underline_X = 0.0;              // ln c - ln K - ln q: the contact set lies in x >= underline_X
  double c0 = 0.0;                       // max{underline_X, ln L - ln K}: start point c(0+)
  std::optional<double> c_inf;           // long-maturity limit, when the boundary is not absorbed
  bool absorbing = false;                // c > rK(a+ - 1)/a+: the boundary reaches x = 0 in finite time
  double absorbing_threshold = 0.0;      // rK(a+ - 1)/a+
  double nonmonotone_threshold = 0.0;    // rL(a+ - 1)/a+
  bool nonmonotone_expected = false;     // c <= nonmonotone_threshold
  double alpha_plus = 0.0;
};

/// Requires the ConversionVI regime (c < qK) and c > 0.
BoundaryLandmarks landmarks(const MarketParams& market, const ContractParams& contract);

/// Bounded solution of the perpetual problem -L v = c* with obstacle v >= Ke^x and v(0) = K.
template <typename Scalar>
class PerpetualSolutionT {
 public:
  enum class Form { SmoothPasting, BoundaryAbsorbed };

  PerpetualSolutionT(Scalar r, Scalar q, Scalar sigma, Scalar K, Scalar c_star)
      : r_(r), K_(K), c_star_(c_star), alpha_(char_roots(r, q, sigma).alpha_plus) {
    if (!(c_star > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "effective coupon must be positive");
    threshold_ = r * K * (alpha_ - Scalar(1)) / alpha_;
    if (c_star <= threshold_) {
      form_ = Form::SmoothPasting;
      // Capped at 0: only rounding can push it above when c* sits on the threshold.
      x_star_ = std::min(Scalar(0), std::log(alpha_ / (alpha_ - Scalar(1)) * c_star / (r * K)));
    } else {
      form_ = Form::BoundaryAbsorbed;
    }
  }

  Form form() const { return form_; }
  std::optional<Scalar> x_star() const {
    return form_ == Form::SmoothPasting ? std::optional<Scalar>(x_star_) : std::nullopt;
  }
  Scalar alpha_plus() const { return alpha_; }
  Scalar threshold() const { return threshold_; }

  Scalar operator()(Scalar x) const {
    if (form_ == Form::SmoothPasting) {
      if (x >= x_star_) return K_ * std::exp(x);
      return K_ / alpha_ * std::exp(alpha_ * x + (Scalar(1) - alpha_) * x_star_) + c_star_ / r_;
    }
    const Scalar e = std::exp(alpha_ * x);
    return K_ * e + c_star_ / r_ * (Scalar(1) - e);
  }

  /// v'(x); one-sided from the left at x* (the two sides agree by smooth pasting).
  Scalar derivative(Scalar x) const {
    if (form_ == Form::SmoothPasting) {
      if (x > x_star_) return K_ * std::exp(x);
      return K_ * std::exp(alpha_ * x + (Scalar(1) - alpha_) * x_star_);
    }
    return alpha_ * (K_ - c_star_ / r_) * std::exp(alpha_ * x);
  }

 private:
  Scalar r_, K_, c_star_, alpha_;
  Scalar threshold_ = Scalar(0);
  Scalar x_star_ = Scalar(0);
  Form form_ = Form::SmoothPasting;
};
using PerpetualSolution = PerpetualSolutionT<double>;

inline PerpetualSolution perpetual(const MarketParams& m, double K, double c_star) {
  return PerpetualSolution(m.r, m.q, m.sigma, K, c_star);
}

/// Explicit solution of the Dirichlet problem
///   u_tau - L u = c on x < 0,  u(0, tau) = K,  u(x, 0) = max{L, Ke^x}
/// written as Gaussian integrals over the elapsed time. The time integrals use the substitution
/// s = sqrt(tau - t) and adaptive Gauss-Legendre; every term is formed in log space so the
/// e^{-2 alpha_1 x} factors never overflow. At tau = 0 it returns max{L, Ke^x}.
double dirichlet_explicit(double x, double tau, const MarketParams& market, const ContractParams& contract);

}  // namespace cbgame
