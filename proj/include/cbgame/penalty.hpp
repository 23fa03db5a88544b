#pragma once

#include <string>

namespace cbgame {

/// Convex C^1 penalty and initial-data smoothing for the obstacle problem.
///
///   beta(s) = 0                                  s <= -eps
///           = M ((s + eps)/eps)^2                 -eps < s <= 0
///           = M (1 + 2 s/eps + kappa (s/eps)^2)   s > 0
///
///   pi(s)   = 0 for s <= -eps,  s for s >= eps,  (s + eps)^2 / (4 eps) in between.
///
/// s is a price gap (obstacle minus value), so eps is in currency units and M in currency/year.
template <typename Scalar>
struct PenaltySpecT {
  Scalar epsilon;
  Scalar M;
  Scalar kappa = Scalar(1e4);

  Scalar beta(Scalar s) const {
    if (s <= -epsilon) return Scalar(0);
    const Scalar z = s / epsilon;
    if (s <= Scalar(0)) return M * (z + Scalar(1)) * (z + Scalar(1));
    return M * (Scalar(1) + Scalar(2) * z + kappa * z * z);
  }

  Scalar beta_prime(Scalar s) const {
    if (s <= -epsilon) return Scalar(0);
    const Scalar z = s / epsilon;
    if (s <= Scalar(0)) return Scalar(2) * M * (z + Scalar(1)) / epsilon;
    return Scalar(2) * M * (Scalar(1) + kappa * z) / epsilon;
  }

  Scalar smooth(Scalar s) const {
    if (s <= -epsilon) return Scalar(0);
    if (s >= epsilon) return s;
    return (s + epsilon) * (s + epsilon) / (Scalar(4) * epsilon);
  }

  std::string shape() const { return "piecewise quadratic: M((s+eps)/eps)^2 on (-eps,0], M(1+2s/eps+kappa(s/eps)^2) above"; }
  std::string smoothing() const { return "C1 quadratic bridge (s+eps)^2/(4eps) on (-eps,eps)"; }
};
using PenaltySpec = PenaltySpecT<double>;

}  // namespace cbgame
