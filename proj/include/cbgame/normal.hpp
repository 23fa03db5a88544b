#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace cbgame {

/// Standard normal CDF via erfc, accurate to ~1e-16 absolute on the whole line.
template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  using std::erfc;
  return Scalar(0.5) * erfc(-z / std::numbers::sqrt2_v<Scalar>);
}

/// log Phi(z), finite for every finite z.
///
/// erfc keeps full relative precision down to z ~ -37; below -30 the asymptotic series
///   log Phi(z) = -z^2/2 - log(-z) - log(2 pi)/2 + log(1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8)
/// is already exact to double precision and avoids the underflow.
template <typename Scalar>
Scalar log_normal_cdf(Scalar z) {
  using std::erfc;
  using std::log;
  using std::log1p;
  if (std::isinf(z)) return z > 0 ? Scalar(0) : -std::numeric_limits<Scalar>::infinity();
  if (z > Scalar(0)) return log1p(Scalar(-0.5) * erfc(z / std::numbers::sqrt2_v<Scalar>));
  if (z > Scalar(-30)) return log(Scalar(0.5) * erfc(-z / std::numbers::sqrt2_v<Scalar>));
  const Scalar w = Scalar(1) / (z * z);
  const Scalar series = Scalar(1) - w * (Scalar(1) - w * (Scalar(3) - w * (Scalar(15) - Scalar(105) * w)));
  return -Scalar(0.5) * z * z - log(-z) - Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar>) +
         log(series);
}

template <typename Scalar>
Scalar normal_pdf(Scalar z) {
  return std::exp(Scalar(-0.5) * z * z) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
}

}  // namespace cbgame
