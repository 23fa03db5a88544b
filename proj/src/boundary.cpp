#include "cbgame/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace cbgame {

BoundaryCurve extract(const SolutionSurface& surf, double contact_tol) {
  BoundaryCurve curve;
  switch (surf.regime.regime) {
    case Regime::ConversionVI: curve.kind = BoundaryKind::Conversion; break;
    case Regime::CallVI: curve.kind = BoundaryKind::Call; break;
    case Regime::Dirichlet: throw Error(ErrorKind::Domain, "regime has empty contact set");
  }
  const auto& k = surf.contract;
  const Eigen::Index nx = surf.grid.nx;
  const Eigen::Index rows = surf.u.cols();
  const double band = contact_tol * k.K;
  const Eigen::ArrayXd obstacle = k.K * surf.xs.array().exp();

  curve.taus = surf.taus;
  curve.values.resize(rows);
  curve.all_contact.assign(rows, false);
  curve.dx = surf.dx();
  curve.n = surf.grid.n;

  Eigen::ArrayXd gap(nx + 1);
  for (Eigen::Index j = 0; j < rows; ++j) {
    if (curve.kind == BoundaryKind::Conversion)
      gap = surf.u.col(j).array() - obstacle;
    else
      gap = k.K - surf.u.col(j).array();

    Eigen::Index first = nx;
    for (Eigen::Index i = 0; i <= nx; ++i) {
      if (gap(i) <= band) {
        first = i;
        break;
      }
    }
    if (first == 0) {
      curve.values(j) = -surf.grid.n;
      curve.all_contact[j] = (gap <= band).all();
    } else if (first == nx) {
      curve.values(j) = 0.0;
    } else {
      const double above = gap(first - 1) - band;
      const double below = gap(first) - band;
      curve.values(j) = surf.xs(first - 1) + curve.dx * above / (above - below);
    }
  }
  return curve;
}

BoundaryCurve extract(const SolutionSurface& surf) { return extract(surf, surf.contact_tol); }

ShapeDiagnosis diagnose(const BoundaryCurve& curve, const std::optional<BoundaryLandmarks>& landmarks, double tol) {
  ShapeDiagnosis d;
  const Eigen::VectorXd& v = curve.values;
  const Eigen::Index rows = v.size();
  if (rows == 0) return d;

  d.limit_value = v(rows - 1);
  d.start_value = rows >= 3 ? 2.0 * v(1) - v(2) : v(0);

  // Monotonicity against the running maximum from row 1 on; row 0 is the payoff's own kink.
  d.monotone_nondecreasing = true;
  double running = rows > 1 ? v(1) : v(0);
  for (Eigen::Index j = 1; j < rows; ++j) {
    if (v(j) < running - 2.0 * tol) d.monotone_nondecreasing = false;
    running = std::max(running, v(j));
  }
  for (Eigen::Index j = 1; j + 1 < rows; ++j) d.max_jump = std::max(d.max_jump, std::abs(v(j + 1) - v(j)));

  // Best witness: for each peak b, the lowest value before it and after it.
  if (rows >= 3) {
    Eigen::VectorXi prefix_min(rows), suffix_min(rows);
    prefix_min(0) = 0;
    for (Eigen::Index j = 1; j < rows; ++j) prefix_min(j) = v(j) < v(prefix_min(j - 1)) ? j : prefix_min(j - 1);
    suffix_min(rows - 1) = static_cast<int>(rows - 1);
    for (Eigen::Index j = rows - 2; j >= 0; --j)
      suffix_min(j) = v(j) <= v(suffix_min(j + 1)) ? j : suffix_min(j + 1);
    double best = 0.0;
    for (Eigen::Index b = 1; b + 1 < rows; ++b) {
      const Eigen::Index a = prefix_min(b - 1);
      const Eigen::Index c = suffix_min(b + 1);
      const double rise = v(b) - v(a);
      const double fall = v(b) - v(c);
      if (rise > 3.0 * tol && fall > 3.0 * tol && std::min(rise, fall) > best) {
        best = std::min(rise, fall);
        d.witness = NonmonotoneWitness{a, b, c, curve.taus(a), curve.taus(b), curve.taus(c), rise, fall};
      }
    }
    d.nonmonotone = d.witness.has_value();
  }
  if (d.nonmonotone) d.monotone_nondecreasing = false;

  // Earliest row after which the curve never leaves the strip [-2 tol, 0].
  Eigen::Index hit = rows;
  for (Eigen::Index j = rows - 1; j >= 1 && v(j) >= -2.0 * tol; --j) hit = j;
  d.absorbed_at_zero = hit < rows && v(rows - 1) == 0.0;
  if (d.absorbed_at_zero) d.absorption_interval = std::make_pair(curve.taus(hit - 1), curve.taus(hit));

  if (landmarks && rows > 1) d.min_margin_above_underline_X = v.tail(rows - 1).minCoeff() - landmarks->underline_X;
  return d;
}

}  // namespace cbgame
