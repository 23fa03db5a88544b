#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "cbgame/closedform.hpp"
#include "cbgame/vi_solver.hpp"

namespace cbgame {

enum class BoundaryKind { Conversion, Call };

/// Free boundary in log-moneyness, one value per time row.
struct BoundaryCurve {
  BoundaryKind kind = BoundaryKind::Conversion;
  Eigen::VectorXd taus;
  Eigen::VectorXd values;            // in [-n, 0]
  std::vector<bool> all_contact;     // whole row in contact
  double dx = 0.0;
  double n = 0.0;
};

/// Extracts inf{x : gap(x, tau) <= contact_tol * K} per row, where the gap is u - Ke^x
/// (Conversion) or K - u (Call).
///
/// The infimum is refined to sub-grid accuracy by linearly interpolating gap - contact_tol*K
/// between the last non-contact node and the first contact node. A row whose only contact node is
/// x = 0 reports exactly 0. Throws Error(Domain) for a Dirichlet surface.
BoundaryCurve extract(const SolutionSurface& surface, double contact_tol);
BoundaryCurve extract(const SolutionSurface& surface);

struct NonmonotoneWitness {
  Eigen::Index a = 0, b = 0, c = 0;  // row indices, a < b < c
  double tau_a = 0.0, tau_b = 0.0, tau_c = 0.0;
  double rise = 0.0;  // values[b] - values[a]
  double fall = 0.0;  // values[b] - values[c]
};

struct ShapeDiagnosis {
  bool monotone_nondecreasing = false;
  bool nonmonotone = false;
  std::optional<NonmonotoneWitness> witness;
  bool absorbed_at_zero = false;
  std::optional<std::pair<double, double>> absorption_interval;  // [tau_prev, tau_hit] bracketing T-bar
  double start_value = 0.0;   // c(0+) by linear extrapolation of rows 1 and 2
  double limit_value = 0.0;   // value at the last row
  double max_jump = 0.0;      // largest |values[j+1] - values[j]| over rows j >= 1
  std::optional<double> min_margin_above_underline_X;  // min(values[1..]) - underline_X
};

/// Shape diagnostics with mesh unit `tol` (normally dx):
///   monotone: no row drops more than 2 tol below the running maximum (rows >= 1);
///   nonmonotone: some a < b < c with rise and fall each above 3 tol;
///   absorption: the last row sits exactly at x = 0 and T-bar is bracketed by the first row after
///   which every value is >= -2 tol.
ShapeDiagnosis diagnose(const BoundaryCurve& curve, const std::optional<BoundaryLandmarks>& landmarks, double tol);

}  // namespace cbgame
