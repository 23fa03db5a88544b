#pragma once

#include <Eigen/Core>

namespace cbgame {

/// Thomas algorithm for a tridiagonal system. `lower(0)` and `upper(n-1)` are ignored.
/// Stable without pivoting for the diagonally dominant M-matrices produced by the implicit scheme.
template <typename Scalar>
void solve_tridiagonal(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& lower,
                       const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& diag,
                       const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& upper,
                       const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& rhs,
                       Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> out,
                       Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> scratch) {
  const Eigen::Index n = diag.size();
  Scalar denom = diag(0);
  out(0) = rhs(0) / denom;
  for (Eigen::Index i = 1; i < n; ++i) {
    scratch(i) = upper(i - 1) / denom;
    denom = diag(i) - lower(i) * scratch(i);
    out(i) = (rhs(i) - lower(i) * out(i - 1)) / denom;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) out(i) -= scratch(i + 1) * out(i + 1);
}

}  // namespace cbgame
