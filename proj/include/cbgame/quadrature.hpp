#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "cbgame/core.hpp"

namespace cbgame {

/// Gauss-Legendre nodes and weights on [-1, 1] from the Golub-Welsch eigenproblem.
template <typename Scalar, int N>
struct GaussLegendre {
  Eigen::Array<Scalar, N, 1> nodes;
  Eigen::Array<Scalar, N, 1> weights;

  GaussLegendre() {
    Eigen::Matrix<Scalar, N, N> jacobi = Eigen::Matrix<Scalar, N, N>::Zero();
    for (int k = 1; k < N; ++k) {
      const Scalar b = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
      jacobi(k, k - 1) = b;
      jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, N, N>> eig(jacobi);
    nodes = eig.eigenvalues().array();
    weights = Scalar(2) * eig.eigenvectors().row(0).transpose().array().square();
  }

  static const GaussLegendre& instance() {
    static const GaussLegendre rule;
    return rule;
  }
};

/// Adaptive composite Gauss-Legendre for vector-valued integrands f: Scalar -> Array<Scalar, M, 1>.
///
/// A panel is accepted once the one-panel and two-half-panel estimates agree to `abs_tol`
/// (componentwise); the tolerance is split between halves so the total error stays near abs_tol.
template <int M, typename Scalar, typename F>
Eigen::Array<Scalar, M, 1> integrate_adaptive(const F& f, Scalar a, Scalar b, Scalar abs_tol,
                                              int max_depth = 30) {
  using Vec = Eigen::Array<Scalar, M, 1>;
  const auto& rule = GaussLegendre<Scalar, 10>::instance();
  auto panel = [&](Scalar lo, Scalar hi) {
    const Scalar half = Scalar(0.5) * (hi - lo);
    const Scalar mid = Scalar(0.5) * (hi + lo);
    Vec acc = Vec::Zero();
    for (int k = 0; k < rule.nodes.size(); ++k) acc += rule.weights(k) * f(mid + half * rule.nodes(k));
    return Vec(acc * half);
  };
  auto recurse = [&](auto&& self, Scalar lo, Scalar hi, const Vec& whole, Scalar tol, int depth) -> Vec {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    const Vec left = panel(lo, mid);
    const Vec right = panel(mid, hi);
    const Vec refined = left + right;
    if ((refined - whole).abs().maxCoeff() <= tol) return refined;
    if (depth >= max_depth)
      throw Error(ErrorKind::Convergence, "adaptive quadrature exceeded subdivision depth");
    return self(self, lo, mid, left, Scalar(0.5) * tol, depth + 1) +
           self(self, mid, hi, right, Scalar(0.5) * tol, depth + 1);
  };
  if (!(b > a)) return Vec::Zero();
  return recurse(recurse, a, b, panel(a, b), abs_tol, 0);
}

}  // namespace cbgame
