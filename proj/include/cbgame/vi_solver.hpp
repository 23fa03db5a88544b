#pragma once

#include <Eigen/Core>
#include <optional>

#include "cbgame/core.hpp"
#include "cbgame/penalty.hpp"
#include "cbgame/regimes.hpp"

namespace cbgame {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SolverOptions {
  double newton_tol = 1e-10;  // relative to K, on the time-step residual (currency units)
  int max_newton = 200;
  double damping = 1.0;       // Newton step fraction
  std::optional<double> contact_tol;  // relative to K; defaults to default_contact_tol()
};

/// Finite-difference solution on the truncated transformed domain.
///
/// u(i, j) approximates u(xs(i), taus(j)). Column 0 holds the exact payoff max{L, Ke^x} and row nx
/// the right boundary value K. Contact masks compare against contact_tol * K.
struct SolutionSurface {
  GridSpec grid;
  MarketParams market;
  ContractParams contract;
  RegimeReport regime;
  Eigen::VectorXd xs;
  Eigen::VectorXd taus;
  Eigen::MatrixXd u;
  BoolArray contact_lower;  // u - Ke^x <= contact_tol * K
  BoolArray contact_upper;  // K - u <= contact_tol * K
  double contact_tol = 0.0;
  bool upwind = false;
  long newton_iterations = 0;

  double dx() const { return grid.n / grid.nx; }
  double dtau() const { return contract.T / grid.nt; }
  Eigen::Index rows() const { return u.rows(); }
  Eigen::Index cols() const { return u.cols(); }
};

/// Penalty width plus interpolation slack: the discrete penalised solution sits inside
/// [Ke^x, Ke^x + eps] wherever the obstacle binds.
double default_contact_tol(const GridSpec& grid, const ContractParams& contract);

/// Penalty used for a regime: M = qK - c below the lower obstacle, c - rK above the upper one.
/// Dirichlet has none.
std::optional<PenaltySpec> penalty_for(const MarketParams& market, const ContractParams& contract,
                                       const GridSpec& grid);

/// Theta-scheme solve of the penalised problem selected by the regime:
///   ConversionVI: u_tau - L u - beta(Ke^x - u) = c
///   CallVI:       u_tau - L u + beta(u - K)    = c
///   Dirichlet:    u_tau - L u                  = c
/// with u(0, tau) = K, u(-n, tau) = far_field_value(tau), and each implicit step solved by Newton.
SolutionSurface solve(const MarketParams& market, const ContractParams& contract, const GridSpec& grid,
                      const SolverOptions& options = {});

struct ComplementarityReport {
  double max = 0.0;
  double mean = 0.0;
  long evaluated = 0;
  long excluded = 0;  // interior nodes within 3 dx of the corner (ln L - ln K, 0)
};

/// Discrete complementarity check over interior nodes:
///   min(|u_tau - L u - c| / K, gap / K), with gap = u - Ke^x (ConversionVI, Dirichlet) or K - u
/// (CallVI). The operator is the surface's own stencil, so an exact discrete solution scores 0 away
/// from the obstacle.
ComplementarityReport complementarity_residual(const SolutionSurface& surface, const MarketParams& market,
                                               const ContractParams& contract);

/// Bond value at (S, t) from a solved surface: gamma*S when gamma*S >= K, the payoff at t = T,
/// bilinear interpolation inside the grid and the far-field value left of it.
double price(const SolutionSurface& surface, double S, double t);

double price(const MarketParams& market, const ContractParams& contract, double S, double t,
             const GridSpec& grid);

}  // namespace cbgame
