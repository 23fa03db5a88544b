#include "cbgame/vi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbgame/tridiagonal.hpp"

namespace cbgame {

namespace {

// Three-point stencil of L u = (sigma^2/2) u_xx + mu u_x - r u on a uniform grid.
struct Stencil {
  double lower = 0.0;
  double diag = 0.0;
  double upper = 0.0;
  bool upwind = false;

  double apply(double left, double mid, double right) const { return lower * left + diag * mid + upper * right; }
};

Stencil make_stencil(const MarketParams& m, double dx) {
  const double diffusion = 0.5 * m.sigma * m.sigma / (dx * dx);
  const double mu = m.r - m.q - 0.5 * m.sigma * m.sigma;
  Stencil s;
  if (std::abs(mu) * dx <= m.sigma * m.sigma) {
    s.lower = diffusion - 0.5 * mu / dx;
    s.upper = diffusion + 0.5 * mu / dx;
    s.diag = -2.0 * diffusion - m.r;
  } else if (mu > 0.0) {
    s.upwind = true;
    s.lower = diffusion;
    s.upper = diffusion + mu / dx;
    s.diag = -2.0 * diffusion - mu / dx - m.r;
  } else {
    s.upwind = true;
    s.lower = diffusion - mu / dx;
    s.upper = diffusion;
    s.diag = -2.0 * diffusion + mu / dx - m.r;
  }
  return s;
}

enum class Obstacle { None, Lower, Upper };

Obstacle obstacle_for(Regime regime) {
  switch (regime) {
    case Regime::ConversionVI: return Obstacle::Lower;
    case Regime::CallVI: return Obstacle::Upper;
    case Regime::Dirichlet: return Obstacle::None;
  }
  return Obstacle::None;
}

}  // namespace

double default_contact_tol(const GridSpec& grid, const ContractParams& contract) {
  return 2.0 * grid.epsilon / contract.K;
}

std::optional<PenaltySpec> penalty_for(const MarketParams& m, const ContractParams& k, const GridSpec& grid) {
  const auto report = classify(m, k);
  switch (report.regime) {
    case Regime::ConversionVI: return PenaltySpec{grid.epsilon, report.qK - k.c};
    case Regime::CallVI: return PenaltySpec{grid.epsilon, k.c - report.rK};
    case Regime::Dirichlet: return std::nullopt;
  }
  return std::nullopt;
}

SolutionSurface solve(const MarketParams& m, const ContractParams& k, const GridSpec& grid,
                      const SolverOptions& options) {
  {
    const auto outcome = validate(grid, m, k);
    if (!outcome) {
      const bool truncation = outcome.message().find("n > max") != std::string::npos;
      throw Error(ErrorKind::InvalidArgument,
                  truncation ? "grid too coarse to satisfy the truncation precondition: " + outcome.message()
                             : outcome.message());
    }
  }

  SolutionSurface surf;
  surf.grid = grid;
  surf.market = m;
  surf.contract = k;
  surf.regime = classify(m, k);
  const int nx = grid.nx;
  const int nt = grid.nt;
  const double dx = surf.dx();
  const double dtau = surf.dtau();
  const double theta = grid.theta;

  surf.xs = Eigen::VectorXd::LinSpaced(nx + 1, -grid.n, 0.0);
  surf.xs(nx) = 0.0;
  surf.taus = Eigen::VectorXd::LinSpaced(nt + 1, 0.0, k.T);
  surf.u.resize(nx + 1, nt + 1);

  const Eigen::ArrayXd obstacle = k.K * surf.xs.array().exp();
  const Eigen::ArrayXd payoff = obstacle.max(k.L);
  surf.u.col(0) = payoff.matrix();

  const Stencil st = make_stencil(m, dx);
  surf.upwind = st.upwind;
  const Obstacle kind = obstacle_for(surf.regime.regime);
  const auto penalty = penalty_for(m, k, grid);

  Eigen::VectorXd state = payoff.matrix();
  if (kind == Obstacle::Lower && grid.smooth_initial) {
    for (int i = 0; i <= nx; ++i) state(i) = penalty->smooth(obstacle(i) - k.L) + k.L;
  }
  state(0) = far_field_value(m, k, 0.0);
  state(nx) = k.K;

  const int ni = nx - 1;  // interior unknowns 1..nx-1
  Eigen::VectorXd rhs(ni), lower(ni), diag(ni), upper(ni), step(ni), scratch(ni), residual(ni);
  Eigen::VectorXd next = state;
  const double tol = options.newton_tol * k.K;

  for (int j = 1; j <= nt; ++j) {
    const double left = far_field_value(m, k, surf.taus(j));
    for (int i = 1; i < nx; ++i) {
      const double explicit_part =
          theta < 1.0 ? (1.0 - theta) * dtau * st.apply(state(i - 1), state(i), state(i + 1)) : 0.0;
      rhs(i - 1) = state(i) + explicit_part + dtau * k.c;
    }
    next = state;
    next(0) = left;
    next(nx) = k.K;

    int iter = 0;
    for (;; ++iter) {
      for (int i = 1; i < nx; ++i) {
        double pen = 0.0;
        double dpen = 0.0;
        if (kind == Obstacle::Lower) {
          pen = penalty->beta(obstacle(i) - next(i));
          dpen = penalty->beta_prime(obstacle(i) - next(i));
        } else if (kind == Obstacle::Upper) {
          pen = -penalty->beta(next(i) - k.K);
          dpen = penalty->beta_prime(next(i) - k.K);
        }
        residual(i - 1) = next(i) - theta * dtau * st.apply(next(i - 1), next(i), next(i + 1)) - rhs(i - 1) -
                          dtau * pen;
        lower(i - 1) = -theta * dtau * st.lower;
        upper(i - 1) = -theta * dtau * st.upper;
        diag(i - 1) = 1.0 - theta * dtau * st.diag + dtau * dpen;
      }
      if (residual.cwiseAbs().maxCoeff() <= tol) break;
      if (iter >= options.max_newton)
        throw Error(ErrorKind::Convergence, "Newton iteration did not converge at time step " + std::to_string(j) +
                                                " (residual " + std::to_string(residual.cwiseAbs().maxCoeff()) + ")");
      solve_tridiagonal<double>(lower, diag, upper, -residual, step, scratch);
      next.segment(1, ni) += options.damping * step;
    }
    surf.newton_iterations += iter;
    surf.u.col(j) = next;
    state = next;
  }

  surf.contact_tol = options.contact_tol.value_or(default_contact_tol(grid, k));
  const double band = surf.contact_tol * k.K;
  surf.contact_lower = (surf.u.array().colwise() - obstacle) <= band;
  surf.contact_upper = (k.K - surf.u.array()) <= band;
  return surf;
}

ComplementarityReport complementarity_residual(const SolutionSurface& surf, const MarketParams& m,
                                               const ContractParams& k) {
  ComplementarityReport rep;
  const int nx = surf.grid.nx;
  const int nt = surf.grid.nt;
  const double dx = surf.dx();
  const double dtau = surf.dtau();
  const double theta = surf.grid.theta;
  const Stencil st = make_stencil(m, dx);
  const double corner_x = std::log(k.L) - std::log(k.K);
  const bool upper = surf.regime.regime == Regime::CallVI;

  double sum = 0.0;
  for (int j = 1; j <= nt; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double x = surf.xs(i);
      const double tau = surf.taus(j);
      if (std::hypot(x - corner_x, tau) <= 3.0 * dx) {
        ++rep.excluded;
        continue;
      }
      const auto& u = surf.u;
      const double lu_new = st.apply(u(i - 1, j), u(i, j), u(i + 1, j));
      const double lu_old = st.apply(u(i - 1, j - 1), u(i, j - 1), u(i + 1, j - 1));
      const double pde = (u(i, j) - u(i, j - 1)) / dtau - theta * lu_new - (1.0 - theta) * lu_old - k.c;
      const double gap = upper ? k.K - u(i, j) : u(i, j) - k.K * std::exp(x);
      const double value = std::min(std::abs(pde), std::abs(gap)) / k.K;
      rep.max = std::max(rep.max, value);
      sum += value;
      ++rep.evaluated;
    }
  }
  rep.mean = rep.evaluated > 0 ? sum / rep.evaluated : 0.0;
  return rep;
}

double price(const SolutionSurface& surf, double S, double t) {
  const auto& k = surf.contract;
  const TransformedPoint p = to_transformed(S, t, k);
  if (k.gamma * S >= k.K) return k.gamma * S;
  if (p.tau == 0.0) return std::max(k.L, k.gamma * S);
  if (p.x <= -surf.grid.n) return far_field_value(surf.market, k, p.tau);

  const double dx = surf.dx();
  const double dtau = surf.dtau();
  const double fi = (p.x + surf.grid.n) / dx;
  const double fj = p.tau / dtau;
  const int i = std::clamp(static_cast<int>(std::floor(fi)), 0, surf.grid.nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fj)), 0, surf.grid.nt - 1);
  const double wx = fi - i;
  const double wt = fj - j;
  const auto& u = surf.u;
  return (1 - wx) * (1 - wt) * u(i, j) + wx * (1 - wt) * u(i + 1, j) + (1 - wx) * wt * u(i, j + 1) +
         wx * wt * u(i + 1, j + 1);
}

double price(const MarketParams& m, const ContractParams& k, double S, double t, const GridSpec& grid) {
  require_valid(m, k);
  to_transformed(S, t, k);
  if (k.gamma * S >= k.K) return k.gamma * S;
  return price(solve(m, k, grid), S, t);
}

}  // namespace cbgame
