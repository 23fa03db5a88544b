#include <cmath>
#include <vector>

#include "doctest.h"
#include "cbgame/closedform.hpp"
#include "cbgame/normal.hpp"
#include "cbgame/quadrature.hpp"
#include "cbgame/regimes.hpp"
#include "fixtures.hpp"

using namespace cbgame;

namespace {

// Backward induction on a CRR tree with no early action by either side: the bond pays coupons,
// ends at gamma*S once gamma*S >= K, and pays max{L, gamma*S} at maturity.
double european_game_tree(const MarketParams& m, const ContractParams& k, double S0, int steps) {
  const double dt = k.T / steps;
  const double u = std::exp(m.sigma * std::sqrt(dt));
  const double d = 1.0 / u;
  const double p = (std::exp((m.r - m.q) * dt) - d) / (u - d);
  const double disc = std::exp(-m.r * dt);
  std::vector<double> v(steps + 1);
  for (int i = 0; i <= steps; ++i) v[i] = std::max(k.L, k.gamma * S0 * std::pow(u, 2 * i - steps));
  for (int j = steps - 1; j >= 0; --j) {
    for (int i = 0; i <= j; ++i) {
      const double conv = k.gamma * S0 * std::pow(u, 2 * i - j);
      v[i] = conv >= k.K ? conv : disc * (p * v[i + 1] + (1 - p) * v[i]) + k.c * dt * disc;
    }
  }
  return v[0];
}

}  // namespace

TEST_CASE("normal cdf against high-precision values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.0) - 0.8413447460685429) <= 1e-15);
  CHECK(std::abs(normal_cdf(3.0) - 0.9986501019683699) <= 1e-15);
  CHECK(std::abs(normal_cdf(-5.0) - 2.866515718791939e-07) <= 1e-20);
  CHECK(normal_cdf(-20.0) == doctest::Approx(2.7536241186062337e-89).epsilon(1e-13));
  CHECK(std::abs(normal_cdf(40.0) - 1.0) <= 1e-15);
  for (double z = -8.0; z <= 8.0; z += 0.37) CHECK(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0) <= 1e-15);
}

TEST_CASE("log normal cdf holds up in the far tail") {
  CHECK(log_normal_cdf(-10.0) == doctest::Approx(-53.23128515051247).epsilon(1e-13));
  CHECK(log_normal_cdf(-35.0) == doctest::Approx(-616.9751012619225).epsilon(1e-13));
  CHECK(log_normal_cdf(-40.0) == doctest::Approx(-804.6084420137538).epsilon(1e-13));
  CHECK(std::isfinite(log_normal_cdf(-1e3)));
  CHECK(log_normal_cdf(0.0) == doctest::Approx(std::log(0.5)));
  CHECK(log_normal_cdf(5.0) == doctest::Approx(std::log(normal_cdf(5.0))).epsilon(1e-14));
}

TEST_CASE("gauss-legendre rule and adaptive integration") {
  const auto& gl = GaussLegendre<double, 10>::instance();
  double wsum = 0.0;
  for (int i = 0; i < 10; ++i) wsum += gl.weights[i];
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  // Exact for polynomials up to degree 19.
  double x19 = 0.0;
  for (int i = 0; i < 10; ++i) x19 += gl.weights[i] * std::pow(gl.nodes[i], 18);
  CHECK(x19 == doctest::Approx(2.0 / 19.0).epsilon(1e-13));

  auto f = [](double x) { return Eigen::Array<double, 2, 1>(std::exp(x), 1.0 / (1.0 + 100.0 * x * x)); };
  const auto I = integrate_adaptive<2>(f, 0.0, 2.0, 1e-12);
  CHECK(I(0) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
  CHECK(I(1) == doctest::Approx(std::atan(20.0) / 10.0).epsilon(1e-12));
}

TEST_CASE("characteristic roots") {
  SUBCASE("golden ratio") {
    const auto a = char_roots(1.0, 1.0, std::sqrt(2.0));
    CHECK(a.alpha_plus == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
    CHECK(a.alpha_minus == doctest::Approx((1 - std::sqrt(5.0)) / 2).epsilon(1e-15));
  }
  SUBCASE("no dividend gives one") {
    for (double r : {0.01, 0.05, 0.3})
      for (double s : {0.1, 0.3, 1.0}) CHECK(char_roots(r, 0.0, s).alpha_plus == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("reference market") {
    const auto a = char_roots(fixtures::market());
    CHECK(a.alpha_plus == doctest::Approx(1.2338540395721413).epsilon(1e-14));
    CHECK(a.alpha_minus == doctest::Approx(-0.9005207062388082).epsilon(1e-14));
  }
  SUBCASE("residual and ordering over a parameter sweep") {
    for (double r : {0.01, 0.05, 0.2})
      for (double q : {0.0, 0.005, 0.01})
        for (double s : {0.05, 0.3, 0.8}) {
          const auto a = char_roots(r, q, s);
          CHECK(std::abs(char_residual(a.alpha_plus, r, q, s)) <= 1e-10);
          CHECK(std::abs(char_residual(a.alpha_minus, r, q, s)) <= 1e-10);
          CHECK(a.alpha_plus >= 1.0 - 1e-14);
          CHECK(a.alpha_minus < 0.0);
          if (q > 0.0) CHECK(a.alpha_plus < r / (r - q));
        }
  }
}

TEST_CASE("landmarks") {
  const auto m = fixtures::market();
  auto lm = landmarks(m, fixtures::contract(1.0));
  CHECK(lm.underline_X == doctest::Approx(std::log(1.0 / 2.2)).epsilon(1e-14));
  CHECK(lm.c0 == doctest::Approx(std::log(100.0 / 110.0)).epsilon(1e-14));
  CHECK(lm.absorbing_threshold == doctest::Approx(1.0425).epsilon(1e-3));
  CHECK(lm.nonmonotone_threshold == doctest::Approx(0.9477).epsilon(1e-3));
  CHECK_FALSE(lm.absorbing);
  CHECK(*lm.c_inf == doctest::Approx(std::log(1.2338540395721413 / 0.2338540395721413 / 5.5)).epsilon(1e-13));

  lm = landmarks(m, fixtures::contract(0.5));
  REQUIRE(lm.c_inf);
  CHECK(*lm.c_inf == doctest::Approx(-0.7347).epsilon(1e-3));
  CHECK(lm.nonmonotone_expected);
  // c_inf - underline_X = ln(a+ q / ((a+ - 1) r))
  const double a = lm.alpha_plus;
  CHECK(std::abs((*lm.c_inf - lm.underline_X) - std::log(a * 0.02 / ((a - 1) * 0.05))) <= 1e-12);

  lm = landmarks(m, fixtures::contract(2.0));
  CHECK(lm.absorbing);
  CHECK_FALSE(lm.c_inf);

  // c0 -> 0 as L -> K.
  lm = landmarks(m, fixtures::contract(1.0, 1.0, 110.0 - 1e-9));
  CHECK(lm.c0 < 0.0);
  CHECK(lm.c0 > -1e-10);

  CHECK_THROWS_AS(landmarks(m, fixtures::contract(0.0)), Error);
  CHECK_THROWS_AS(landmarks(m, fixtures::contract(3.0)), Error);
}

TEST_CASE("perpetual solution") {
  const auto m = fixtures::market();
  SUBCASE("smooth pasting") {
    const auto v = perpetual(m, 110.0, 0.5);
    REQUIRE(v.form() == PerpetualSolution::Form::SmoothPasting);
    const double xs = *v.x_star();
    CHECK(std::abs(v(xs) - 110.0 * std::exp(xs)) <= 1e-10);
    CHECK(std::abs(v.derivative(xs) - 110.0 * std::exp(xs)) <= 1e-10);
    // The left branch evaluated just below x* meets the obstacle to first order.
    const double h = 1e-6;
    CHECK((v(xs) - v(xs - h)) / h == doctest::Approx(110.0 * std::exp(xs)).epsilon(1e-5));
    for (double x = -5.0; x <= 0.0; x += 0.01) CHECK(v(x) >= 110.0 * std::exp(x) - 1e-12);
  }
  SUBCASE("threshold coupon puts x* at 0") {
    const double a = char_roots(m).alpha_plus;
    const auto v = perpetual(m, 110.0, 0.05 * 110.0 * (a - 1) / a);
    REQUIRE(v.form() == PerpetualSolution::Form::SmoothPasting);
    CHECK(std::abs(*v.x_star()) <= 1e-14);
  }
  SUBCASE("absorbed") {
    const auto v = perpetual(m, 110.0, 2.0);
    REQUIRE(v.form() == PerpetualSolution::Form::BoundaryAbsorbed);
    CHECK(v(0.0) == doctest::Approx(110.0));
    for (double x = -5.0; x <= 0.0; x += 0.01) CHECK(v(x) >= 110.0 * std::exp(x) - 1e-12);
  }
  SUBCASE("nondecreasing in the coupon") {
    const auto lo = perpetual(m, 110.0, 0.3);
    const auto hi = perpetual(m, 110.0, 0.9);
    for (double x = -5.0; x <= 0.0; x += 0.05) CHECK(hi(x) >= lo(x) - 1e-12);
  }
  CHECK_THROWS_AS(perpetual(m, 110.0, 0.0), Error);
}

TEST_CASE("explicit Dirichlet solution") {
  const auto m = fixtures::market();
  const auto k = fixtures::contract(3.0, 2.0);

  SUBCASE("boundary and initial data") {
    for (double tau : {0.1, 1.0, 2.0}) CHECK(dirichlet_explicit(0.0, tau, m, k) == 110.0);
    for (double x : {-2.0, -0.2, -0.05}) CHECK(dirichlet_explicit(x, 0.0, m, k) == std::max(100.0, 110.0 * std::exp(x)));
    CHECK_THROWS_AS(dirichlet_explicit(0.1, 1.0, m, k), Error);
  }
  SUBCASE("values frozen from an independent adaptive-quadrature evaluation") {
    CHECK(dirichlet_explicit(-0.3, 1.0, m, k) == doctest::Approx(101.33592238842122).epsilon(1e-10));
    CHECK(dirichlet_explicit(-0.5, 0.5, m, k) == doctest::Approx(99.21752965061702).epsilon(1e-10));
    CHECK(dirichlet_explicit(-1.0, 2.0, m, k) == doctest::Approx(96.35666067838214).epsilon(1e-10));
    CHECK(dirichlet_explicit(-3.0, 1.0, m, k) == doctest::Approx(98.04917698002856).epsilon(1e-10));
    CHECK(dirichlet_explicit(-0.05, 0.25, m, k) == doctest::Approx(107.24348547116415).epsilon(1e-10));
  }
  SUBCASE("matches a no-early-action tree") {
    const auto k1 = fixtures::contract(3.0, 1.0);
    const double S = 110.0 * std::exp(-0.3);
    CHECK(std::abs(dirichlet_explicit(-0.3, 1.0, m, k1) - european_game_tree(m, k1, S, 2000)) <= 1e-3 * 110.0);
  }
  SUBCASE("satisfies the PDE away from the corner") {
    const double h = 1e-3;
    for (auto [x, tau] : {std::pair{-0.3, 1.0}, {-0.5, 0.5}, {-1.0, 1.5}, {-2.0, 0.3}}) {
      auto u = [&](double xx, double tt) { return dirichlet_explicit(xx, tt, m, k); };
      const double ut = (u(x, tau + h) - u(x, tau - h)) / (2 * h);
      const double ux = (u(x + h, tau) - u(x - h, tau)) / (2 * h);
      const double uxx = (u(x + h, tau) - 2 * u(x, tau) + u(x - h, tau)) / (h * h);
      const double Lu = 0.045 * uxx + (0.03 - 0.045) * ux - 0.05 * u(x, tau);
      CHECK(std::abs(ut - Lu - 3.0) <= 1e-3 * 110.0);
    }
  }
  SUBCASE("strictly between the obstacles") {
    for (double x = -3.0; x < -0.01; x += 0.25)
      for (double tau = 0.1; tau <= 2.0; tau += 0.3) {
        const double u = dirichlet_explicit(x, tau, m, k);
        CHECK(u > 110.0 * std::exp(x));
        CHECK(u < 110.0);
      }
  }
  SUBCASE("no overflow deep in the domain") {
    const double u = dirichlet_explicit(-40.0, 2.0, m, k);
    CHECK(std::isfinite(u));
    CHECK(u == doctest::Approx(far_field_value(m, k, 2.0)).epsilon(1e-8));
  }
}
