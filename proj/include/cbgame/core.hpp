#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cbgame {

/// Failure categories surfaced by the library. The CLI maps them to exit codes.
enum class ErrorKind {
  InvalidArgument,  // precondition violated by the caller
  Domain,           // operation not defined for this regime / input
  Convergence,      // Newton or quadrature failed to converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Constant risk-neutral market coefficients.
struct MarketParams {
  double r = 0.0;      // risk-free rate, 1/year
  double q = 0.0;      // dividend rate, 1/year
  double sigma = 0.0;  // volatility, 1/sqrt(year)
};

/// Convertible bond terms. Prices are in the contract currency; nothing is normalised by K.
struct ContractParams {
  double c = 0.0;      // continuous coupon rate, currency/year
  double K = 0.0;      // call (surrender) price
  double L = 0.0;      // maturity redemption price
  double gamma = 1.0;  // conversion ratio, shares per bond
  double T = 0.0;      // maturity, years
};

/// Log-moneyness / time-to-maturity coordinates. x <= 0 on the effective domain S < K/gamma.
struct TransformedPoint {
  double x = 0.0;
  double tau = 0.0;
};

struct SpotTime {
  double S = 0.0;
  double t = 0.0;
};

/// Truncated-domain discretisation: x in [-n, 0] with nx intervals, tau in [0, T] with nt steps.
///
/// `epsilon` is the penalty width in currency units (the penalty acts on Ke^x - u, a price).
/// `theta` selects the time-stepping weight: 1 is fully implicit, 0.5 is Crank-Nicolson.
struct GridSpec {
  double n = 0.0;
  int nx = 0;
  int nt = 0;
  double epsilon = 0.0;
  double theta = 1.0;
  bool smooth_initial = true;

  double dx() const { return n / nx; }
};

struct ValidationOutcome {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  /// Violations joined with "; ".
  std::string message() const;
};

/// Checks the parameter invariants and reports every violated one by name, e.g. "K > L violated".
ValidationOutcome validate(const MarketParams& market, const ContractParams& contract);

/// Grid invariants, including the truncation-depth precondition n > max{ln K - ln L, ln(rK/c)}.
ValidationOutcome validate(const GridSpec& grid, const MarketParams& market,
                           const ContractParams& contract);

/// Throws Error(InvalidArgument) carrying every violation.
void require_valid(const MarketParams& market, const ContractParams& contract);

TransformedPoint to_transformed(double S, double t, const ContractParams& contract);
SpotTime from_transformed(const TransformedPoint& p, const ContractParams& contract);

/// Smallest admissible truncation depth (exclusive bound). For c = 0 only ln K - ln L applies.
double min_truncation_depth(const MarketParams& market, const ContractParams& contract);

/// Default far-field margin, in units of sigma*sqrt(T), added to min_truncation_depth.
inline constexpr double kDefaultTruncationSigmas = 5.0;

/// Default penalty width as a fraction of K.
inline constexpr double kDefaultEpsilonRelative = 1e-6;

/// Grid with the default truncation depth, penalty width and fully implicit stepping.
GridSpec default_grid(const MarketParams& market, const ContractParams& contract, int nx, int nt);

/// x -> -infinity limit of the bond value: c/r + ((rL - c)/r) e^{-r tau}, capped at K.
double far_field_value(const MarketParams& market, const ContractParams& contract, double tau);

}  // namespace cbgame
