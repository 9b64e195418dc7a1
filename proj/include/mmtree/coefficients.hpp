#pragma once

#include <utility>
#include <vector>

namespace mmtree {

/// Deterministic time-dependent model parameter: drift, volatility, short
/// rate or the KSRF up-probability. Restricted to constant, linear and
/// piecewise-linear shapes so every integral is closed form.
class CoefficientCurve {
 public:
  enum class Kind { kConstant, kLinear, kPiecewise };
  using Knot = std::pair<double, double>;  // (t, value)

  /// The constant zero curve.
  CoefficientCurve() : kind_(Kind::kConstant) {}

  static CoefficientCurve constant(double value);
  /// value(t) = intercept + slope * t
  static CoefficientCurve linear(double intercept, double slope);
  /// Knots strictly increasing in t, first knot at t = 0.
  static CoefficientCurve piecewise(std::vector<Knot> knots);

  Kind kind() const { return kind_; }
  const std::vector<Knot>& knots() const { return knots_; }
  double intercept() const { return a_; }
  double slope() const { return b_; }

  /// Right end of the domain (+inf for constant and linear curves).
  double domain_end() const;
  bool covers(double t) const { return t >= 0.0 && t <= domain_end(); }
  /// True when the curve takes a single value everywhere.
  bool is_constant() const;

  double eval(double t) const;
  /// Exact integral of the curve over [t0, t1].
  double integrate(double t0, double t1) const;
  /// Exact integral of the squared curve over [t0, t1].
  double integrate_squared(double t0, double t1) const;

 private:
  CoefficientCurve(Kind kind, double a, double b, std::vector<Knot> knots)
      : kind_(kind), a_(a), b_(b), knots_(std::move(knots)) {}

  void check_range(double t0, double t1) const;

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<Knot> knots_;
};

/// The market triple (mu, sigma, r).
struct MarketCoefficients {
  CoefficientCurve mu;
  CoefficientCurve sigma;
  CoefficientCurve rate;

  /// Throws DomainError unless sigma > 0 and rate > 0 at every grid time
  /// n * maturity / steps, n = 0..steps, and every curve covers [0, maturity].
  void validate_on(double maturity, int steps) const;
};

struct MarketPriceOfRisk {
  double theta = 0.0;
  /// Set when r >= mu: the market assumes r < mu, pricing still works.
  bool rate_exceeds_drift = false;
};

/// theta(t) = (mu(t) - r(t)) / sigma(t)
MarketPriceOfRisk market_price_of_risk(const MarketCoefficients& mc, double t);

/// One-step discount factor exp(-r(t) * dt).
double step_discount(const MarketCoefficients& mc, double t, double dt);

}  // namespace mmtree
