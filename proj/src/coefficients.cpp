#include "mmtree/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mmtree/error.hpp"

namespace mmtree {
namespace {

// Integral of a linear segment through (x0, v0), (x1, v1).
double segment_integral(double x0, double v0, double x1, double v1) {
  return 0.5 * (v0 + v1) * (x1 - x0);
}

// Integral of the square of the same segment.
double segment_integral_squared(double x0, double v0, double x1, double v1) {
  return (v0 * v0 + v0 * v1 + v1 * v1) * (x1 - x0) / 3.0;
}

}  // namespace

CoefficientCurve CoefficientCurve::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("constant curve: value must be finite");
  return CoefficientCurve(Kind::kConstant, value, 0.0, {});
}

CoefficientCurve CoefficientCurve::linear(double intercept, double slope) {
  if (!std::isfinite(intercept) || !std::isfinite(slope)) {
    throw DomainError("linear curve: coefficients must be finite");
  }
  return CoefficientCurve(Kind::kLinear, intercept, slope, {});
}

CoefficientCurve CoefficientCurve::piecewise(std::vector<Knot> knots) {
  if (knots.empty()) throw DomainError("piecewise curve: no knots");
  if (knots.front().first != 0.0) throw DomainError("piecewise curve: first knot must be at t = 0");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second)) {
      throw DomainError("piecewise curve: knots must be finite");
    }
    if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
      throw DomainError("piecewise curve: knot times must be strictly increasing");
    }
  }
  return CoefficientCurve(Kind::kPiecewise, 0.0, 0.0, std::move(knots));
}

double CoefficientCurve::domain_end() const {
  if (kind_ == Kind::kPiecewise) return knots_.back().first;
  return std::numeric_limits<double>::infinity();
}

bool CoefficientCurve::is_constant() const {
  switch (kind_) {
    case Kind::kConstant:
      return true;
    case Kind::kLinear:
      return b_ == 0.0;
    case Kind::kPiecewise:
      for (const auto& k : knots_) {
        if (k.second != knots_.front().second) return false;
      }
      return true;
  }
  return false;
}

double CoefficientCurve::eval(double t) const {
  if (!covers(t)) {
    throw DomainError("curve evaluated at t = " + std::to_string(t) + " outside its domain");
  }
  switch (kind_) {
    case Kind::kConstant:
      return a_;
    case Kind::kLinear:
      return a_ + b_ * t;
    case Kind::kPiecewise:
      break;
  }
  if (knots_.size() == 1) return knots_.front().second;
  // first knot with time >= t
  std::size_t hi = 1;
  while (knots_[hi].first < t) ++hi;
  const auto& [x1, v1] = knots_[hi];
  if (t == x1) return v1;
  const auto& [x0, v0] = knots_[hi - 1];
  if (t == x0) return v0;
  const double w = (t - x0) / (x1 - x0);
  return v0 + w * (v1 - v0);
}

void CoefficientCurve::check_range(double t0, double t1) const {
  if (!(t0 <= t1)) throw DomainError("integration bounds must satisfy t0 <= t1");
  if (!covers(t0) || !covers(t1)) throw DomainError("integration range outside curve domain");
}

double CoefficientCurve::integrate(double t0, double t1) const {
  check_range(t0, t1);
  if (kind_ != Kind::kPiecewise) return segment_integral(t0, eval(t0), t1, eval(t1));
  double total = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double lo = std::max(t0, knots_[i - 1].first);
    const double hi = std::min(t1, knots_[i].first);
    if (hi > lo) total += segment_integral(lo, eval(lo), hi, eval(hi));
  }
  return total;
}

double CoefficientCurve::integrate_squared(double t0, double t1) const {
  check_range(t0, t1);
  if (kind_ != Kind::kPiecewise) return segment_integral_squared(t0, eval(t0), t1, eval(t1));
  double total = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double lo = std::max(t0, knots_[i - 1].first);
    const double hi = std::min(t1, knots_[i].first);
    if (hi > lo) total += segment_integral_squared(lo, eval(lo), hi, eval(hi));
  }
  return total;
}

void MarketCoefficients::validate_on(double maturity, int steps) const {
  if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
  if (steps < 1) throw DomainError("steps must be at least 1");
  for (const auto* c : {&mu, &sigma, &rate}) {
    if (!c->covers(maturity)) throw DomainError("coefficient curve does not cover [0, maturity]");
  }
  const double dt = maturity / steps;
  for (int n = 0; n <= steps; ++n) {
    const double t = n == steps ? maturity : n * dt;
    if (!(sigma.eval(t) > 0.0)) {
      throw DomainError("sigma must be positive, got " + std::to_string(sigma.eval(t)) +
                        " at t = " + std::to_string(t));
    }
    if (!(rate.eval(t) > 0.0)) {
      throw DomainError("rate must be positive, got " + std::to_string(rate.eval(t)) +
                        " at t = " + std::to_string(t));
    }
  }
}

MarketPriceOfRisk market_price_of_risk(const MarketCoefficients& mc, double t) {
  const double sigma = mc.sigma.eval(t);
  if (!(sigma > 0.0)) throw DomainError("market price of risk needs sigma > 0");
  const double mu = mc.mu.eval(t);
  const double r = mc.rate.eval(t);
  return {(mu - r) / sigma, r >= mu};
}

double step_discount(const MarketCoefficients& mc, double t, double dt) {
  if (dt < 0.0) throw DomainError("step length must be non-negative");
  return std::exp(-mc.rate.eval(t) * dt);
}

}  // namespace mmtree
