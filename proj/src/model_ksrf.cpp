#include "mmtree/model_ksrf.hpp"

#include <cmath>
#include <string>

#include "mmtree/error.hpp"

namespace mmtree {
namespace {

void check_prob(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("KSRF probability p must lie in (0,1)");
}

}  // namespace

StepSpec KsrfStep::spec(World world) const {
  return StepSpec::binomial(down, up, world == World::kNatural ? p_natural : q_star);
}

KsrfFactors ksrf_factors(double mu, double sigma, double p, double dt) {
  check_prob(p);
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  const double drift = 1.0 + mu * dt;
  const double swing = sigma * std::sqrt(dt);
  const KsrfFactors f{drift + std::sqrt((1.0 - p) / p) * swing,
                      drift - std::sqrt(p / (1.0 - p)) * swing};
  if (!(f.down > 0.0)) {
    throw RegimeError("KSRF down factor " + std::to_string(f.down) +
                      " is not positive; p too large for this time step");
  }
  return f;
}

double ksrf_risk_neutral_prob(double p, double theta, double dt) {
  check_prob(p);
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  const double q = ksrf_q_star_formula(p, theta, dt);
  if (!(q > 0.0 && q < 1.0)) {
    throw RegimeError("KSRF risk-neutral probability " + std::to_string(q) +
                      " outside (0,1); reduce the time step");
  }
  return q;
}

double ksrf_q_star_formula(double p, double theta, double dt) {
  return p - theta * std::sqrt((1.0 - p) * p * dt);
}

double ksrf_hedge_ratio(double g_up, double g_down, double spot, double sigma, double p,
                        double dt) {
  check_prob(p);
  if (!(spot > 0.0)) throw DomainError("spot must be positive");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  return (g_up - g_down) / (spot * sigma * std::sqrt(dt)) * std::sqrt((1.0 - p) * p);
}

KsrfStep ksrf_step(const MarketCoefficients& mc, const CoefficientCurve& p_curve, double t_end,
                   double dt) {
  const double mu = mc.mu.eval(t_end);
  const double sigma = mc.sigma.eval(t_end);
  const double p = p_curve.eval(t_end);
  const auto f = ksrf_factors(mu, sigma, p, dt);
  KsrfStep s;
  s.up = f.up;
  s.down = f.down;
  s.p_natural = p;
  s.theta = market_price_of_risk(mc, t_end).theta;
  s.q_star = ksrf_risk_neutral_prob(p, s.theta, dt);
  s.t = t_end;
  s.dt = dt;
  return s;
}

}  // namespace mmtree
