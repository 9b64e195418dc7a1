#include "mmtree/model_crr.hpp"

#include <cmath>
#include <string>

#include "mmtree/error.hpp"

namespace mmtree {
namespace {

void check_sigma_dt(double sigma, double dt) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
}

double half_plus_drift(double drift, double sigma, double dt, const char* what) {
  check_sigma_dt(sigma, dt);
  const double p = 0.5 + (drift - 0.5 * sigma * sigma) / (2.0 * sigma) * std::sqrt(dt);
  if (!(p > 0.0 && p < 1.0)) {
    throw RegimeError(std::string(what) + " " + std::to_string(p) +
                      " outside (0,1); reduce the time step");
  }
  return p;
}

}  // namespace

StepSpec CrrStep::spec(World world) const {
  return StepSpec::binomial(down, up, world == World::kNatural ? p_natural : q_risk_neutral);
}

CrrFactors crr_factors(double sigma, double dt) {
  check_sigma_dt(sigma, dt);
  const double up = std::exp(sigma * std::sqrt(dt));
  return {up, 1.0 / up};
}

double crr_natural_prob(double mu, double sigma, double dt) {
  return half_plus_drift(mu, sigma, dt, "CRR natural probability");
}

double crr_risk_neutral_prob(double rate, double sigma, double dt) {
  return half_plus_drift(rate, sigma, dt, "CRR risk-neutral probability");
}

double crr_hedge_ratio(double g_up, double g_down, double spot, double sigma, double dt) {
  if (!(spot > 0.0)) throw DomainError("spot must be positive");
  check_sigma_dt(sigma, dt);
  return (g_up - g_down) / (2.0 * spot * sigma * std::sqrt(dt));
}

CrrStep crr_step(const MarketCoefficients& mc, double t_end, double dt) {
  const double sigma = mc.sigma.eval(t_end);
  const auto f = crr_factors(sigma, dt);
  CrrStep s;
  s.up = f.up;
  s.down = f.down;
  s.p_natural = crr_natural_prob(mc.mu.eval(t_end), sigma, dt);
  s.q_risk_neutral = crr_risk_neutral_prob(mc.rate.eval(t_end), sigma, dt);
  s.t = t_end;
  s.dt = dt;
  return s;
}

}  // namespace mmtree
