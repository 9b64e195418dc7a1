#include "mmtree/model_trinomial.hpp"

#include <cmath>
#include <string>

#include "mmtree/error.hpp"

namespace mmtree {
namespace {

void check_sigma_dt(double sigma, double dt) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
}

void check_factors(const TrinomialStep& s) {
  if (!(s.down > 0.0)) {
    throw RegimeError("trinomial down factor " + std::to_string(s.down) +
                      " is not positive; reduce the time step");
  }
  if (!(s.down < s.mid && s.mid < s.up)) {
    throw RegimeError("trinomial factors not ordered down < mid < up; reduce the time step");
  }
}

TrinomialStep equal_weight_step(double drift, double sigma, double dt, World world) {
  check_sigma_dt(sigma, dt);
  const double centre = 1.0 + (drift + 0.25 * sigma * sigma) * dt;
  const double swing = std::sqrt(1.5) * sigma * std::sqrt(dt);
  TrinomialStep s;
  s.up = centre + swing;
  s.mid = 1.0 + (drift - 0.5 * sigma * sigma) * dt;
  s.down = centre - swing;
  check_factors(s);
  s.prob_up = s.prob_mid = s.prob_down = 1.0 / 3.0;
  s.world = world;
  s.variant = TrinomialStep::Variant::kNew;
  return s;
}

}  // namespace

StepSpec TrinomialStep::spec() const {
  return StepSpec::trinomial(down, mid, up, prob_down, prob_mid, prob_up);
}

TrinomialStep classical_trinomial_step(double rate, double sigma, double dt) {
  check_sigma_dt(sigma, dt);
  const double centre = 1.0 + 1.5 * sigma * sigma * dt;
  const double swing = sigma * std::sqrt(3.0 * dt);
  const double tilt = std::sqrt(dt / (12.0 * sigma * sigma)) * (rate - 0.5 * sigma * sigma);
  TrinomialStep s;
  s.up = centre + swing;
  s.mid = 1.0;
  s.down = centre - swing;
  check_factors(s);
  s.prob_up = 1.0 / 6.0 + tilt;
  s.prob_mid = 2.0 / 3.0;
  s.prob_down = 1.0 / 6.0 - tilt;
  if (!(s.prob_up > 0.0 && s.prob_down > 0.0)) {
    throw RegimeError("classical trinomial probability outside (0,1); reduce the time step");
  }
  s.world = World::kRiskNeutral;
  s.variant = TrinomialStep::Variant::kClassical;
  return s;
}

TrinomialStep new_trinomial_natural_step(double mu, double sigma, double dt) {
  return equal_weight_step(mu, sigma, dt, World::kNatural);
}

TrinomialStep new_trinomial_risk_neutral_step(double rate, double sigma, double dt) {
  return equal_weight_step(rate, sigma, dt, World::kRiskNeutral);
}

}  // namespace mmtree
