#pragma once

#include "mmtree/lattice.hpp"
#include "mmtree/model_crr.hpp"

namespace mmtree {

// Trinomial steps assume constant coefficients.

struct TrinomialStep {
  enum class Variant { kClassical, kNew };

  double up = 0.0;
  double mid = 0.0;
  double down = 0.0;
  double prob_up = 0.0;
  double prob_mid = 0.0;
  double prob_down = 0.0;
  World world = World::kRiskNeutral;
  Variant variant = Variant::kNew;

  StepSpec spec() const;
};

/// Textbook risk-neutral trinomial: factors 1 + 3/2 sigma^2 dt +- sigma sqrt(3 dt)
/// and 1, probabilities 1/6 +- sqrt(dt / (12 sigma^2)) (r - sigma^2/2) and 2/3.
TrinomialStep classical_trinomial_step(double rate, double sigma, double dt);

/// Equal-weight trinomial matching every moment of the GBM increment to first
/// order in dt: factors 1 + (mu + sigma^2/4) dt +- sqrt(3/2) sigma sqrt(dt) and
/// 1 + (mu - sigma^2/2) dt, probabilities 1/3 each.
TrinomialStep new_trinomial_natural_step(double mu, double sigma, double dt);

/// Risk-neutral counterpart: the drift mu is replaced by the short rate.
TrinomialStep new_trinomial_risk_neutral_step(double rate, double sigma, double dt);

}  // namespace mmtree
