#pragma once

#include "mmtree/coefficients.hpp"
#include "mmtree/lattice.hpp"

namespace mmtree {

enum class World { kNatural, kRiskNeutral };

struct CrrFactors {
  double up;
  double down;
};

/// Cox-Ross-Rubinstein step with time-dependent coefficients. Factors and
/// probabilities of the step ending at t use coefficients evaluated at t.
struct CrrStep {
  double up = 0.0;
  double down = 0.0;
  double p_natural = 0.0;
  double q_risk_neutral = 0.0;
  double t = 0.0;   // step end
  double dt = 0.0;

  StepSpec spec(World world) const;
};

/// U = exp(sigma sqrt(dt)), D = 1 / U.
CrrFactors crr_factors(double sigma, double dt);

/// p = 1/2 + (mu - sigma^2 / 2) / (2 sigma) * sqrt(dt); RegimeError outside (0,1).
double crr_natural_prob(double mu, double sigma, double dt);

/// Same form as crr_natural_prob with the short rate in place of the drift.
double crr_risk_neutral_prob(double rate, double sigma, double dt);

/// Small-step hedge ratio (G+ - G-) / (2 S sigma sqrt(dt)).
double crr_hedge_ratio(double g_up, double g_down, double spot, double sigma, double dt);

CrrStep crr_step(const MarketCoefficients& mc, double t_end, double dt);

}  // namespace mmtree
