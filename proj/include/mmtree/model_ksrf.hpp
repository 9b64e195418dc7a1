#pragma once

#include "mmtree/coefficients.hpp"
#include "mmtree/lattice.hpp"
#include "mmtree/model_crr.hpp"

namespace mmtree {

struct KsrfFactors {
  double up;
  double down;
};

/// Moment-matched binomial step with an exogenous up-probability p(t).
/// The branch factors are shared by the natural and risk-neutral trees;
/// only the branch probabilities change (p versus q*).
struct KsrfStep {
  double up = 0.0;
  double down = 0.0;
  double p_natural = 0.0;
  double q_star = 0.0;
  double theta = 0.0;
  double t = 0.0;
  double dt = 0.0;

  StepSpec spec(World world) const;
};

/// up   = 1 + mu dt + sqrt((1-p)/p) sigma sqrt(dt)
/// down = 1 + mu dt - sqrt(p/(1-p)) sigma sqrt(dt)
KsrfFactors ksrf_factors(double mu, double sigma, double p, double dt);

/// q* = p - theta sqrt(p (1-p) dt). Continuous in p, tends to 0 and 1 at the
/// ends of (0,1).
double ksrf_risk_neutral_prob(double p, double theta, double dt);

/// The q* expression without the (0,1) check. Near p = 0 (and p = 1 for
/// theta < 0) it leaves [0,1] once p < theta^2 dt / (1 + theta^2 dt).
double ksrf_q_star_formula(double p, double theta, double dt);

/// (G+ - G-) / (S sigma sqrt(dt)) * sqrt(p (1-p)). Since
/// up - down = sigma sqrt(dt) / sqrt(p (1-p)), this replicates exactly.
double ksrf_hedge_ratio(double g_up, double g_down, double spot, double sigma, double p,
                        double dt);

/// All of mu, sigma, r, theta and p are evaluated at the step end t_end.
KsrfStep ksrf_step(const MarketCoefficients& mc, const CoefficientCurve& p_curve, double t_end,
                   double dt);

}  // namespace mmtree
