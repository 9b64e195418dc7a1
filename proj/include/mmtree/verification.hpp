#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mmtree/coefficients.hpp"
#include "mmtree/lattice.hpp"
#include "mmtree/pricer.hpp"
#include "mmtree/tree_model.hpp"

namespace mmtree {

struct GbmMoment {
  /// exp(zeta mu dt + zeta (zeta - 1) sigma^2 dt / 2)
  double exact = 1.0;
  /// 1 + zeta (mu + (zeta - 1) sigma^2 / 2) dt
  double first_order = 1.0;
};

/// E[(S(dt)/S(0))^zeta] for GBM with drift mu and volatility sigma.
GbmMoment gbm_moment(double zeta, double mu, double sigma, double dt);

/// sum_k prob_k * factor_k^zeta
double lattice_step_moment(const StepSpec& step, double zeta);

struct MomentReport {
  double zeta = 0.0;
  double lattice_moment = 0.0;
  /// First-order GBM moment; the matching target.
  double analytic_moment = 0.0;
  double exact_moment = 0.0;
  /// |lattice_moment - analytic_moment|
  double residual = 0.0;
  double dt = 0.0;
};

/// Compares one step against GBM with the given drift (mu in the natural
/// world, r in the risk-neutral one).
MomentReport moment_report(const StepSpec& step, double zeta, double drift, double sigma,
                           double dt);

struct LogReturnMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Two-point mean and variance of ln(factor) for a binomial step.
LogReturnMoments logreturn_moments(const StepSpec& step);

enum class OptionKind { kCall, kPut };

/// Closed-form lognormal price; both call and put come from the formula.
double bs_price(double spot, double strike, double maturity, double rate, double sigma,
                OptionKind kind);

struct AveragedCoefficients {
  double rate = 0.0;   // (1/T) int r
  double sigma = 0.0;  // sqrt((1/T) int sigma^2)
};

/// Deterministic r(t), sigma(t) give a lognormal terminal law, so the
/// closed form with these averages prices the limiting diffusion exactly.
AveragedCoefficients averaged_coefficients(const MarketCoefficients& mc, double maturity);

/// Closed-form price of a call or put under averaged coefficients.
double oracle_price(const MarketCoefficients& mc, double spot, double maturity,
                    const Payoff& payoff);

/// Forward induction of node probabilities over all levels; result[n][i]
/// matches Lattice::level(n)[i].
std::vector<std::vector<double>> node_probabilities(const Lattice& lattice,
                                                    const LevelProbabilities& probabilities);

struct TerminalState {
  double value = 0.0;
  double probability = 0.0;
};

/// Distribution of the terminal price on the recombined lattice.
std::vector<TerminalState> forward_probabilities(const Lattice& lattice,
                                                 const LevelProbabilities& probabilities);

struct ConvergenceRow {
  int steps = 0;
  double lattice_price = 0.0;
  double oracle_price = 0.0;
  double abs_error = 0.0;
  /// log(err_prev / err) / log(N / N_prev); empty on the first row and
  /// whenever the ratio is undefined.
  std::optional<double> order;
};

/// Prices the model for every N in `step_counts` (ascending) and compares
/// against the averaged-coefficient closed form.
std::vector<ConvergenceRow> convergence_study(const ModelSetup& setup, double spot,
                                              double maturity, const Payoff& payoff,
                                              std::span<const int> step_counts);

}  // namespace mmtree
