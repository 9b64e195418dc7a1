#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mmtree/lattice.hpp"

namespace mmtree {

/// Terminal payoff g(S(T)).
class Payoff {
 public:
  enum class Kind { kCall, kPut, kCustom };

  static Payoff call(double strike);
  static Payoff put(double strike);
  static Payoff custom(std::function<double(double)> g);
  static Payoff constant(double value);

  Kind kind() const { return kind_; }
  double strike() const { return strike_; }
  double operator()(double spot) const;

 private:
  Payoff(Kind kind, double strike, std::function<double(double)> g)
      : kind_(kind), strike_(strike), g_(std::move(g)) {}

  Kind kind_;
  double strike_ = 0.0;
  std::function<double(double)> g_;
};

struct PriceResult {
  double root_value = 0.0;
  /// values[n][i] for every level, filled only when retention is requested.
  std::vector<std::vector<double>> values;
};

/// Backward induction G(n) = disc_n * sum_k q_k G(child_k). probabilities[n]
/// and discounts[n] belong to the step from level n to n + 1.
PriceResult price_european(const Lattice& lattice, const LevelProbabilities& probabilities,
                           std::span<const double> discounts, const Payoff& payoff,
                           bool retain_values = false);

enum class HedgeFormula { kCrr, kKsrf };

/// Coefficients at each step end, needed by the closed-form hedge ratios.
/// `p` is only read for the KSRF formula.
struct HedgeModel {
  HedgeFormula formula = HedgeFormula::kCrr;
  std::vector<double> sigma;
  std::vector<double> p;
};

struct HedgeNode {
  int n = 0;
  int j = 0;
  double spot = 0.0;
  double value = 0.0;
  double value_up = 0.0;
  double value_down = 0.0;
  double spot_up = 0.0;
  double spot_down = 0.0;
  /// Closed-form ratio of the selected model.
  double psi = 0.0;
  /// (G+ - G-) / (S+ - S-) over the child nodes: the position that makes
  /// the one-step portfolio exactly riskless. With constant factors it
  /// coincides with psi for KSRF; for CRR the two agree to O(dt).
  double psi_replicating = 0.0;
};

/// Hedge ratio at every non-terminal node, level-major. Binomial lattices
/// only; a trinomial lattice with one risky asset cannot be replicated.
std::vector<HedgeNode> hedge_report(const Lattice& lattice,
                                    const LevelProbabilities& probabilities,
                                    std::span<const double> discounts, const Payoff& payoff,
                                    const HedgeModel& model);

inline constexpr int kMaxBruteForceBinomialSteps = 12;
inline constexpr int kMaxBruteForceTrinomialSteps = 8;

/// Exact expectation over every branch sequence, using path-ordered factor
/// products rather than the lattice's canonical node values. Independent
/// check on price_european.
double brute_force_price(std::span<const StepSpec> steps, std::span<const double> discounts,
                         double spot, const Payoff& payoff);

}  // namespace mmtree
