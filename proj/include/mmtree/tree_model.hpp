#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmtree/coefficients.hpp"
#include "mmtree/lattice.hpp"
#include "mmtree/model_crr.hpp"
#include "mmtree/pricer.hpp"

namespace mmtree {

enum class ModelKind { kCrrTd, kKsrfTd, kTrinomialClassical, kTrinomialNew };

/// "crr-td", "ksrf-td", "tri-classical", "tri-new"
std::string_view model_name(ModelKind kind);
std::optional<ModelKind> parse_model(std::string_view name);
bool is_binomial(ModelKind kind);

/// A model choice with everything needed to build its steps.
struct ModelSetup {
  ModelKind kind = ModelKind::kCrrTd;
  MarketCoefficients coefficients;
  /// Exogenous KSRF up-probability.
  CoefficientCurve ksrf_p = CoefficientCurve::constant(0.5);
};

/// Step n (level n -> n + 1) uses coefficients at its end time t_{n+1}.
/// Trinomial models need constant coefficients; the classical trinomial has
/// no natural-world form. Both raise UnsupportedError.
std::vector<StepSpec> build_steps(const ModelSetup& setup, const TimeGrid& grid, World world);

Lattice build_lattice(const ModelSetup& setup, double spot, const TimeGrid& grid, World world);

/// exp(-r(t_{n+1}) dt) for every step.
std::vector<double> step_discounts(const MarketCoefficients& mc, const TimeGrid& grid);

/// Risk-neutral backward induction of the configured model.
PriceResult price_model(const ModelSetup& setup, double spot, const TimeGrid& grid,
                        const Payoff& payoff, bool retain_values = false);

/// Hedge ratios on the risk-neutral lattice; binomial models only.
std::vector<HedgeNode> hedge_model(const ModelSetup& setup, double spot, const TimeGrid& grid,
                                   const Payoff& payoff);

}  // namespace mmtree
