#include "mmtree/tree_model.hpp"

#include "mmtree/error.hpp"
#include "mmtree/model_ksrf.hpp"
#include "mmtree/model_trinomial.hpp"

namespace mmtree {

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kCrrTd:
      return "crr-td";
    case ModelKind::kKsrfTd:
      return "ksrf-td";
    case ModelKind::kTrinomialClassical:
      return "tri-classical";
    case ModelKind::kTrinomialNew:
      return "tri-new";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) {
  for (auto k : {ModelKind::kCrrTd, ModelKind::kKsrfTd, ModelKind::kTrinomialClassical,
                 ModelKind::kTrinomialNew}) {
    if (model_name(k) == name) return k;
  }
  return std::nullopt;
}

bool is_binomial(ModelKind kind) {
  return kind == ModelKind::kCrrTd || kind == ModelKind::kKsrfTd;
}

std::vector<StepSpec> build_steps(const ModelSetup& setup, const TimeGrid& grid, World world) {
  const auto& mc = setup.coefficients;
  mc.validate_on(grid.maturity(), grid.steps());
  const double dt = grid.dt();
  std::vector<StepSpec> steps;
  steps.reserve(static_cast<std::size_t>(grid.steps()));

  if (is_binomial(setup.kind)) {
    if (setup.kind == ModelKind::kKsrfTd && !setup.ksrf_p.covers(grid.maturity())) {
      throw DomainError("KSRF probability curve does not cover [0, maturity]");
    }
    for (int n = 1; n <= grid.steps(); ++n) {
      const double t = grid.time(n);
      steps.push_back(setup.kind == ModelKind::kCrrTd
                          ? crr_step(mc, t, dt).spec(world)
                          : ksrf_step(mc, setup.ksrf_p, t, dt).spec(world));
    }
    return steps;
  }

  if (!mc.mu.is_constant() || !mc.sigma.is_constant() || !mc.rate.is_constant()) {
    throw UnsupportedError("trinomial models support constant coefficients only");
  }
  const double sigma = mc.sigma.eval(0.0);
  TrinomialStep step;
  if (setup.kind == ModelKind::kTrinomialClassical) {
    if (world == World::kNatural) {
      throw UnsupportedError("the classical trinomial is defined in the risk-neutral world only");
    }
    step = classical_trinomial_step(mc.rate.eval(0.0), sigma, dt);
  } else {
    step = world == World::kNatural ? new_trinomial_natural_step(mc.mu.eval(0.0), sigma, dt)
                                    : new_trinomial_risk_neutral_step(mc.rate.eval(0.0), sigma, dt);
  }
  steps.assign(static_cast<std::size_t>(grid.steps()), step.spec());
  return steps;
}

Lattice build_lattice(const ModelSetup& setup, double spot, const TimeGrid& grid, World world) {
  auto steps = build_steps(setup, grid, world);
  return is_binomial(setup.kind) ? build_binomial(spot, grid, std::move(steps))
                                 : build_trinomial(spot, grid, std::move(steps));
}

std::vector<double> step_discounts(const MarketCoefficients& mc, const TimeGrid& grid) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.steps()));
  for (int n = 1; n <= grid.steps(); ++n) out.push_back(step_discount(mc, grid.time(n), grid.dt()));
  return out;
}

PriceResult price_model(const ModelSetup& setup, double spot, const TimeGrid& grid,
                        const Payoff& payoff, bool retain_values) {
  const auto lattice = build_lattice(setup, spot, grid, World::kRiskNeutral);
  return price_european(lattice, probabilities_of(lattice.steps_spec()),
                        step_discounts(setup.coefficients, grid), payoff, retain_values);
}

std::vector<HedgeNode> hedge_model(const ModelSetup& setup, double spot, const TimeGrid& grid,
                                   const Payoff& payoff) {
  if (!is_binomial(setup.kind)) {
    throw UnsupportedError(
        "hedging is not available for trinomial models: three outcomes and one risky asset "
        "make the market incomplete");
  }
  const auto lattice = build_lattice(setup, spot, grid, World::kRiskNeutral);
  HedgeModel model;
  model.formula = setup.kind == ModelKind::kCrrTd ? HedgeFormula::kCrr : HedgeFormula::kKsrf;
  for (int n = 1; n <= grid.steps(); ++n) {
    model.sigma.push_back(setup.coefficients.sigma.eval(grid.time(n)));
    if (model.formula == HedgeFormula::kKsrf) model.p.push_back(setup.ksrf_p.eval(grid.time(n)));
  }
  return hedge_report(lattice, probabilities_of(lattice.steps_spec()),
                      step_discounts(setup.coefficients, grid), payoff, model);
}

}  // namespace mmtree
