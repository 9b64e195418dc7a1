#include "mmtree/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmtree/error.hpp"
#include "mmtree/model_crr.hpp"
#include "mmtree/model_ksrf.hpp"

namespace mmtree {

Payoff Payoff::call(double strike) {
  if (!(strike >= 0.0)) throw DomainError("strike must be non-negative");
  return Payoff(Kind::kCall, strike, nullptr);
}

Payoff Payoff::put(double strike) {
  if (!(strike >= 0.0)) throw DomainError("strike must be non-negative");
  return Payoff(Kind::kPut, strike, nullptr);
}

Payoff Payoff::custom(std::function<double(double)> g) {
  if (!g) throw DomainError("custom payoff needs a function");
  return Payoff(Kind::kCustom, 0.0, std::move(g));
}

Payoff Payoff::constant(double value) {
  return custom([value](double) { return value; });
}

double Payoff::operator()(double spot) const {
  switch (kind_) {
    case Kind::kCall:
      return std::max(spot - strike_, 0.0);
    case Kind::kPut:
      return std::max(strike_ - spot, 0.0);
    case Kind::kCustom:
      break;
  }
  const double v = g_(spot);
  if (!std::isfinite(v)) throw DomainError("payoff is not finite at S = " + std::to_string(spot));
  return v;
}

namespace {

void check_shapes(const Lattice& lattice, const LevelProbabilities& probabilities,
                  std::span<const double> discounts) {
  const auto N = static_cast<std::size_t>(lattice.steps());
  if (probabilities.size() != N) throw ShapeError("one probability vector per step expected");
  if (discounts.size() != N) throw ShapeError("one discount factor per step expected");
  const std::size_t branches = lattice.is_binomial() ? 2 : 3;
  for (const auto& p : probabilities) {
    if (p.size() != branches) throw ShapeError("probability vector has the wrong branch count");
  }
}

// Rolls `next` (level n + 1) back onto `cur` (level n).
void roll_back(const Lattice& lattice, int n, const std::vector<double>& q, double discount,
               std::span<const double> next, std::vector<double>& cur) {
  const std::size_t size = lattice.level_size(n);
  cur.resize(size);
  if (lattice.is_binomial()) {
    for (std::size_t j = 0; j < size; ++j) {
      cur[j] = discount * (q[0] * next[j] + q[1] * next[j + 1]);
    }
  } else {
    // child of index i at level n + 1 sits at indices i, i + 1, i + 2
    for (std::size_t i = 0; i < size; ++i) {
      cur[i] = discount * (q[0] * next[i] + q[1] * next[i + 1] + q[2] * next[i + 2]);
    }
  }
}

std::vector<double> terminal_values(const Lattice& lattice, const Payoff& payoff) {
  const auto last = lattice.level(lattice.steps());
  std::vector<double> out(last.size());
  for (std::size_t i = 0; i < last.size(); ++i) out[i] = payoff(last[i]);
  return out;
}

}  // namespace

PriceResult price_european(const Lattice& lattice, const LevelProbabilities& probabilities,
                           std::span<const double> discounts, const Payoff& payoff,
                           bool retain_values) {
  check_shapes(lattice, probabilities, discounts);
  const int N = lattice.steps();
  PriceResult result;
  std::vector<double> next = terminal_values(lattice, payoff);
  std::vector<double> cur;
  if (retain_values) {
    result.values.resize(static_cast<std::size_t>(N) + 1);
    result.values.back() = next;
  }
  for (int n = N - 1; n >= 0; --n) {
    const auto k = static_cast<std::size_t>(n);
    roll_back(lattice, n, probabilities[k], discounts[k], next, cur);
    if (retain_values) result.values[k] = cur;
    std::swap(cur, next);
  }
  result.root_value = next.front();
  return result;
}

std::vector<HedgeNode> hedge_report(const Lattice& lattice,
                                    const LevelProbabilities& probabilities,
                                    std::span<const double> discounts, const Payoff& payoff,
                                    const HedgeModel& model) {
  if (!lattice.is_binomial()) {
    throw UnsupportedError(
        "hedge ratios need a binomial lattice: a trinomial step has three outcomes and one "
        "risky asset, so the market is incomplete");
  }
  const int N = lattice.steps();
  const auto steps = static_cast<std::size_t>(N);
  if (model.sigma.size() != steps) throw ShapeError("hedge model needs one sigma per step");
  if (model.formula == HedgeFormula::kKsrf && model.p.size() != steps) {
    throw ShapeError("KSRF hedge model needs one p per step");
  }
  const auto priced = price_european(lattice, probabilities, discounts, payoff, true);
  const double dt = lattice.grid().dt();

  std::vector<HedgeNode> out;
  out.reserve(steps * (steps + 1) / 2);
  for (int n = 0; n < N; ++n) {
    const auto k = static_cast<std::size_t>(n);
    const auto level = lattice.level(n);
    const auto next = lattice.level(n + 1);
    const auto& values = priced.values[k];
    const auto& children = priced.values[k + 1];
    for (int j = 0; j <= n; ++j) {
      const auto i = static_cast<std::size_t>(j);
      HedgeNode h;
      h.n = n;
      h.j = j;
      h.spot = level[i];
      h.value = values[i];
      h.value_up = children[i + 1];
      h.value_down = children[i];
      h.psi = model.formula == HedgeFormula::kCrr
                  ? crr_hedge_ratio(h.value_up, h.value_down, h.spot, model.sigma[k], dt)
                  : ksrf_hedge_ratio(h.value_up, h.value_down, h.spot, model.sigma[k], model.p[k], dt);
      h.spot_up = next[i + 1];
      h.spot_down = next[i];
      h.psi_replicating = (h.value_up - h.value_down) / (h.spot_up - h.spot_down);
      out.push_back(h);
    }
  }
  return out;
}

double brute_force_price(std::span<const StepSpec> steps, std::span<const double> discounts,
                         double spot, const Payoff& payoff) {
  if (steps.empty()) throw ShapeError("brute force needs at least one step");
  if (discounts.size() != steps.size()) throw ShapeError("one discount factor per step expected");
  if (!(spot > 0.0)) throw DomainError("spot must be positive");
  const std::size_t branches = steps.front().branches();
  for (const auto& s : steps) {
    if (s.branches() != branches) throw ShapeError("mixed binomial and trinomial steps");
  }
  const int limit = branches == 2 ? kMaxBruteForceBinomialSteps : kMaxBruteForceTrinomialSteps;
  if (steps.size() > static_cast<std::size_t>(limit)) {
    throw ResourceError("brute force limited to " + std::to_string(limit) + " steps, got " +
                        std::to_string(steps.size()));
  }

  double discount = 1.0;
  for (double d : discounts) discount *= d;

  // Odometer over branch choices, step 0 is the least significant digit.
  std::vector<std::size_t> choice(steps.size(), 0);
  double total = 0.0;
  while (true) {
    double value = spot;
    double prob = 1.0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      value *= steps[k].factors()[choice[k]];
      prob *= steps[k].probabilities()[choice[k]];
    }
    total += prob * payoff(value);

    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == branches) choice[k++] = 0;
    if (k == choice.size()) break;
  }
  return discount * total;
}

}  // namespace mmtree
