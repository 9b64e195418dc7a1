#include "mmtree/verification.hpp"

#include <cmath>
#include <numbers>

#include "mmtree/error.hpp"

namespace mmtree {

GbmMoment gbm_moment(double zeta, double mu, double sigma, double dt) {
  if (zeta < 0.0) throw DomainError("moment order must be non-negative");
  const double rate = zeta * (mu + 0.5 * (zeta - 1.0) * sigma * sigma);
  return {std::exp(rate * dt), 1.0 + rate * dt};
}

double lattice_step_moment(const StepSpec& step, double zeta) {
  if (zeta < 0.0) throw DomainError("moment order must be non-negative");
  double m = 0.0;
  for (std::size_t k = 0; k < step.branches(); ++k) {
    m += step.probabilities()[k] * std::pow(step.factors()[k], zeta);
  }
  return m;
}

MomentReport moment_report(const StepSpec& step, double zeta, double drift, double sigma,
                           double dt) {
  const auto g = gbm_moment(zeta, drift, sigma, dt);
  MomentReport r;
  r.zeta = zeta;
  r.lattice_moment = lattice_step_moment(step, zeta);
  r.analytic_moment = g.first_order;
  r.exact_moment = g.exact;
  r.residual = std::abs(r.lattice_moment - r.analytic_moment);
  r.dt = dt;
  return r;
}

LogReturnMoments logreturn_moments(const StepSpec& step) {
  if (!step.is_binomial()) throw ShapeError("log-return moments need a binomial step");
  const double p = step.probabilities()[1];
  const double up = std::log(step.up());
  const double down = std::log(step.down());
  const double mean = p * up + (1.0 - p) * down;
  // p(1-p)(up-down)^2 avoids cancellation in E[R^2] - E[R]^2
  const double variance = p * (1.0 - p) * (up - down) * (up - down);
  return {mean, variance};
}

double bs_price(double spot, double strike, double maturity, double rate, double sigma,
                OptionKind kind) {
  if (!(spot > 0.0)) throw DomainError("spot must be positive");
  if (!(strike > 0.0)) throw DomainError("strike must be positive");
  if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  const double vol = sigma * std::sqrt(maturity);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / vol;
  const double d2 = d1 - vol;
  const double df = std::exp(-rate * maturity);
  if (kind == OptionKind::kCall) return spot * cdf(d1) - strike * df * cdf(d2);
  return strike * df * cdf(-d2) - spot * cdf(-d1);
}

AveragedCoefficients averaged_coefficients(const MarketCoefficients& mc, double maturity) {
  if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
  // Constant curves skip the integral so the oracle matches the direct closed form bitwise.
  AveragedCoefficients avg;
  avg.rate = mc.rate.is_constant() ? mc.rate.eval(0.0) : mc.rate.integrate(0.0, maturity) / maturity;
  avg.sigma = mc.sigma.is_constant()
                  ? mc.sigma.eval(0.0)
                  : std::sqrt(mc.sigma.integrate_squared(0.0, maturity) / maturity);
  return avg;
}

double oracle_price(const MarketCoefficients& mc, double spot, double maturity,
                    const Payoff& payoff) {
  if (payoff.kind() == Payoff::Kind::kCustom) {
    throw UnsupportedError("the closed-form oracle covers calls and puts only");
  }
  const auto avg = averaged_coefficients(mc, maturity);
  return bs_price(spot, payoff.strike(), maturity, avg.rate, avg.sigma,
                  payoff.kind() == Payoff::Kind::kCall ? OptionKind::kCall : OptionKind::kPut);
}

std::vector<std::vector<double>> node_probabilities(const Lattice& lattice,
                                                    const LevelProbabilities& probabilities) {
  const int N = lattice.steps();
  if (probabilities.size() != static_cast<std::size_t>(N)) {
    throw ShapeError("one probability vector per step expected");
  }
  const std::size_t branches = lattice.is_binomial() ? 2 : 3;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(N) + 1);
  out[0] = {1.0};
  for (int n = 0; n < N; ++n) {
    const auto k = static_cast<std::size_t>(n);
    const auto& q = probabilities[k];
    if (q.size() != branches) throw ShapeError("probability vector has the wrong branch count");
    auto& next = out[k + 1];
    next.assign(lattice.level_size(n + 1), 0.0);
    const auto& cur = out[k];
    // children of index i sit at i .. i + branches - 1 on the next level
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t b = 0; b < branches; ++b) next[i + b] += cur[i] * q[b];
    }
  }
  return out;
}

std::vector<TerminalState> forward_probabilities(const Lattice& lattice,
                                                 const LevelProbabilities& probabilities) {
  const auto all = node_probabilities(lattice, probabilities);
  const auto last = lattice.level(lattice.steps());
  std::vector<TerminalState> out(last.size());
  for (std::size_t i = 0; i < last.size(); ++i) out[i] = {last[i], all.back()[i]};
  return out;
}

std::vector<ConvergenceRow> convergence_study(const ModelSetup& setup, double spot,
                                              double maturity, const Payoff& payoff,
                                              std::span<const int> step_counts) {
  for (std::size_t i = 1; i < step_counts.size(); ++i) {
    if (step_counts[i] < step_counts[i - 1]) throw DomainError("step counts must be ascending");
  }
  const double oracle = oracle_price(setup.coefficients, spot, maturity, payoff);
  std::vector<ConvergenceRow> rows;
  rows.reserve(step_counts.size());
  for (int N : step_counts) {
    ConvergenceRow row;
    row.steps = N;
    row.lattice_price = price_model(setup, spot, TimeGrid(maturity, N), payoff).root_value;
    row.oracle_price = oracle;
    row.abs_error = std::abs(row.lattice_price - oracle);
    if (!rows.empty()) {
      const auto& prev = rows.back();
      if (N > prev.steps && prev.abs_error > 0.0 && row.abs_error > 0.0) {
        row.order = std::log(prev.abs_error / row.abs_error) /
                    std::log(static_cast<double>(N) / prev.steps);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmtree
