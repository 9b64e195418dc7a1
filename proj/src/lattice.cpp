#include "mmtree/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmtree/error.hpp"

namespace mmtree {

TimeGrid::TimeGrid(double maturity, int steps) : maturity_(maturity), steps_(steps) {
  if (!(maturity > 0.0) || !std::isfinite(maturity)) throw DomainError("maturity must be positive");
  if (steps < 1) throw DomainError("steps must be at least 1");
  dt_ = maturity / steps;
}

StepSpec::StepSpec(std::vector<double> factors, std::vector<double> probabilities)
    : factors_(std::move(factors)), probabilities_(std::move(probabilities)) {
  if (factors_.size() != 2 && factors_.size() != 3) {
    throw ShapeError("a step has 2 or 3 branches, got " + std::to_string(factors_.size()));
  }
  if (probabilities_.size() != factors_.size()) {
    throw ShapeError("branch factor and probability counts differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!(factors_[i] > 0.0) || !std::isfinite(factors_[i])) {
      throw RegimeError("branch factor must be positive, got " + std::to_string(factors_[i]));
    }
    // Equal neighbours are allowed so degenerate (identity) steps can be expressed.
    if (i > 0 && factors_[i] < factors_[i - 1]) {
      throw ShapeError("branch factors must be ordered down to up");
    }
    if (!(probabilities_[i] > 0.0 && probabilities_[i] < 1.0)) {
      throw RegimeError("branch probability outside (0,1): " + std::to_string(probabilities_[i]));
    }
    total += probabilities_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw RegimeError("branch probabilities do not sum to 1");
}

StepSpec StepSpec::binomial(double down, double up, double prob_up) {
  return StepSpec({down, up}, {1.0 - prob_up, prob_up});
}

StepSpec StepSpec::trinomial(double down, double mid, double up, double prob_down,
                             double prob_mid, double prob_up) {
  return StepSpec({down, mid, up}, {prob_down, prob_mid, prob_up});
}

double StepSpec::mid() const {
  if (!is_trinomial()) throw ShapeError("binomial step has no middle branch");
  return factors_[1];
}

LevelProbabilities probabilities_of(std::span<const StepSpec> steps) {
  LevelProbabilities out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.probabilities());
  return out;
}

Lattice::Lattice(Shape shape, TimeGrid grid, std::vector<StepSpec> steps)
    : shape_(shape), grid_(grid), steps_(std::move(steps)) {}

std::size_t Lattice::offset(int n) const {
  const auto k = static_cast<std::size_t>(n);
  return shape_ == Shape::kBinomial ? k * (k + 1) / 2 : k * k;
}

std::size_t Lattice::level_size(int n) const {
  const auto k = static_cast<std::size_t>(n);
  return shape_ == Shape::kBinomial ? k + 1 : 2 * k + 1;
}

std::span<const double> Lattice::level(int n) const {
  if (n < 0 || n > steps()) throw ShapeError("lattice level out of range");
  return std::span<const double>(values_).subspan(offset(n), level_size(n));
}

double Lattice::node(int n, int j) const {
  const auto lv = level(n);
  const int index = shape_ == Shape::kBinomial ? j : j + n;
  if (index < 0 || static_cast<std::size_t>(index) >= lv.size()) {
    throw ShapeError("node index out of range");
  }
  return lv[static_cast<std::size_t>(index)];
}

namespace {

void check_steps(double spot, const TimeGrid& grid, const std::vector<StepSpec>& steps,
                 std::size_t branches) {
  if (!(spot > 0.0)) throw DomainError("spot must be positive");
  if (steps.size() != static_cast<std::size_t>(grid.steps())) {
    throw ShapeError("expected " + std::to_string(grid.steps()) + " steps, got " +
                     std::to_string(steps.size()));
  }
  for (const auto& s : steps) {
    if (s.branches() != branches) {
      throw ShapeError(branches == 2 ? "binomial lattice needs binomial steps"
                                     : "trinomial lattice needs trinomial steps");
    }
  }
}

}  // namespace

Lattice build_binomial(double spot, const TimeGrid& grid, std::vector<StepSpec> steps) {
  check_steps(spot, grid, steps, 2);
  Lattice lat(Lattice::Shape::kBinomial, grid, std::move(steps));
  const int N = grid.steps();
  lat.values_.resize(lat.offset(N + 1));
  lat.values_[0] = spot;
  const bool same_factors = std::all_of(lat.steps_.begin(), lat.steps_.end(), [&](const StepSpec& s) {
    return s.up() == lat.steps_.front().up() && s.down() == lat.steps_.front().down();
  });
  if (same_factors) {
    // Every path with j ups ends at S0 up^j down^(n-j).
    for (int n = 1; n <= N; ++n) {
      const auto& s = lat.steps_[static_cast<std::size_t>(n - 1)];
      const double* prev = lat.values_.data() + lat.offset(n - 1);
      double* cur = lat.values_.data() + lat.offset(n);
      for (int j = 0; j < n; ++j) cur[j] = prev[j] * s.down();
      cur[n] = prev[n - 1] * s.up();
    }
    return lat;
  }
  // Level n: log S = log S0 + m_n + (j - J_n) b_n, matching the mean and
  // variance of the log price over all paths of the unrecombined tree.
  double mean = 0.0, ups = 0.0, var = 0.0, count_var = 0.0;
  for (int n = 1; n <= N; ++n) {
    const auto& s = lat.steps_[static_cast<std::size_t>(n - 1)];
    const double p = s.probabilities()[1];
    const double lu = std::log(s.up()), ld = std::log(s.down());
    mean += p * lu + (1.0 - p) * ld;
    ups += p;
    var += p * (1.0 - p) * (lu - ld) * (lu - ld);
    count_var += p * (1.0 - p);
    const double b = std::sqrt(var / count_var);
    double* cur = lat.values_.data() + lat.offset(n);
    for (int j = 0; j <= n; ++j) cur[j] = spot * std::exp(mean + (j - ups) * b);
  }
  return lat;
}

Lattice build_trinomial(double spot, const TimeGrid& grid, std::vector<StepSpec> steps) {
  check_steps(spot, grid, steps, 3);
  Lattice lat(Lattice::Shape::kTrinomial, grid, std::move(steps));
  const int N = grid.steps();
  lat.values_.resize(lat.offset(N + 1));
  lat.values_[0] = spot;
  for (int n = 1; n <= N; ++n) {
    const auto& s = lat.steps_[static_cast<std::size_t>(n - 1)];
    const double* prev = lat.values_.data() + lat.offset(n - 1);
    double* cur = lat.values_.data() + lat.offset(n);
    // prev index i <-> j = i - (n - 1); cur index i <-> j = i - n
    cur[0] = prev[0] * s.down();
    for (int i = 0; i < 2 * n - 1; ++i) cur[i + 1] = prev[i] * s.mid();
    cur[2 * n] = prev[2 * n - 2] * s.up();
  }
  return lat;
}

double recombination_residual(std::span<const StepSpec> steps, const TimeGrid& grid) {
  if (steps.size() != static_cast<std::size_t>(grid.steps())) {
    throw ShapeError("step list does not match the grid");
  }
  if (steps.empty()) return 0.0;
  const bool binomial = steps.front().is_binomial();
  double worst = 0.0;
  if (binomial) {
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
      const double up_down = steps[k].up() * steps[k + 1].down();
      const double down_up = steps[k].down() * steps[k + 1].up();
      worst = std::max(worst, std::abs(up_down - down_up) / (0.5 * (up_down + down_up)));
    }
  } else {
    for (const auto& s : steps) {
      const double m2 = s.mid() * s.mid();
      worst = std::max(worst, std::abs(s.up() * s.down() - m2) / m2);
    }
  }
  return worst;
}

}  // namespace mmtree
