#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mmtree {

/// Uniform time discretisation of [0, maturity] into `steps` intervals.
class TimeGrid {
 public:
  TimeGrid(double maturity, int steps);

  double maturity() const { return maturity_; }
  int steps() const { return steps_; }
  double dt() const { return dt_; }
  /// t_n = n * dt, with t_N pinned to the maturity.
  double time(int n) const { return n == steps_ ? maturity_ : n * dt_; }

 private:
  double maturity_;
  int steps_;
  double dt_;
};

/// One lattice step: branch factors ordered down -> [mid ->] up and the
/// matching branch probabilities.
class StepSpec {
 public:
  StepSpec(std::vector<double> factors, std::vector<double> probabilities);

  static StepSpec binomial(double down, double up, double prob_up);
  static StepSpec trinomial(double down, double mid, double up, double prob_down,
                            double prob_mid, double prob_up);

  std::size_t branches() const { return factors_.size(); }
  bool is_binomial() const { return factors_.size() == 2; }
  bool is_trinomial() const { return factors_.size() == 3; }
  const std::vector<double>& factors() const { return factors_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double down() const { return factors_.front(); }
  double up() const { return factors_.back(); }
  /// Middle factor; trinomial only.
  double mid() const;

 private:
  std::vector<double> factors_;
  std::vector<double> probabilities_;
};

/// Per-level branch probabilities, one vector per step (down..up order).
using LevelProbabilities = std::vector<std::vector<double>>;

/// Extracts the branch probabilities carried by each step.
LevelProbabilities probabilities_of(std::span<const StepSpec> steps);

/// Recombining price lattice. Binomial level n holds n + 1 nodes indexed by
/// up-count j = 0..n; trinomial level n holds 2n + 1 nodes indexed by net
/// up-count j = -n..n. Nodes are stored densely, one flat buffer.
class Lattice {
 public:
  enum class Shape { kBinomial, kTrinomial };

  Shape shape() const { return shape_; }
  bool is_binomial() const { return shape_ == Shape::kBinomial; }
  const TimeGrid& grid() const { return grid_; }
  int steps() const { return grid_.steps(); }
  double spot() const { return values_.front(); }

  std::size_t level_size(int n) const;
  /// Node prices of level n in increasing j.
  std::span<const double> level(int n) const;
  /// j is the up-count (binomial) or net up-count (trinomial).
  double node(int n, int j) const;
  /// Step advancing level n to n + 1, n = 0..N-1.
  const StepSpec& step(int n) const { return steps_.at(static_cast<std::size_t>(n)); }
  std::span<const StepSpec> steps_spec() const { return steps_; }

 private:
  friend Lattice build_binomial(double, const TimeGrid&, std::vector<StepSpec>);
  friend Lattice build_trinomial(double, const TimeGrid&, std::vector<StepSpec>);

  Lattice(Shape shape, TimeGrid grid, std::vector<StepSpec> steps);
  std::size_t offset(int n) const;

  Shape shape_;
  TimeGrid grid_;
  std::vector<StepSpec> steps_;
  std::vector<double> values_;
};

/// With equal factors at every step node (n, j) is S0 * up^j * down^(n-j).
/// Otherwise level n is log S0 + m_n + (j - J_n) b_n, where m_n is the mean
/// log return over n steps, J_n the expected number of ups and b_n^2 the
/// log-return variance divided by the variance of the up count, so the
/// lattice reproduces the first two log moments of the unrecombined tree.
Lattice build_binomial(double spot, const TimeGrid& grid, std::vector<StepSpec> steps);

/// Node (n, j) carries S0 * up^j * mid^(n-j) for j >= 0 and
/// S0 * down^|j| * mid^(n-|j|) for j < 0 (minimal-swing path).
Lattice build_trinomial(double spot, const TimeGrid& grid, std::vector<StepSpec> steps);

/// Size of the non-commutation of consecutive steps. Binomial: the largest
/// relative gap between up-then-down and down-then-up over adjacent steps;
/// trinomial: the largest |up * down - mid^2| / mid^2.
double recombination_residual(std::span<const StepSpec> steps, const TimeGrid& grid);

}  // namespace mmtree
