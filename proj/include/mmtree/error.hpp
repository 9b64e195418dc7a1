#pragma once

#include <stdexcept>
#include <string>

namespace mmtree {

/// Argument outside the mathematical domain of an operation (t outside a
/// curve, non-positive volatility, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Model parameters are individually valid but the step size makes the
/// lattice degenerate (probability outside (0,1), non-positive factor).
/// The usual remedy is a smaller time step.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs with inconsistent shapes: wrong branch count, per-level lists of
/// the wrong length.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation not defined for the requested model (e.g. hedging on a
/// trinomial lattice).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Refusal to run an exponential-cost computation past its size guard.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace mmtree
