#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

/// Argument outside its mathematical domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// p + r = 0: the channel chain never moves and has no unique stationary
/// distribution.
class DegenerateChainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// r = 0: the bad state is absorbing and the age grows without bound.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Arrival rate at or above the sustainable service rate of the channel.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The closed forms only cover the pe_good = 0, pe_bad = 1 erasure model.
/// General erasure probabilities are handled by the simulator.
class UnsupportedRegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical solve failed (no bracketed root, singular system, ...).
class SolverFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aoi
