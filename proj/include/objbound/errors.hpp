#pragma once

#include <stdexcept>

namespace objbound {

// Exception types for the library. Argument errors use the standard
// std::invalid_argument / std::out_of_range; the types below name the
// domain failures callers are expected to handle distinctly.

/// Sum of 1/f_j (or of (1/f_j) log f_j) diverges for the spectrum.
class NotSummable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Energy cap at or below the ground energy: no Gibbs state exists.
class EnergyTooLow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver failed to bracket or converge.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// eps' = zeta/delta > 1: the entropy continuity bound does not apply.
class RegimeViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operator/channel dimensions do not line up.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A constructed quantum object violates its defining invariant.
class InvariantViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace objbound
