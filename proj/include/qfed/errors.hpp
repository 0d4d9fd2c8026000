// errors.hpp - exception types thrown by the solver and the scenario runner.

#pragma once

#include <stdexcept>
#include <string>

namespace qfed {

// |W| of the two outgoing solutions underflowed. This signals a true guided /
// bound mode, which cannot occur for strictly lossy outer layers; it is
// reported rather than silently patched.
class DegenerateWronskian : public std::runtime_error {
 public:
  explicit DegenerateWronskian(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive source-point quadrature failed to meet its tolerance within the
// interval budget. Carries the field point so sweeps can report where.
class QuadratureNotConverged : public std::runtime_error {
 public:
  QuadratureNotConverged(const std::string& what, double x_um, double energy_ev)
      : std::runtime_error(what), x_um(x_um), energy_ev(energy_ev) {}
  double x_um;
  double energy_ev;
};

// The source-integral pathway needs decaying tails: both semi-infinite outer
// layers must be lossy (uniform single-medium stacks are handled exactly and
// are exempt). For fully lossless cavities use the closed forms in lossless.hpp.
class LosslessOuterLayer : public std::runtime_error {
 public:
  explicit LosslessOuterLayer(const std::string& what) : std::runtime_error(what) {}
};

// |1 + r1 r2 e^{2 i k2 d2}| vanished; only possible for degenerate
// unit-reflectivity inputs, not for physical index pairs.
class PoleAtResonance : public std::runtime_error {
 public:
  explicit PoleAtResonance(const std::string& what) : std::runtime_error(what) {}
};

// Thickness calibration could not locate a density-of-states maximum in the
// requested scan range.
class NoResonanceFound : public std::runtime_error {
 public:
  explicit NoResonanceFound(const std::string& what) : std::runtime_error(what) {}
};

// Scenario file is malformed or violates a model invariant. The message names
// the offending field (and the parse position for syntax errors).
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfed
