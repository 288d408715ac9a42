#pragma once

#include <stdexcept>
#include <string>

namespace qrm {

// Photon truncation below the minimum supported value.
class InvalidTruncation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The Liouvillian has a degenerate (or numerically undetermined) null space.
class NonUniqueSteadyState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed density matrix violates positivity/trace/hermiticity bounds.
class DensityMatrixDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fock-space or dressed-level truncation did not converge within budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LabelingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular resolvent at a requested frequency.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double omega)
      : std::runtime_error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

// Emission rates cannot be normalized (reference rate vanishes).
class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrm
