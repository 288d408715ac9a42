#pragma once

#include "qrm/master_equation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qrm {

struct DensityMatrix {
  Operator rho;

  int M() const noexcept { return static_cast<int>(rho.rows()); }
  double trace() const { return rho.trace().real(); }
  double min_eigenvalue() const;
  // Throws DensityMatrixDiagnostic when Hermiticity, trace or positivity are off.
  void check(double positivity_tol = 1e-8) const;
};

struct SteadyStateOptions {
  // Compare the two smallest |Re lambda| of L (dense eigensolve, cost ~ M^6).
  bool check_gap = false;
  double gap_ratio = 1e3;
  double rcond_floor = 1e-15;
  int refinement_steps = 2;
};

// Null vector of L with unit trace. Solved for the deviation from the
// ground-level projector, with the rho_00 equation replaced by the trace row.
DensityMatrix steady_state(const Superoperator& L, const SteadyStateOptions& opts = {});

// Tr[O^- O^+ rho] with O^- = (O^+)^dag.
double emission_rate(const DensityMatrix& rho, const Operator& o_plus);

// Approximate W_c/W_q from the (0, 1-) transition alone:
// (omega_q^2/omega_c^2) |x|^2 / |s|^2. Throws NormalizationError if |s| < 1e-14.
double two_level_ratio(const EigenSystem& eig, const TransitionTable& table, const ModelParams& params);

enum class Normalization { raw, max1 };

struct SpectrumResult {
  std::vector<double> omegas;
  std::vector<double> values;
  Channel channel = Channel::cavity;
  Normalization normalization = Normalization::raw;

  double max_value() const;
  void normalize_max();
};

// Solves (i w - L) y = b for many w after one Hessenberg reduction of L.
class ResolventSolver {
 public:
  explicit ResolventSolver(const Superoperator& L);

  int size() const noexcept { return static_cast<int>(Ht_.rows()); }
  // w^T (i omega - L)^{-1} b for a fixed pair (w, b) given in the original basis.
  void set_vectors(const Vector& w, const Vector& b);
  cplx evaluate(double omega) const;

 private:
  Operator Ht_;  // transposed Hessenberg factor
  Operator Q_;
  double scale_ = 1.0;
  Vector u_;  // Q^T w
  Vector c_;  // Q^dag b
};

enum class SpectrumForm {
  replaced,  // (omega/omega_ref)^2 prefactor with flat-weighted operators
  plain,     // no prefactor, operators as given
};

// S(omega) = pref * Re Tr[O^- unvec((i omega - L)^{-1} vec(O^+ rho))].
SpectrumResult emission_spectrum(const Superoperator& L, const DensityMatrix& rho_ss,
                                 const Operator& o_minus, const Operator& o_plus,
                                 double omega_ref, const std::vector<double>& grid,
                                 SpectrumForm form = SpectrumForm::replaced,
                                 Channel channel = Channel::cavity);

// Grid helpers; both reject empty or non-positive ranges.
std::vector<double> linear_grid(double lo, double hi, int points);
std::vector<double> log_grid(double lo, double hi, int points);

// Per-row max normalization, rows kept in input order.
std::vector<SpectrumResult> normalize_rows(std::vector<SpectrumResult> rows);

}  // namespace qrm
