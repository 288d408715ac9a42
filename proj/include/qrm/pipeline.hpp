#pragma once

#include "qrm/dynamics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrm {

enum class Model { gme, dressed_rwa, standard_jc };

std::string_view to_string(Model m);
Model model_from_string(std::string_view s);

// n_max / M equal to 0 mean "auto".
struct TruncationSpec {
  int n_max = 0;
  int M = 0;
  int n_max_start = 16;
  int n_max_cap = 256;
  double eigen_tol = 1e-10;  // relative shift of the lowest M levels between doublings
  bool auto_M = false;       // double M until the rates settle
  int M_cap = 40;
  double observable_tol = 1e-6;
  int standard_n_max = 9;    // bare truncation of the standard model when n_max is auto

  int default_M(const BathSpec& bath) const { return M > 0 ? M : (bath.T_q >= 0.5 ? 40 : 20); }
};

// Hamiltonian, dressed levels and matrix elements at one parameter point.
struct DressedSystem {
  HilbertSpace space{1};
  ModelParams params;
  Gauge gauge = Gauge::coulomb;
  Operator H;
  EigenSystem eig;
  TransitionTable table;
};

DressedSystem build_dressed(const ModelParams& params, Gauge gauge, int n_max, int M);

// Lowest-M eigenvalue convergence under photon-number doubling. Returns the
// first n_max whose levels differ from the previous doubling by less than
// eigen_tol * max(|E|, omega_q); throws ConvergenceError past the cap.
int converge_n_max(const ModelParams& params, Gauge gauge, int M, const TruncationSpec& trunc);

// Relative distance between two ascending level lists (first M entries).
double level_shift(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int M, double omega_q);

struct PointSpec {
  ModelParams params;
  BathSpec bath;
  Gauge gauge = Gauge::dipole;
  Model model = Model::gme;
  TruncationSpec trunc;
};

// Steady-state generator and detection operators at one point.
struct OpenSystem {
  PointSpec spec;
  int n_max = 0;
  int M = 0;
  std::optional<DressedSystem> dressed;  // absent for the standard model
  Superoperator L;
  DensityMatrix rho;
  std::vector<std::string> warnings;

  // Linear-weighted rate operator for the channel (cavity_wrong needs the dipole gauge).
  Operator rate_operator(Channel ch) const;
  // Operator used for spectra: flat-weighted for dressed models, a / sigma_- otherwise.
  Operator spectrum_operator(Channel ch) const;
  SpectrumForm spectrum_form() const;
  double omega_ref(Channel ch) const;
};

OpenSystem solve_point(const PointSpec& spec);

struct RatePoint {
  double eta = 0.0;
  double W_c = 0.0;
  double W_q = 0.0;
  double W_c_wrong = 0.0;
  bool has_wrong = false;
  int n_max = 0;
  int M = 0;
  std::vector<std::string> warnings;
};

// Unnormalized rates. The wrong-operator rate is included when requested
// and the model is dressed (it is computed in the dipole gauge).
RatePoint compute_rates(const PointSpec& spec, bool with_wrong);

// W_q at eta = 0 for the same bath and frequencies; throws NormalizationError when T_q = 0.
double reference_rate_eta0(const BathSpec& bath, const ModelParams& params, int M = 20);

SpectrumResult compute_spectrum(const OpenSystem& sys, Channel ch, const std::vector<double>& grid);

// One spectrum per eta, each normalized to max 1.
std::vector<SpectrumResult> spectrum_map(const PointSpec& base, const std::vector<double>& etas,
                                         Channel ch, const std::vector<double>& grid);

}  // namespace qrm
