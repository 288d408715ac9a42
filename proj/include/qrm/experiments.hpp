#pragma once

#include "qrm/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qrm {

// Coulomb vs dipole comparison at one coupling.
struct GaugeAuditPoint {
  double eta = 0.0;
  int n_max = 0;
  int levels = 0;
  double eigen_residual = 0.0;        // max |dE| / max(|E|, omega_q)
  double element_residual_x = 0.0;    // max |x'_jk - x_jk| after phase alignment
  double element_residual_s = 0.0;
  double min_overlap = 1.0;           // min |<j'|U^dag|j>|, should be 1
  double liouvillian_residual = 0.0;  // max |L' - L| / max |L|
  double W_c_coulomb = 0.0;
  double W_c_dipole = 0.0;
  double W_q_coulomb = 0.0;
  double W_q_dipole = 0.0;
  double W_c_wrong = 0.0;
  double rate_residual = 0.0;         // max relative W_c, W_q difference
  double wrong_deviation = 0.0;       // |W~'_c - W_c| / W_c, expected large
  bool pass = false;
};

GaugeAuditPoint gauge_audit_point(const ModelParams& params, const BathSpec& bath,
                                  const TruncationSpec& trunc, const AuditTolerances& tol);

double relative_difference(double a, double b);

struct RunOptions {
  std::filesystem::path out;  // empty: use output.dir from the config
  int workers = 0;            // 0: hardware concurrency
  bool seedless = false;
};

// Exit codes shared by the commands.
enum ExitCode : int { kOk = 0, kConfigError = 2, kConvergenceFailure = 3, kAuditFailure = 4 };

int cmd_levels(const Config& cfg, const RunOptions& opts);
int cmd_rates(const Config& cfg, const RunOptions& opts);
int cmd_spectra(const Config& cfg, const RunOptions& opts);
int cmd_gauge_audit(const Config& cfg, const RunOptions& opts);
int cmd_compare_models(const Config& cfg, const RunOptions& opts);

// printf("%.12e")
std::string format_double(double v);
std::string sha256_hex(const std::filesystem::path& file);

}  // namespace qrm
