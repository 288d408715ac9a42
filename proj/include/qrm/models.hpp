#pragma once

#include "qrm/hilbert.hpp"

#include <string_view>

namespace qrm {

enum class Gauge { coulomb, dipole };

std::string_view to_string(Gauge g);

// Cavity/qubit frequencies (hbar = 1) and the normalized coupling eta = g / omega_c.
struct ModelParams {
  double omega_c = 1.0;
  double omega_q = 1.0;
  double eta = 0.0;
  // JC coupling is jc_coupling_scale * eta * omega_c; 0.5 reproduces the
  // printed JC Hamiltonian, 1.0 matches the dipole-gauge Rabi prefactor.
  double jc_coupling_scale = 0.5;

  // (omega_c - omega_q) / omega_q
  double delta() const noexcept { return (omega_c - omega_q) / omega_q; }
  double coupling() const noexcept { return eta * omega_c; }

  static ModelParams from_detuning(double delta, double eta, double omega_q = 1.0);
  void validate() const;
};

// U = exp[i eta (a + a^dag) sigma_x]; the dipole-gauge map is R = U^dag.
Operator gauge_unitary(const HilbertSpace& space, const ModelParams& params);

// omega_c a^dag a + (omega_q/2){sigma_z cos[2 eta x] + sigma_y sin[2 eta x]}, x = a + a^dag
// with cos/sin evaluated on the truncated x.
Operator hamiltonian_coulomb(const HilbertSpace& space, const ModelParams& params);

// omega_c a^dag a + (omega_q/2) sigma_z - i eta omega_c (a - a^dag) sigma_x + omega_c eta^2
Operator hamiltonian_dipole(const HilbertSpace& space, const ModelParams& params);

Operator hamiltonian(const HilbertSpace& space, const ModelParams& params, Gauge gauge);

// omega_c a^dag a + (omega_q/2) sigma_z + lambda (a sigma_+ + a^dag sigma_-),
// lambda = jc_coupling_scale * eta * omega_c.
Operator hamiltonian_jc(const HilbertSpace& space, const ModelParams& params);

// a' = a + i eta sigma_x
Operator dressed_photon_operator(const HilbertSpace& space, const ModelParams& params);

}  // namespace qrm
