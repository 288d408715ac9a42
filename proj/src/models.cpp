#include "qrm/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qrm {

std::string_view to_string(Gauge g) {
  return g == Gauge::coulomb ? "coulomb" : "dipole";
}

ModelParams ModelParams::from_detuning(double delta, double eta, double omega_q) {
  ModelParams p;
  p.omega_q = omega_q;
  p.omega_c = omega_q * (1.0 + delta);
  p.eta = eta;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (!(omega_c > 0.0) || !(omega_q > 0.0)) {
    throw std::invalid_argument("cavity and qubit frequencies must be positive");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("normalized coupling eta must be finite and >= 0");
  }
}

Operator gauge_unitary(const HilbertSpace& space, const ModelParams& params) {
  params.validate();
  const Operator a = annihilation(space);
  const Operator generator = params.eta * (a + a.adjoint()) * pauli(space, PauliAxis::x);
  return hermitian_function(generator, [](double w) { return std::exp(cplx(0.0, w)); });
}

Operator hamiltonian_coulomb(const HilbertSpace& space, const ModelParams& params) {
  params.validate();
  const Operator a = annihilation(space);
  const Operator x = a + a.adjoint();
  const double k = 2.0 * params.eta;
  const Operator cos_x = hermitian_function(x, [k](double w) { return cplx(std::cos(k * w)); });
  const Operator sin_x = hermitian_function(x, [k](double w) { return cplx(std::sin(k * w)); });
  Operator h = params.omega_c * a.adjoint() * a +
               0.5 * params.omega_q *
                   (pauli(space, PauliAxis::z) * cos_x + pauli(space, PauliAxis::y) * sin_x);
  // the Pauli factors commute with functions of x; symmetrize away round-off
  return 0.5 * (h + h.adjoint());
}

Operator hamiltonian_dipole(const HilbertSpace& space, const ModelParams& params) {
  params.validate();
  const Operator a = annihilation(space);
  const cplx I(0.0, 1.0);
  const double g = params.coupling();
  return params.omega_c * a.adjoint() * a + 0.5 * params.omega_q * pauli(space, PauliAxis::z) -
         I * g * (a - a.adjoint()) * pauli(space, PauliAxis::x) +
         params.omega_c * params.eta * params.eta * identity(space);
}

Operator hamiltonian(const HilbertSpace& space, const ModelParams& params, Gauge gauge) {
  return gauge == Gauge::coulomb ? hamiltonian_coulomb(space, params)
                                 : hamiltonian_dipole(space, params);
}

Operator hamiltonian_jc(const HilbertSpace& space, const ModelParams& params) {
  params.validate();
  const Operator a = annihilation(space);
  const double lambda = params.jc_coupling_scale * params.coupling();
  return params.omega_c * a.adjoint() * a + 0.5 * params.omega_q * pauli(space, PauliAxis::z) +
         lambda * (a * pauli(space, PauliAxis::raising) +
                   a.adjoint() * pauli(space, PauliAxis::lowering));
}

Operator dressed_photon_operator(const HilbertSpace& space, const ModelParams& params) {
  params.validate();
  return annihilation(space) + cplx(0.0, params.eta) * pauli(space, PauliAxis::x);
}

}  // namespace qrm
