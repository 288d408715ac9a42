#include "qrm/dressed.hpp"
#include "qrm/models.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace qrm;

namespace {

Eigen::VectorXd spectrum(const Operator& h) {
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Series exp(A) for a small-norm matrix; used as an oracle independent of
// the eigendecomposition path.
Operator expm_series(const Operator& A) {
  Operator result = Operator::Identity(A.rows(), A.cols());
  Operator term = result;
  for (int k = 1; k < 80; ++k) {
    term = term * A / static_cast<double>(k);
    result += term;
  }
  return result;
}

}  // namespace

TEST_CASE("model parameters") {
  const ModelParams p = ModelParams::from_detuning(-0.3, 0.2, 1.0);
  CHECK(p.omega_c == doctest::Approx(0.7));
  CHECK(p.delta() == doctest::Approx(-0.3));
  CHECK(p.coupling() == doctest::Approx(0.14));
  ModelParams bad;
  bad.eta = -1;
  CHECK_THROWS(bad.validate());
  bad.eta = 0.1;
  bad.omega_c = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("gauge unitary") {
  const HilbertSpace s = build_space(30);
  ModelParams p;
  CHECK(max_abs(gauge_unitary(s, p) - identity(s)) < 1e-15);

  p.eta = 2.0;
  const Operator U = gauge_unitary(s, p);
  CHECK(max_abs(U * U.adjoint() - identity(s)) < 1e-12);

  p.eta = 0.1;
  const Operator Ux = gauge_unitary(s, p);
  const Operator gen = cplx(0.0, p.eta) * (annihilation(s) + creation(s)) * pauli(s, PauliAxis::x);
  CHECK(max_abs(Ux - expm_series(gen)) < 1e-10);
}

TEST_CASE("U^dag a U equals a + i eta sigma_x on low-lying states") {
  ModelParams p;
  p.eta = 0.7;
  double prev = 1.0;
  for (int n_max : {20, 40, 80}) {
    const HilbertSpace s = build_space(n_max);
    const Operator U = gauge_unitary(s, p);
    const Operator lhs = U.adjoint() * annihilation(s) * U;
    const Operator rhs = dressed_photon_operator(s, p);
    double err = 0.0;
    for (auto q : {Qubit::g, Qubit::e}) {
      for (auto r : {Qubit::g, Qubit::e}) {
        for (int n = 0; n < 6; ++n) {
          for (int m = 0; m < 6; ++m) {
            err = std::max(err, std::abs(lhs(s.index(q, n), s.index(r, m)) - rhs(s.index(q, n), s.index(r, m))));
          }
        }
      }
    }
    CHECK(err <= std::max(prev, 1e-13));
    prev = err;
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("coulomb hamiltonian") {
  const HilbertSpace s = build_space(40);
  ModelParams p = ModelParams::from_detuning(0.0, 0.0);
  Eigen::VectorXd e0 = spectrum(hamiltonian_coulomb(s, p));
  CHECK(e0(0) == doctest::Approx(-0.5));
  CHECK(e0(1) == doctest::Approx(0.5));
  CHECK(e0(2) == doctest::Approx(0.5));
  CHECK(e0(3) == doctest::Approx(1.5));

  p.eta = 0.8;
  const Operator H = hamiltonian_coulomb(s, p);
  CHECK(hermiticity_defect(H) < 1e-12);
  const Operator U = gauge_unitary(s, p);
  const Operator Hq = 0.5 * p.omega_q * pauli(s, PauliAxis::z);
  const Operator Hph = p.omega_c * number(s);
  CHECK(max_abs(H - (U * Hq * U.adjoint() + Hph)) < 1e-10);
  CHECK(max_abs(commutator(parity_operator(s), H)) < 1e-12);
  // bounded interaction
  Eigen::VectorXd bound = spectrum(H - Hph);
  CHECK(bound.cwiseAbs().maxCoeff() <= 0.5 * p.omega_q + 1e-12);
}

TEST_CASE("dipole hamiltonian") {
  const HilbertSpace s = build_space(60);
  ModelParams p = ModelParams::from_detuning(0.0, 0.5);
  const Operator H = hamiltonian_dipole(s, p);
  CHECK(std::abs(H(s.index(Qubit::g, 0), s.index(Qubit::g, 0)) - (-0.5 + 0.25)) < 1e-15);
  CHECK(max_abs(commutator(parity_operator(s), H)) < 1e-12);

  // cross-gauge oracle: lowest 10 levels
  Eigen::VectorXd ec = spectrum(hamiltonian_coulomb(s, p));
  Eigen::VectorXd ed = spectrum(H);
  for (int k = 0; k < 10; ++k) CHECK(std::abs(ec(k) - ed(k)) < 1e-8 * std::max(1.0, std::abs(ec(k))));

  // constant term removed, the remainder is linear in eta
  ModelParams p2 = p;
  p2.eta = 2 * p.eta;
  const Operator H0 = hamiltonian_dipole(s, ModelParams::from_detuning(0.0, 0.0));
  const Operator lin1 = H - H0 - p.omega_c * p.eta * p.eta * identity(s);
  const Operator lin2 = hamiltonian_dipole(s, p2) - H0 - p2.omega_c * p2.eta * p2.eta * identity(s);
  CHECK(max_abs(lin2 - 2.0 * lin1) < 1e-12);
}

TEST_CASE("gauge equivalence improves with truncation") {
  ModelParams p = ModelParams::from_detuning(0.0, 1.5);
  double prev = 1e9;
  for (int n_max : {20, 40, 80}) {
    const HilbertSpace s = build_space(n_max);
    Eigen::VectorXd ec = spectrum(hamiltonian_coulomb(s, p));
    Eigen::VectorXd ed = spectrum(hamiltonian_dipole(s, p));
    double d = 0;
    for (int k = 0; k < 10; ++k) d = std::max(d, std::abs(ec(k) - ed(k)));
    CHECK(d <= prev * 1.0000001);
    prev = d;
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("jaynes-cummings hamiltonian") {
  const HilbertSpace s = build_space(10);
  ModelParams p = ModelParams::from_detuning(0.0, 0.0);
  Eigen::VectorXd e0 = spectrum(hamiltonian_jc(s, p));
  CHECK(e0(0) == doctest::Approx(-0.5));

  p.eta = 0.04;
  const Operator H = hamiltonian_jc(s, p);
  const Operator Nexc = number(s) + pauli(s, PauliAxis::raising) * pauli(s, PauliAxis::lowering);
  CHECK(max_abs(commutator(H, Nexc)) < 1e-12);
  Eigen::VectorXd e = spectrum(H);
  // first doublet split by 2 * (eta omega_c / 2)
  CHECK(e(2) - e(1) == doctest::Approx(p.eta * p.omega_c).epsilon(1e-10));

  p.jc_coupling_scale = 1.0;
  Eigen::VectorXd e1 = spectrum(hamiltonian_jc(s, p));
  CHECK(e1(2) - e1(1) == doctest::Approx(2 * p.eta * p.omega_c).epsilon(1e-10));
}

TEST_CASE("dressed photon operator") {
  const HilbertSpace s = build_space(12);
  ModelParams p;
  CHECK(max_abs(dressed_photon_operator(s, p) - annihilation(s)) == 0.0);
  p.eta = 0.3;
  const Operator ap = dressed_photon_operator(s, p);
  const Operator a = annihilation(s);
  CHECK(max_abs(ap + ap.adjoint() - a - a.adjoint()) < 1e-15);
  CHECK(max_abs(ap - a - cplx(0.0, 0.3) * pauli(s, PauliAxis::x)) < 1e-15);
  const Operator c = commutator(ap, ap.adjoint());
  for (auto q : {Qubit::g, Qubit::e}) {
    for (int n = 0; n < s.n_max(); ++n) CHECK(std::abs(c(s.index(q, n), s.index(q, n)) - 1.0) < 1e-14);
  }
}
