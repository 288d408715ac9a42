#include "qrm/errors.hpp"
#include "qrm/hilbert.hpp"

#include <doctest.h>

#include <cmath>

using namespace qrm;

namespace {

Vector ket(const HilbertSpace& s, Qubit q, int n) {
  Vector v = Vector::Zero(s.dim());
  v(s.index(q, n)) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("space dimension and ordering") {
  CHECK_THROWS_AS(build_space(0), InvalidTruncation);
  CHECK_THROWS_AS(build_space(-3), InvalidTruncation);
  CHECK(build_space(1).dim() == 4);
  CHECK(build_space(9).dim() == 20);

  const HilbertSpace s = build_space(5);
  for (int i = 0; i < s.dim(); ++i) {
    auto [q, n] = s.state(i);
    CHECK(s.index(q, n) == i);
    CHECK(i == static_cast<int>(q) * 6 + n);
  }
  CHECK_THROWS(s.state(s.dim()));
  CHECK_THROWS(s.index(Qubit::g, 6));
}

TEST_CASE("ladder operators") {
  const HilbertSpace s = build_space(6);
  const Operator a = annihilation(s);
  CHECK((a * ket(s, Qubit::g, 1) - ket(s, Qubit::g, 0)).norm() == doctest::Approx(0.0));
  CHECK((a * ket(s, Qubit::e, 0)).norm() == 0.0);
  CHECK(a(s.index(Qubit::g, 3), s.index(Qubit::g, 4)) == cplx(2.0));
  CHECK(max_abs(creation(s) - a.adjoint()) == 0.0);
  CHECK(max_abs(number(s) - a.adjoint() * a) < 1e-14);

  const Operator c = commutator(a, a.adjoint());
  for (auto q : {Qubit::g, Qubit::e}) {
    for (int n = 0; n < s.n_max(); ++n) CHECK(std::abs(c(s.index(q, n), s.index(q, n)) - 1.0) < 1e-14);
    // truncation edge
    CHECK(std::abs(c(s.index(q, 6), s.index(q, 6)) + 6.0) < 1e-14);
  }
}

TEST_CASE("pauli conventions") {
  const HilbertSpace s = build_space(3);
  const Operator sx = pauli(s, PauliAxis::x);
  const Operator sy = pauli(s, PauliAxis::y);
  const Operator sz = pauli(s, PauliAxis::z);
  const Operator sp = pauli(s, PauliAxis::raising);
  const Operator sm = pauli(s, PauliAxis::lowering);

  CHECK((sx * ket(s, Qubit::g, 0) - ket(s, Qubit::e, 0)).norm() == 0.0);
  for (int n = 0; n <= 3; ++n) {
    CHECK((sz * ket(s, Qubit::g, n) + ket(s, Qubit::g, n)).norm() == 0.0);
    CHECK((sz * ket(s, Qubit::e, n) - ket(s, Qubit::e, n)).norm() == 0.0);
  }
  CHECK((sp * ket(s, Qubit::g, 2) - ket(s, Qubit::e, 2)).norm() == 0.0);
  CHECK(max_abs(sp * sm + sm * sp - identity(s)) == 0.0);
  // sigma_x sigma_y = i sigma_z
  CHECK(max_abs(sx * sy - cplx(0, 1) * sz) < 1e-15);
  CHECK(max_abs(sp + sm - sx) == 0.0);
  for (auto ax : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
    CHECK(hermiticity_defect(pauli(s, ax)) == 0.0);
    CHECK(max_abs(commutator(annihilation(s), pauli(s, ax))) == 0.0);
  }
}

TEST_CASE("parity operator") {
  const HilbertSpace s = build_space(4);
  const Operator P = parity_operator(s);
  CHECK(max_abs(P * P - identity(s)) == 0.0);
  CHECK(P(s.index(Qubit::g, 0), s.index(Qubit::g, 0)) == cplx(-1.0));
  CHECK(P(s.index(Qubit::e, 0), s.index(Qubit::e, 0)) == cplx(1.0));
  CHECK(P(s.index(Qubit::g, 1), s.index(Qubit::g, 1)) == cplx(1.0));
  // independent construction: sigma_z * exp(i pi a^dag a)
  const Operator alt = pauli(s, PauliAxis::z) *
                       hermitian_function(number(s), [](double n) { return std::exp(cplx(0.0, M_PI * n)); });
  CHECK(max_abs(P - alt) < 1e-12);
}

TEST_CASE("hermitian matrix functions") {
  const HilbertSpace s = build_space(8);
  const Operator x = annihilation(s) + creation(s);
  const Operator c = hermitian_function(x, [](double w) { return cplx(std::cos(w)); });
  const Operator si = hermitian_function(x, [](double w) { return cplx(std::sin(w)); });
  CHECK(max_abs(c * c + si * si - identity(s)) < 1e-12);
}
