#include "qrm/hilbert.hpp"

#include "qrm/errors.hpp"

#include <cmath>
#include <string>

namespace qrm {

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw InvalidTruncation("photon truncation n_max must be >= 1, got " +
                            std::to_string(n_max));
  }
}

int HilbertSpace::index(Qubit q, int n) const {
  if (n < 0 || n > n_max_) throw std::out_of_range("Fock index out of range");
  return static_cast<int>(q) * fock_dim() + n;
}

std::pair<Qubit, int> HilbertSpace::state(int index) const {
  if (index < 0 || index >= dim()) throw std::out_of_range("basis index out of range");
  return {index < fock_dim() ? Qubit::g : Qubit::e, index % fock_dim()};
}

int HilbertSpace::parity_of(int index) const {
  auto [q, n] = state(index);
  const int sz = q == Qubit::e ? 1 : -1;
  return (n % 2 == 0) ? sz : -sz;
}

HilbertSpace build_space(int n_max) { return HilbertSpace(n_max); }

Operator identity(const HilbertSpace& space) {
  return Operator::Identity(space.dim(), space.dim());
}

Operator annihilation(const HilbertSpace& space) {
  Operator a = Operator::Zero(space.dim(), space.dim());
  for (Qubit q : {Qubit::g, Qubit::e}) {
    for (int n = 1; n <= space.n_max(); ++n) {
      a(space.index(q, n - 1), space.index(q, n)) = std::sqrt(static_cast<double>(n));
    }
  }
  return a;
}

Operator creation(const HilbertSpace& space) { return annihilation(space).adjoint(); }

Operator number(const HilbertSpace& space) {
  Operator n = Operator::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) n(i, i) = space.state(i).second;
  return n;
}

Operator pauli(const HilbertSpace& space, PauliAxis axis) {
  const cplx I(0.0, 1.0);
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  // rows/cols: 0 = g, 1 = e
  switch (axis) {
    case PauliAxis::x: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case PauliAxis::y: s(0, 1) = I; s(1, 0) = -I; break;
    case PauliAxis::z: s(0, 0) = -1.0; s(1, 1) = 1.0; break;
    case PauliAxis::raising: s(1, 0) = 1.0; break;
    case PauliAxis::lowering: s(0, 1) = 1.0; break;
  }
  const int f = space.fock_dim();
  Operator out = Operator::Zero(space.dim(), space.dim());
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (s(r, c) == cplx(0.0)) continue;
      out.block(r * f, c * f, f, f) = s(r, c) * Operator::Identity(f, f);
    }
  }
  return out;
}

Operator parity_operator(const HilbertSpace& space) {
  Operator p = Operator::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) p(i, i) = space.parity_of(i);
  return p;
}

double hermiticity_defect(const Operator& op) {
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const Operator& op) { return op.size() == 0 ? 0.0 : op.cwiseAbs().maxCoeff(); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

}  // namespace qrm
