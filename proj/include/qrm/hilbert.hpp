#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

namespace qrm {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Qubit : int { g = 0, e = 1 };

// Truncated qubit ⊗ Fock space. Basis ordering is qubit-major:
// index = q * (n_max + 1) + n, with q = 0 for |g>, 1 for |e>.
class HilbertSpace {
 public:
  explicit HilbertSpace(int n_max);

  int n_max() const noexcept { return n_max_; }
  int fock_dim() const noexcept { return n_max_ + 1; }
  int dim() const noexcept { return 2 * (n_max_ + 1); }

  int index(Qubit q, int n) const;
  std::pair<Qubit, int> state(int index) const;

  // Parity eigenvalue of each basis state, sigma_z * (-1)^n.
  int parity_of(int index) const;

  bool operator==(const HilbertSpace& other) const noexcept {
    return n_max_ == other.n_max_;
  }

 private:
  int n_max_;
};

HilbertSpace build_space(int n_max);

enum class PauliAxis { x, y, z, raising, lowering };

Operator identity(const HilbertSpace& space);
Operator annihilation(const HilbertSpace& space);
Operator creation(const HilbertSpace& space);
Operator number(const HilbertSpace& space);
// sigma_z|e> = +|e>, sigma_+ = |e><g|.
Operator pauli(const HilbertSpace& space, PauliAxis axis);
Operator parity_operator(const HilbertSpace& space);

// Max entry of |O - O^dagger|.
double hermiticity_defect(const Operator& op);
double max_abs(const Operator& op);
Operator commutator(const Operator& a, const Operator& b);

// f(A) for Hermitian A through its eigendecomposition.
template <typename F>
Operator hermitian_function(const Operator& a, F&& f) {
  Eigen::SelfAdjointEigenSolver<Operator> es(a);
  Eigen::VectorXcd fd(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fd.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qrm
