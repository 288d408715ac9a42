#pragma once

#include "qrm/hilbert.hpp"
#include "qrm/models.hpp"

#include <string>
#include <vector>

namespace qrm {

// Tilde label of a dressed level: (0) for the ground state, (n, -/+) otherwise.
struct StateLabel {
  int n = 0;
  int branch = 0;  // -1, +1; 0 only for the ground state

  std::string str() const;
  bool operator==(const StateLabel&) const = default;

  static StateLabel ground() { return {0, 0}; }
  static StateLabel minus(int n) { return {n, -1}; }
  static StateLabel plus(int n) { return {n, +1}; }
};

// Lowest M levels of a parity-conserving Hamiltonian.
struct EigenSystem {
  Eigen::VectorXd energies;     // ascending, energies(0) is the ground level
  Operator states;              // dim x M, orthonormal columns
  std::vector<int> parities;    // +-1 per level
  std::vector<int> sector_rank; // energy rank inside the level's parity sector
  std::vector<StateLabel> labels;

  int size() const noexcept { return static_cast<int>(energies.size()); }
  // Index of the level carrying `label`, or -1 when it is not retained.
  int find(const StateLabel& label) const;
  int require(const StateLabel& label) const;
};

// Diagonalizes H inside each parity sector so every returned state is an exact
// parity eigenvector, keeps the lowest M levels, fixes phases (largest
// component real positive) and assigns tilde labels.
EigenSystem diagonalize(const HilbertSpace& space, const Operator& hamiltonian, int M);

// Labels by energy order inside alternating parity sectors: the ground sector
// holds 0, 2-, 2+, 4-, ...; the other sector 1-, 1+, 3-, 3+, ...
EigenSystem label_states(EigenSystem eig);

// Matrix elements between retained dressed levels, x(j, k) = <j|(a + a^dag)|k>
// etc. In the dipole gauge the photon operators are the transformed ones, so
// x and v are built from a' = a + i eta sigma_x; v_bare always uses bare a.
struct TransitionTable {
  Gauge gauge = Gauge::coulomb;
  Eigen::MatrixXd omega;  // omega(k, j) = E_k - E_j
  Operator x;
  Operator s;
  Operator v;
  Operator v_bare;

  int size() const noexcept { return static_cast<int>(omega.rows()); }
};

TransitionTable transition_table(const EigenSystem& eig, const HilbertSpace& space,
                                 const ModelParams& params, Gauge gauge);

enum class Channel { cavity, qubit, cavity_wrong };
enum class Weighting { linear, flat };

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

struct FieldOperatorSpec {
  Channel channel = Channel::cavity;
  Weighting weighting = Weighting::linear;
  double omega_ref = 1.0;  // omega_c for the cavity, omega_q for the qubit
};

// Positive-frequency detection operator, i sum_{k>j} alpha(omega_kj) c_jk |j><k|,
// strictly upper-triangular as a matrix (it lowers energy).
Operator field_operator_plus(const TransitionTable& table, const FieldOperatorSpec& spec);

// Field operator built from the untransformed a in the dipole gauge:
// i sum_{k>j} <j'|(a - a^dag)|k'> |j'><k'|.
Operator wrong_field_operator_plus(const HilbertSpace& space, const EigenSystem& eig_dipole,
                                   const FieldOperatorSpec& spec);

}  // namespace qrm
