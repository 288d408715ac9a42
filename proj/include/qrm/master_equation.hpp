#pragma once

#include "qrm/dressed.hpp"

namespace qrm {

// Reservoir parameters: bare loss rates and effective temperatures
// T_c = k_B T / omega_c, T_q = k_B T / omega_q.
struct BathSpec {
  double kappa = 1e-3;
  double gamma = 1e-4;
  double T_c = 0.0;
  double T_q = 0.05;

  void validate() const;
};

// 1 / (exp[omega / (omega_ref T)] - 1), zero at T = 0.
double thermal_occupation(double omega, double omega_ref, double T);

// rate * (omega/omega_ref) * n(omega), finite as omega -> 0 (limit rate * T).
double ohmic_rate_times_occupation(double rate, double omega, double omega_ref, double T);

// Per-transition rates, indexed (k, j) with k > j; other entries are zero.
struct RateTable {
  Eigen::MatrixXd Gamma_c;
  Eigen::MatrixXd Gamma_q;
  Eigen::MatrixXd n_c;
  Eigen::MatrixXd n_q;
  Eigen::MatrixXd Gn_c;  // Gamma_c * n_c evaluated jointly
  Eigen::MatrixXd Gn_q;

  int size() const noexcept { return static_cast<int>(Gamma_c.rows()); }
};

RateTable decay_rates(const TransitionTable& table, const BathSpec& bath, const ModelParams& params);

// Generator on column-stacked M x M density matrices, vec(A X B) = (B^T kron A) vec(X).
struct Superoperator {
  int M = 0;
  Operator matrix;

  Operator apply(const Operator& rho) const;
};

Vector vec(const Operator& m);
Operator unvec(const Vector& v, int M);
Operator spre(const Operator& a);
Operator spost(const Operator& b);
// X -> A X B
Operator sandwich(const Operator& a, const Operator& b);

// -i[H, .]
Superoperator hamiltonian_superoperator(const Operator& h);

// D[O] X = (2 O X O^dag - X O^dag O - O^dag O X) / 2
Superoperator dissipator_generic(const Operator& op);

// Full non-secular dressed-basis generator over the levels in `table`:
// -i[diag(omega_j), rho] plus, for each bath, the double sum over transition
// pairs with absorption and emission terms. `rates` must come from `table`.
Superoperator liouvillian_gme(const EigenSystem& eig, const TransitionTable& table,
                              const RateTable& rates);

// Secular version: sum_{k>j} Gamma (n+1) D[|j><k|] + Gamma n D[|k><j|].
Superoperator liouvillian_dressed_rwa(const EigenSystem& eig, const RateTable& rates);

// Bare-basis generator -i[H, .] + kappa(1+n_c)D[a] + kappa n_c D[a^dag]
// + gamma(1+n_q)D[sigma_-] + gamma n_q D[sigma_+], occupations at omega_c, omega_q.
// H is normally the JC Hamiltonian; any bare-space Hamiltonian is accepted.
Superoperator liouvillian_standard(const HilbertSpace& space, const Operator& h,
                                   const BathSpec& bath, const ModelParams& params);

// Expresses a dressed-basis generator in the bare basis via the eigenvector
// matrix V (dim x M, M = dim required): L_bare = S L S^dag, S = conj(V) kron V.
Superoperator to_bare_basis(const Superoperator& dressed, const Operator& states);

}  // namespace qrm
