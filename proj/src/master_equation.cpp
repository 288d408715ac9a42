#include "qrm/master_equation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qrm {

namespace {

// Matrix elements below this are treated as exact zeros (parity-forbidden
// elements come out at round-off level).
constexpr double kElementCutoff = 1e-13;

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Lowering operators of one bath: A = sum_tau c_tau |j><k| together with the
// rate-weighted sums B_n = sum gt n A_tau and B_n1 = sum gt (n+1) A_tau, where
// gt = Gamma / |c|^2 is the spectral factor of the transition.
struct BathOperators {
  Operator A;
  Operator Bn;
  Operator Bn1;
};

BathOperators bath_operators(const Operator& elements, const Eigen::MatrixXd& gamma,
                             const Eigen::MatrixXd& gamma_n) {
  const Eigen::Index m = elements.rows();
  BathOperators ops{Operator::Zero(m, m), Operator::Zero(m, m), Operator::Zero(m, m)};
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const cplx c = elements(j, k);
      const double c2 = std::norm(c);
      if (std::abs(c) < kElementCutoff) continue;
      ops.A(j, k) = c;
      ops.Bn(j, k) = c * (gamma_n(k, j) / c2);
      ops.Bn1(j, k) = c * ((gamma(k, j) + gamma_n(k, j)) / c2);
    }
  }
  return ops;
}

void add_gme_bath(Operator& L, const BathOperators& b) {
  const Eigen::Index m = b.A.rows();
  const Operator I = Operator::Identity(m, m);
  const Operator Ad = b.A.adjoint();
  const Operator Bnd = b.Bn.adjoint();
  const Operator Bn1d = b.Bn1.adjoint();
  // absorption: B_n^dag rho A - A B_n^dag rho + A^dag rho B_n - rho B_n A^dag
  L += 0.5 * (kron(b.A.transpose(), Bnd) - kron(I, b.A * Bnd) +
              kron(b.Bn.transpose(), Ad) - kron((b.Bn * Ad).transpose(), I));
  // emission: A rho B_n1^dag - rho B_n1^dag A + B_n1 rho A^dag - A^dag B_n1 rho
  L += 0.5 * (kron(Bn1d.transpose(), b.A) - kron((Bn1d * b.A).transpose(), I) +
              kron(Ad.transpose(), b.Bn1) - kron(I, Ad * b.Bn1));
}

void check_sizes(const EigenSystem& eig, const RateTable& rates) {
  if (rates.size() != eig.size()) {
    throw std::invalid_argument("rate table has " + std::to_string(rates.size()) +
                                " levels, eigensystem has " + std::to_string(eig.size()));
  }
}

}  // namespace

void BathSpec::validate() const {
  if (!(kappa > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("kappa and gamma must be positive");
  if (!(T_c >= 0.0) || !(T_q >= 0.0)) throw std::invalid_argument("temperatures must be >= 0");
}

double thermal_occupation(double omega, double omega_ref, double T) {
  if (!(omega > 0.0)) throw std::invalid_argument("thermal_occupation: omega must be positive");
  if (!(omega_ref > 0.0) || !(T >= 0.0)) throw std::invalid_argument("thermal_occupation: bad reference");
  if (T == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / (omega_ref * T));
}

double ohmic_rate_times_occupation(double rate, double omega, double omega_ref, double T) {
  if (T == 0.0 || rate == 0.0) return 0.0;
  if (omega < 0.0) throw std::invalid_argument("ohmic_rate_times_occupation: negative omega");
  const double x = omega / (omega_ref * T);
  if (omega / omega_ref < 1e-8) return rate * T * (1.0 - x / 2.0 + x * x / 12.0);
  return rate * T * (x / std::expm1(x));
}

RateTable decay_rates(const TransitionTable& table, const BathSpec& bath, const ModelParams& params) {
  bath.validate();
  params.validate();
  const int m = table.size();
  RateTable r;
  r.Gamma_c = Eigen::MatrixXd::Zero(m, m);
  r.Gamma_q = Eigen::MatrixXd::Zero(m, m);
  r.n_c = Eigen::MatrixXd::Zero(m, m);
  r.n_q = Eigen::MatrixXd::Zero(m, m);
  r.Gn_c = Eigen::MatrixXd::Zero(m, m);
  r.Gn_q = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < k; ++j) {
      const double w = std::max(table.omega(k, j), 0.0);
      const double x2 = std::abs(table.x(j, k)) < kElementCutoff ? 0.0 : std::norm(table.x(j, k));
      const double s2 = std::abs(table.s(j, k)) < kElementCutoff ? 0.0 : std::norm(table.s(j, k));
      r.Gamma_c(k, j) = bath.kappa * (w / params.omega_c) * x2;
      r.Gamma_q(k, j) = bath.gamma * (w / params.omega_q) * s2;
      if (w > 0.0) {
        r.n_c(k, j) = thermal_occupation(w, params.omega_c, bath.T_c);
        r.n_q(k, j) = thermal_occupation(w, params.omega_q, bath.T_q);
      }
      r.Gn_c(k, j) = ohmic_rate_times_occupation(bath.kappa * x2, w, params.omega_c, bath.T_c);
      r.Gn_q(k, j) = ohmic_rate_times_occupation(bath.gamma * s2, w, params.omega_q, bath.T_q);
    }
  }
  return r;
}

Operator Superoperator::apply(const Operator& rho) const {
  return unvec(matrix * vec(rho), M);
}

Vector vec(const Operator& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Operator unvec(const Vector& v, int M) {
  if (v.size() != static_cast<Eigen::Index>(M) * M) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Operator>(v.data(), M, M);
}

Operator spre(const Operator& a) { return kron(Operator::Identity(a.rows(), a.rows()), a); }

Operator spost(const Operator& b) { return kron(b.transpose(), Operator::Identity(b.rows(), b.rows())); }

Operator sandwich(const Operator& a, const Operator& b) { return kron(b.transpose(), a); }

Superoperator hamiltonian_superoperator(const Operator& h) {
  const cplx I(0.0, 1.0);
  return {static_cast<int>(h.rows()), -I * (spre(h) - spost(h))};
}

Superoperator dissipator_generic(const Operator& op) {
  const Operator od = op.adjoint();
  const Operator odo = od * op;
  return {static_cast<int>(op.rows()),
          sandwich(op, od) - 0.5 * spost(odo) - 0.5 * spre(odo)};
}

Superoperator liouvillian_gme(const EigenSystem& eig, const TransitionTable& table,
                              const RateTable& rates) {
  check_sizes(eig, rates);
  if (table.size() != eig.size()) throw std::invalid_argument("transition table size mismatch");
  const int m = eig.size();
  Eigen::VectorXd w = eig.energies.array() - eig.energies(0);
  Superoperator L = hamiltonian_superoperator(Operator(w.cast<cplx>().asDiagonal()));
  add_gme_bath(L.matrix, bath_operators(table.x, rates.Gamma_c, rates.Gn_c));
  add_gme_bath(L.matrix, bath_operators(table.s, rates.Gamma_q, rates.Gn_q));
  L.M = m;
  return L;
}

Superoperator liouvillian_dressed_rwa(const EigenSystem& eig, const RateTable& rates) {
  check_sizes(eig, rates);
  const int m = eig.size();
  Eigen::VectorXd w = eig.energies.array() - eig.energies(0);
  Superoperator L = hamiltonian_superoperator(Operator(w.cast<cplx>().asDiagonal()));
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < k; ++j) {
      const double down = rates.Gamma_c(k, j) + rates.Gn_c(k, j) + rates.Gamma_q(k, j) + rates.Gn_q(k, j);
      const double up = rates.Gn_c(k, j) + rates.Gn_q(k, j);
      if (down == 0.0 && up == 0.0) continue;
      Operator p = Operator::Zero(m, m);
      p(j, k) = 1.0;
      if (down != 0.0) L.matrix += down * dissipator_generic(p).matrix;
      if (up != 0.0) L.matrix += up * dissipator_generic(p.adjoint()).matrix;
    }
  }
  return L;
}

Superoperator liouvillian_standard(const HilbertSpace& space, const Operator& h,
                                   const BathSpec& bath, const ModelParams& params) {
  bath.validate();
  params.validate();
  if (h.rows() != space.dim()) throw std::invalid_argument("liouvillian_standard: dimension mismatch");
  const double n_c = thermal_occupation(params.omega_c, params.omega_c, bath.T_c);
  const double n_q = thermal_occupation(params.omega_q, params.omega_q, bath.T_q);
  const Operator a = annihilation(space);
  const Operator sm = pauli(space, PauliAxis::lowering);
  Superoperator L = hamiltonian_superoperator(h);
  L.matrix += bath.kappa * (1.0 + n_c) * dissipator_generic(a).matrix;
  L.matrix += bath.gamma * (1.0 + n_q) * dissipator_generic(sm).matrix;
  if (n_c > 0.0) L.matrix += bath.kappa * n_c * dissipator_generic(a.adjoint()).matrix;
  if (n_q > 0.0) L.matrix += bath.gamma * n_q * dissipator_generic(sm.adjoint()).matrix;
  return L;
}

Superoperator to_bare_basis(const Superoperator& dressed, const Operator& states) {
  if (states.rows() != states.cols() || states.cols() != dressed.M) {
    throw std::invalid_argument("to_bare_basis: need a complete square eigenvector matrix");
  }
  const Operator S = kron(states.conjugate(), states);
  return {dressed.M, S * dressed.matrix * S.adjoint()};
}

}  // namespace qrm
