#include "qrm/dynamics.hpp"

#include "qrm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qrm {

namespace {

using LongCplx = std::complex<long double>;

// b - A x accumulated in long double.
Vector residual(const Operator& A, const Vector& x, const Vector& b) {
  const Eigen::Index n = A.rows();
  Vector r(n);
  std::vector<LongCplx> acc(n);
  for (Eigen::Index i = 0; i < n; ++i) acc[i] = LongCplx(b(i).real(), b(i).imag());
  for (Eigen::Index j = 0; j < n; ++j) {
    const LongCplx xj(x(j).real(), x(j).imag());
    if (xj == LongCplx(0)) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx a = A(i, j);
      acc[i] -= LongCplx(a.real(), a.imag()) * xj;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i) = cplx(static_cast<double>(acc[i].real()), static_cast<double>(acc[i].imag()));
  }
  return r;
}

void check_gap(const Superoperator& L, double ratio) {
  Eigen::ComplexEigenSolver<Operator> es(L.matrix, false);
  std::vector<double> re;
  re.reserve(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) re.push_back(std::abs(es.eigenvalues()(i).real()));
  std::sort(re.begin(), re.end());
  if (re.size() >= 2 && !(re[1] > ratio * re[0])) {
    std::ostringstream os;
    os << "Liouvillian null space is not isolated: |Re l| = " << re[0] << ", next " << re[1];
    throw NonUniqueSteadyState(os.str());
  }
}

}  // namespace

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void DensityMatrix::check(double positivity_tol) const {
  if (hermiticity_defect(rho) > 1e-10) throw DensityMatrixDiagnostic("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-10) throw DensityMatrixDiagnostic("density matrix trace differs from 1");
  const double lmin = min_eigenvalue();
  if (lmin < -positivity_tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << lmin;
    throw DensityMatrixDiagnostic(os.str());
  }
}

DensityMatrix steady_state(const Superoperator& L, const SteadyStateOptions& opts) {
  const int m = L.M;
  const Eigen::Index n = static_cast<Eigen::Index>(m) * m;
  if (L.matrix.rows() != n || L.matrix.cols() != n) throw std::invalid_argument("steady_state: bad superoperator");
  if (opts.check_gap) check_gap(L, opts.gap_ratio);

  // rho = |0><0| + d with Tr d = 0 and L d = -L|0><0|
  Operator A = L.matrix;
  Vector b = -L.matrix.col(0);
  A.row(0).setZero();
  for (int i = 0; i < m; ++i) A(0, static_cast<Eigen::Index>(i) * m + i) = 1.0;
  b(0) = 0.0;

  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = A.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      A.row(i) /= s;
      b(i) /= s;
    }
  }
  Eigen::PartialPivLU<Operator> lu(A);
  // rcond() comes back as 1 for an exactly zero pivot, so look at the pivots too
  const Eigen::VectorXd piv = lu.matrixLU().diagonal().cwiseAbs();
  const double rc = std::min(lu.rcond(), piv.minCoeff() / piv.maxCoeff());
  if (!(rc > opts.rcond_floor)) {
    std::ostringstream os;
    os << "steady state is not unique (rcond " << rc << ")";
    throw NonUniqueSteadyState(os.str());
  }
  Vector d = lu.solve(b);
  for (int it = 0; it < opts.refinement_steps; ++it) d += lu.solve(residual(A, d, b));

  DensityMatrix out;
  out.rho = unvec(d, m);
  out.rho(0, 0) += 1.0;
  out.rho = 0.5 * (out.rho + out.rho.adjoint());
  out.check();
  return out;
}

double emission_rate(const DensityMatrix& rho, const Operator& o_plus) {
  if (o_plus.rows() != rho.M()) throw std::invalid_argument("emission_rate: dimension mismatch");
  return (o_plus.adjoint() * o_plus * rho.rho).trace().real();
}

double two_level_ratio(const EigenSystem& eig, const TransitionTable& table, const ModelParams& params) {
  if (eig.size() < 2) throw std::invalid_argument("two_level_ratio: need at least two levels");
  const int g = eig.require(StateLabel::ground());
  const int e = eig.require(StateLabel::minus(1));
  const double s2 = std::norm(table.s(g, e));
  if (std::sqrt(s2) < 1e-14) throw NormalizationError("two-level ratio undefined: qubit element vanishes");
  const double r = params.omega_q / params.omega_c;
  return r * r * std::norm(table.x(g, e)) / s2;
}

double SpectrumResult::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void SpectrumResult::normalize_max() {
  const double peak = max_value();
  if (peak > 0.0) {
    for (double& v : values) v /= peak;
  }
  normalization = Normalization::max1;
}

ResolventSolver::ResolventSolver(const Superoperator& L) {
  Eigen::HessenbergDecomposition<Operator> hd(L.matrix);
  Ht_ = hd.matrixH().transpose();
  Q_ = hd.matrixQ();
  scale_ = std::max(1.0, Ht_.cwiseAbs().maxCoeff());
}

void ResolventSolver::set_vectors(const Vector& w, const Vector& b) {
  if (w.size() != Ht_.rows() || b.size() != Ht_.rows()) throw std::invalid_argument("resolvent: size mismatch");
  u_ = Q_.transpose() * w;
  c_ = Q_.adjoint() * b;
}

cplx ResolventSolver::evaluate(double omega) const {
  const Eigen::Index n = Ht_.rows();
  const cplx iw(0.0, omega);
  const double tiny = 1e-15 * (scale_ + std::abs(omega));
  // Gaussian elimination with adjacent-row pivoting on K = i omega - H, which
  // is upper Hessenberg. Row r of K is column r of -Ht_ plus i omega on the
  // diagonal; eliminated rows of U are stored as columns of Ut.
  Operator Ut(n, n);
  Vector cur = -Ht_.col(0);
  cur(0) += iw;
  Vector next(n);
  cplx ycur = c_(0);
  Vector y(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index len = n - k;
    next.tail(len) = -Ht_.col(k + 1).tail(len);
    next(k + 1) += iw;
    cplx ynext = c_(k + 1);
    if (std::abs(next(k)) > std::abs(cur(k))) {
      cur.tail(len).swap(next.tail(len));
      std::swap(ycur, ynext);
    }
    const cplx piv = cur(k);
    if (std::abs(piv) < tiny) throw SolverError("singular resolvent", omega);
    Ut.col(k).tail(len) = cur.tail(len);
    y(k) = ycur;
    const cplx l = next(k) / piv;
    cur.tail(len - 1) = next.tail(len - 1) - l * cur.tail(len - 1);
    ycur = ynext - l * ycur;
  }
  if (std::abs(cur(n - 1)) < tiny) throw SolverError("singular resolvent", omega);
  Ut(n - 1, n - 1) = cur(n - 1);
  y(n - 1) = ycur;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    cplx acc = y(k);
    if (k + 1 < n) acc -= Ut.col(k).tail(n - k - 1).cwiseProduct(y.tail(n - k - 1)).sum();
    y(k) = acc / Ut(k, k);
  }
  return u_.cwiseProduct(y).sum();
}

SpectrumResult emission_spectrum(const Superoperator& L, const DensityMatrix& rho_ss,
                                 const Operator& o_minus, const Operator& o_plus,
                                 double omega_ref, const std::vector<double>& grid,
                                 SpectrumForm form, Channel channel) {
  if (!(omega_ref > 0.0)) throw std::invalid_argument("omega_ref must be positive");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("spectrum grid must be strictly positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("spectrum grid must be ascending");
  }
  ResolventSolver solver(L);
  solver.set_vectors(vec(Operator(o_minus.transpose())), vec(Operator(o_plus * rho_ss.rho)));
  SpectrumResult out;
  out.channel = channel;
  out.omegas = grid;
  out.values.reserve(grid.size());
  for (double w : grid) {
    const double pref = form == SpectrumForm::replaced ? (w * w) / (omega_ref * omega_ref) : 1.0;
    out.values.push_back(pref * solver.evaluate(w).real());
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1 || !(hi >= lo)) throw std::invalid_argument("linear_grid: bad range");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> g(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < points; ++i) g[i] = points == 1 ? lo : std::pow(10.0, a + (b - a) * i / (points - 1));
  return g;
}

std::vector<SpectrumResult> normalize_rows(std::vector<SpectrumResult> rows) {
  for (auto& r : rows) r.normalize_max();
  return rows;
}

}  // namespace qrm
