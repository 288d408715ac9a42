#include "qrm/dressed.hpp"

#include "qrm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qrm {

namespace {

constexpr double kDegeneracyTol = 1e-10;

struct Level {
  double energy;
  int parity;
  int rank;
  Vector state;
};

// Columns of `vecs` with (numerically) equal eigenvalues are rotated to
// eigenvectors of the photon number, which makes degenerate bare states
// come out as product states.
void split_degenerate_clusters(const Eigen::VectorXd& vals, Operator& vecs,
                               const Eigen::VectorXd& photons) {
  const Eigen::Index m = vals.size();
  Eigen::Index start = 0;
  while (start < m) {
    Eigen::Index end = start + 1;
    while (end < m &&
           vals(end) - vals(end - 1) < kDegeneracyTol * std::max(1.0, std::abs(vals(end)))) {
      ++end;
    }
    const Eigen::Index width = end - start;
    if (width > 1) {
      Operator block = vecs.middleCols(start, width);
      Operator n_proj = block.adjoint() * photons.asDiagonal() * block;
      Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (n_proj + n_proj.adjoint()));
      vecs.middleCols(start, width) = block * es.eigenvectors();
    }
    start = end;
  }
}

void fix_phase(Vector& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx c = v(imax);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
  v(imax) = cplx(v(imax).real(), 0.0);
}

}  // namespace

std::string StateLabel::str() const {
  if (branch == 0) return std::to_string(n);
  return std::to_string(n) + (branch < 0 ? "-" : "+");
}

int EigenSystem::find(const StateLabel& label) const {
  for (int i = 0; i < size(); ++i) {
    if (i < static_cast<int>(labels.size()) && labels[i] == label) return i;
  }
  return -1;
}

int EigenSystem::require(const StateLabel& label) const {
  const int i = find(label);
  if (i < 0) throw LabelingError("level " + label.str() + " is not among the retained levels");
  return i;
}

EigenSystem diagonalize(const HilbertSpace& space, const Operator& hamiltonian, int M) {
  const int dim = space.dim();
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) {
    throw std::invalid_argument("diagonalize: Hamiltonian dimension does not match the space");
  }
  if (M < 1 || M > dim) {
    throw std::invalid_argument("diagonalize: need 1 <= M <= dim, got M = " + std::to_string(M));
  }
  const double scale = std::max(1.0, max_abs(hamiltonian));
  if (hermiticity_defect(hamiltonian) > 1e-10 * scale) {
    throw std::invalid_argument("diagonalize: Hamiltonian is not Hermitian");
  }

  std::vector<int> sector[2];  // [0]: parity -1, [1]: parity +1
  for (int i = 0; i < dim; ++i) sector[space.parity_of(i) > 0 ? 1 : 0].push_back(i);

  // Parity must be conserved: no matrix element may connect the two sectors.
  double leak = 0.0;
  for (int i : sector[0]) {
    for (int j : sector[1]) leak = std::max(leak, std::abs(hamiltonian(i, j)));
  }
  if (leak > 1e-12 * scale) {
    throw std::invalid_argument("diagonalize: Hamiltonian does not commute with parity");
  }

  std::vector<Level> levels;
  levels.reserve(dim);
  for (int p = 0; p < 2; ++p) {
    const auto& idx = sector[p];
    const auto n = static_cast<Eigen::Index>(idx.size());
    Operator block(n, n);
    Eigen::VectorXd photons(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      photons(r) = space.state(idx[r]).second;
      for (Eigen::Index c = 0; c < n; ++c) block(r, c) = hamiltonian(idx[r], idx[c]);
    }
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (block + block.adjoint()));
    if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
    Operator vecs = es.eigenvectors();
    split_degenerate_clusters(es.eigenvalues(), vecs, photons);
    for (Eigen::Index k = 0; k < n; ++k) {
      Vector full = Vector::Zero(dim);
      for (Eigen::Index r = 0; r < n; ++r) full(idx[r]) = vecs(r, k);
      levels.push_back({es.eigenvalues()(k), p == 1 ? 1 : -1, static_cast<int>(k), std::move(full)});
    }
  }

  // Stable merge by energy; exact ties put the parity -1 sector first.
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.parity < b.parity;
  });

  EigenSystem eig;
  eig.energies.resize(M);
  eig.states.resize(dim, M);
  eig.parities.resize(M);
  eig.sector_rank.resize(M);
  for (int k = 0; k < M; ++k) {
    Vector v = levels[k].state;
    fix_phase(v);
    eig.energies(k) = levels[k].energy;
    eig.states.col(k) = v;
    eig.parities[k] = levels[k].parity;
    eig.sector_rank[k] = levels[k].rank;
  }
  return label_states(std::move(eig));
}

EigenSystem label_states(EigenSystem eig) {
  const int m = eig.size();
  if (m == 0) throw LabelingError("no levels to label");
  if (static_cast<int>(eig.parities.size()) != m || static_cast<int>(eig.sector_rank.size()) != m) {
    throw LabelingError("parities/sector ranks are not assigned for every level");
  }
  const int ground_parity = eig.parities[0];
  if (eig.sector_rank[0] != 0) throw LabelingError("ground level is not the lowest of its sector");

  // Retained levels of each sector must be its lowest ones, without gaps.
  int count[2] = {0, 0};
  for (int k = 0; k < m; ++k) {
    if (eig.parities[k] != 1 && eig.parities[k] != -1) {
      throw LabelingError("parity label must be +-1");
    }
    const int s = eig.parities[k] == ground_parity ? 0 : 1;
    if (eig.sector_rank[k] != count[s]) {
      throw LabelingError("inconsistent parity sector counts while labeling");
    }
    ++count[s];
  }

  eig.labels.resize(m);
  for (int k = 0; k < m; ++k) {
    const int r = eig.sector_rank[k];
    if (eig.parities[k] == ground_parity) {
      if (r == 0) {
        eig.labels[k] = StateLabel::ground();
      } else {
        const int n = 2 * ((r + 1) / 2);
        eig.labels[k] = {n, r % 2 == 1 ? -1 : +1};
      }
    } else {
      const int n = 2 * (r / 2) + 1;
      eig.labels[k] = {n, r % 2 == 0 ? -1 : +1};
    }
  }
  return eig;
}

TransitionTable transition_table(const EigenSystem& eig, const HilbertSpace& space,
                                 const ModelParams& params, Gauge gauge) {
  if (eig.states.rows() != space.dim()) {
    throw std::invalid_argument("transition_table: eigenstates do not belong to this space");
  }
  const Operator a = annihilation(space);
  const Operator sx = pauli(space, PauliAxis::x);
  const Operator photon = gauge == Gauge::dipole ? dressed_photon_operator(space, params) : a;
  const Operator& V = eig.states;

  TransitionTable t;
  t.gauge = gauge;
  const int m = eig.size();
  t.omega.resize(m, m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) t.omega(k, j) = eig.energies(k) - eig.energies(j);
  }
  t.x = V.adjoint() * (photon + photon.adjoint()) * V;
  t.v = V.adjoint() * (photon - photon.adjoint()) * V;
  t.s = V.adjoint() * sx * V;
  t.v_bare = gauge == Gauge::dipole ? Operator(V.adjoint() * (a - a.adjoint()) * V) : t.v;
  return t;
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::cavity: return "cavity";
    case Channel::qubit: return "qubit";
    case Channel::cavity_wrong: return "cavity_wrong";
  }
  return "?";
}

Channel channel_from_string(std::string_view s) {
  if (s == "cavity") return Channel::cavity;
  if (s == "qubit") return Channel::qubit;
  if (s == "cavity_wrong") return Channel::cavity_wrong;
  throw std::invalid_argument("unknown detection channel '" + std::string(s) + "'");
}

Operator field_operator_plus(const TransitionTable& table, const FieldOperatorSpec& spec) {
  if (!(spec.omega_ref > 0.0)) throw std::invalid_argument("omega_ref must be positive");
  const int m = table.size();
  const cplx I(0.0, 1.0);
  Operator op = Operator::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < k; ++j) {
      const double w = table.omega(k, j);
      switch (spec.channel) {
        case Channel::cavity:
        case Channel::qubit: {
          const cplx c = spec.channel == Channel::cavity ? table.x(j, k) : table.s(j, k);
          const double alpha = spec.weighting == Weighting::linear ? w / spec.omega_ref : 1.0;
          op(j, k) = I * alpha * c;
          break;
        }
        case Channel::cavity_wrong: {
          // v_bare already carries the omega_kj / omega_ref factor of the linear form
          if (spec.weighting == Weighting::linear) {
            op(j, k) = I * table.v_bare(j, k);
          } else if (w > 1e-14 * spec.omega_ref) {
            op(j, k) = I * table.v_bare(j, k) * (spec.omega_ref / w);
          }
          break;
        }
      }
    }
  }
  return op;
}

Operator wrong_field_operator_plus(const HilbertSpace& space, const EigenSystem& eig_dipole,
                                   const FieldOperatorSpec& spec) {
  TransitionTable t;
  t.gauge = Gauge::dipole;
  const int m = eig_dipole.size();
  t.omega.resize(m, m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) t.omega(k, j) = eig_dipole.energies(k) - eig_dipole.energies(j);
  }
  const Operator a = annihilation(space);
  t.v_bare = eig_dipole.states.adjoint() * (a - a.adjoint()) * eig_dipole.states;
  FieldOperatorSpec s = spec;
  s.channel = Channel::cavity_wrong;
  return field_operator_plus(t, s);
}

}  // namespace qrm
