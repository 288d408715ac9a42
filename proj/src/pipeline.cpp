#include "qrm/pipeline.hpp"

#include "qrm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qrm {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::gme: return "gme";
    case Model::dressed_rwa: return "dressed_rwa";
    case Model::standard_jc: return "standard_jc";
  }
  return "?";
}

Model model_from_string(std::string_view s) {
  if (s == "gme") return Model::gme;
  if (s == "dressed_rwa") return Model::dressed_rwa;
  if (s == "standard_jc") return Model::standard_jc;
  throw std::invalid_argument("unknown model '" + std::string(s) + "'");
}

DressedSystem build_dressed(const ModelParams& params, Gauge gauge, int n_max, int M) {
  DressedSystem d;
  d.space = build_space(n_max);
  d.params = params;
  d.gauge = gauge;
  d.H = hamiltonian(d.space, params, gauge);
  d.eig = diagonalize(d.space, d.H, M);
  d.table = transition_table(d.eig, d.space, params, gauge);
  return d;
}

double level_shift(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int M, double omega_q) {
  double worst = 0.0;
  for (int k = 0; k < M; ++k) {
    const double ref = std::max({std::abs(a(k)), std::abs(b(k)), omega_q});
    worst = std::max(worst, std::abs(a(k) - b(k)) / ref);
  }
  return worst;
}

namespace {

Eigen::VectorXd lowest_levels(const ModelParams& params, Gauge gauge, int n_max, int M) {
  const HilbertSpace space = build_space(n_max);
  return diagonalize(space, hamiltonian(space, params, gauge), M).energies;
}

}  // namespace

int converge_n_max(const ModelParams& params, Gauge gauge, int M, const TruncationSpec& trunc) {
  // M levels need at least M/2 + 1 photon states, plus headroom for the displacement ~ eta^2
  int n = std::max({trunc.n_max_start, M, 1});
  Eigen::VectorXd prev = lowest_levels(params, gauge, n, M);
  double shift = 0.0;
  while (2 * n <= trunc.n_max_cap) {
    const int next = 2 * n;
    Eigen::VectorXd cur = lowest_levels(params, gauge, next, M);
    shift = level_shift(prev, cur, M, params.omega_q);
    if (shift < trunc.eigen_tol) return n;
    n = next;
    prev = std::move(cur);
  }
  std::ostringstream os;
  os << "photon truncation did not converge for eta = " << params.eta << " (n_max cap "
     << trunc.n_max_cap << ", last relative shift " << shift << ")";
  throw ConvergenceError(os.str());
}

Operator OpenSystem::rate_operator(Channel ch) const {
  if (!dressed) {
    const HilbertSpace space = build_space(n_max);
    if (ch == Channel::qubit) return pauli(space, PauliAxis::lowering);
    if (ch == Channel::cavity) return annihilation(space);
    throw std::invalid_argument("the standard model has no wrong-operator channel");
  }
  FieldOperatorSpec fs{ch, Weighting::linear, omega_ref(ch)};
  if (ch == Channel::cavity_wrong) {
    if (dressed->gauge != Gauge::dipole) throw std::invalid_argument("wrong-operator rate needs the dipole gauge");
    return wrong_field_operator_plus(dressed->space, dressed->eig, fs);
  }
  return field_operator_plus(dressed->table, fs);
}

Operator OpenSystem::spectrum_operator(Channel ch) const {
  if (!dressed) return rate_operator(ch);
  FieldOperatorSpec fs{ch, Weighting::flat, omega_ref(ch)};
  if (ch == Channel::cavity_wrong) {
    if (dressed->gauge != Gauge::dipole) throw std::invalid_argument("wrong-operator spectrum needs the dipole gauge");
    return wrong_field_operator_plus(dressed->space, dressed->eig, fs);
  }
  return field_operator_plus(dressed->table, fs);
}

SpectrumForm OpenSystem::spectrum_form() const {
  return dressed ? SpectrumForm::replaced : SpectrumForm::plain;
}

double OpenSystem::omega_ref(Channel ch) const {
  return ch == Channel::qubit ? spec.params.omega_q : spec.params.omega_c;
}

OpenSystem solve_point(const PointSpec& spec) {
  spec.params.validate();
  spec.bath.validate();
  OpenSystem sys;
  sys.spec = spec;
  if (spec.model == Model::standard_jc) {
    sys.n_max = spec.trunc.n_max > 0 ? spec.trunc.n_max : spec.trunc.standard_n_max;
    const HilbertSpace space = build_space(sys.n_max);
    sys.M = space.dim();
    sys.L = liouvillian_standard(space, hamiltonian_jc(space, spec.params), spec.bath, spec.params);
    if (spec.params.eta > 0.3) {
      std::ostringstream os;
      os << "standard_jc used at eta = " << spec.params.eta << " > 0.3, outside its range of validity";
      sys.warnings.push_back(os.str());
    }
  } else {
    sys.M = spec.trunc.default_M(spec.bath);
    sys.n_max = spec.trunc.n_max > 0 ? spec.trunc.n_max
                                     : converge_n_max(spec.params, spec.gauge, sys.M, spec.trunc);
    sys.dressed = build_dressed(spec.params, spec.gauge, sys.n_max, sys.M);
    const RateTable rates = decay_rates(sys.dressed->table, spec.bath, spec.params);
    sys.L = spec.model == Model::gme ? liouvillian_gme(sys.dressed->eig, sys.dressed->table, rates)
                                     : liouvillian_dressed_rwa(sys.dressed->eig, rates);
  }
  sys.rho = steady_state(sys.L);
  return sys;
}

namespace {

RatePoint rates_at(const PointSpec& spec, bool with_wrong) {
  RatePoint out;
  out.eta = spec.params.eta;
  const OpenSystem sys = solve_point(spec);
  out.n_max = sys.n_max;
  out.M = sys.M;
  out.warnings = sys.warnings;
  out.W_c = emission_rate(sys.rho, sys.rate_operator(Channel::cavity));
  out.W_q = emission_rate(sys.rho, sys.rate_operator(Channel::qubit));
  if (with_wrong && sys.dressed) {
    out.has_wrong = true;
    if (spec.gauge == Gauge::dipole) {
      out.W_c_wrong = emission_rate(sys.rho, sys.rate_operator(Channel::cavity_wrong));
    } else {
      PointSpec dip = spec;
      dip.gauge = Gauge::dipole;
      dip.trunc.n_max = 0;
      const OpenSystem other = solve_point(dip);
      out.W_c_wrong = emission_rate(other.rho, other.rate_operator(Channel::cavity_wrong));
    }
  }
  return out;
}

double rel_change(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace

RatePoint compute_rates(const PointSpec& spec, bool with_wrong) {
  if (!spec.trunc.auto_M || spec.model == Model::standard_jc) return rates_at(spec, with_wrong);
  PointSpec cur = spec;
  cur.trunc.M = spec.trunc.default_M(spec.bath);
  RatePoint prev = rates_at(cur, with_wrong);
  while (2 * cur.trunc.M <= spec.trunc.M_cap) {
    cur.trunc.M *= 2;
    RatePoint next = rates_at(cur, with_wrong);
    const double change = std::max(rel_change(prev.W_c, next.W_c), rel_change(prev.W_q, next.W_q));
    if (change < spec.trunc.observable_tol) return prev;
    prev = std::move(next);
  }
  prev.warnings.push_back("dressed-level truncation M reached its cap without meeting the rate tolerance");
  return prev;
}

double reference_rate_eta0(const BathSpec& bath, const ModelParams& params, int M) {
  if (bath.T_q == 0.0) {
    throw NormalizationError("reference rate W_q0 vanishes at T_q = 0; normalization undefined");
  }
  PointSpec spec;
  spec.params = params;
  spec.params.eta = 0.0;
  spec.bath = bath;
  spec.gauge = Gauge::coulomb;
  spec.model = Model::gme;
  spec.trunc.M = M;
  spec.trunc.n_max = M;
  const OpenSystem sys = solve_point(spec);
  const double w = emission_rate(sys.rho, sys.rate_operator(Channel::qubit));
  if (!(w > 0.0)) throw NormalizationError("reference rate W_q0 is not positive");
  return w;
}

SpectrumResult compute_spectrum(const OpenSystem& sys, Channel ch, const std::vector<double>& grid) {
  const Operator op = sys.spectrum_operator(ch);
  return emission_spectrum(sys.L, sys.rho, op.adjoint(), op, sys.omega_ref(ch), grid,
                           sys.spectrum_form(), ch);
}

std::vector<SpectrumResult> spectrum_map(const PointSpec& base, const std::vector<double>& etas,
                                         Channel ch, const std::vector<double>& grid) {
  std::vector<SpectrumResult> rows;
  rows.reserve(etas.size());
  for (double eta : etas) {
    PointSpec p = base;
    p.params.eta = eta;
    rows.push_back(compute_spectrum(solve_point(p), ch, grid));
  }
  return normalize_rows(std::move(rows));
}

}  // namespace qrm
