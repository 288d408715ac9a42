#include "qrm/experiments.hpp"

#include "qrm/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace qrm {

using json = nlohmann::json;

namespace {

constexpr const char* kCodeVersion = "qrm 1.0.0";

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string error;
  double wall_seconds = 0.0;
};

// Runs f(i) for i in [0, n) on a pool of threads; results stay in index order.
template <typename T, typename F>
std::vector<Outcome<T>> parallel_map(std::size_t n, int workers, F f) {
  std::vector<Outcome<T>> out(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out[i].value = f(i);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
      out[i].wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = static_cast<int>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < w; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  return out;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

class Manifest {
 public:
  Manifest(std::string command, const Config& cfg, const RunOptions& opts, int workers) {
    j_["command"] = std::move(command);
    j_["code_version"] = kCodeVersion;
    j_["config"] = cfg.entries();
    j_["config_source"] = cfg.source();
    j_["seedless"] = opts.seedless;
    j_["rng"] = "none";
    j_["workers"] = workers;
    j_["points"] = json::array();
    j_["warnings"] = json::array();
    j_["files"] = json::object();
  }
  void point(json p) { j_["points"].push_back(std::move(p)); }
  void warn(const std::string& w) {
    for (const auto& existing : j_["warnings"]) {
      if (existing == w) return;
    }
    j_["warnings"].push_back(w);
    std::cerr << "warning: " << w << '\n';
  }
  void write(const std::filesystem::path& dir, const std::vector<std::string>& files) {
    for (const auto& f : files) j_["files"][f] = sha256_hex(dir / f);
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << j_.dump(2) << '\n';
  }

 private:
  json j_;
};

int resolve_workers(int w) {
  return w > 0 ? w : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::filesystem::path output_dir(const SweepConfig& sc, const RunOptions& opts) {
  std::filesystem::path dir = opts.out.empty() ? std::filesystem::path(sc.output_dir) : opts.out;
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename T>
json point_record(double eta, const Outcome<T>& o) {
  json p;
  p["eta"] = eta;
  p["wall_seconds"] = o.wall_seconds;
  p["status"] = o.value ? "ok" : "failed";
  if (!o.value) p["message"] = o.error;
  return p;
}

std::string fmt_int(int v) { return std::to_string(v); }

// Rotates dipole eigenvectors so that |j'> = U^dag |j> holds with equal phases.
EigenSystem align_phases(const EigenSystem& dip, const EigenSystem& coul, const Operator& U, double& min_overlap) {
  EigenSystem out = dip;
  const Operator mapped = U.adjoint() * coul.states;
  min_overlap = 1.0;
  for (int j = 0; j < dip.size(); ++j) {
    const cplx o = dip.states.col(j).dot(mapped.col(j));
    min_overlap = std::min(min_overlap, std::abs(o));
    if (std::abs(o) > 0.0) out.states.col(j) *= o / std::abs(o);
  }
  return out;
}

double max_abs_diff(const Operator& a, const Operator& b, int m) {
  return (a.topLeftCorner(m, m) - b.topLeftCorner(m, m)).cwiseAbs().maxCoeff();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string sha256_hex(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

double relative_difference(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

GaugeAuditPoint gauge_audit_point(const ModelParams& params, const BathSpec& bath,
                                  const TruncationSpec& trunc, const AuditTolerances& tol) {
  GaugeAuditPoint r;
  r.eta = params.eta;
  const int M = std::max(tol.levels, trunc.default_M(bath));
  r.levels = tol.levels;
  r.n_max = trunc.n_max > 0 ? trunc.n_max
                            : std::max(converge_n_max(params, Gauge::coulomb, M, trunc),
                                       converge_n_max(params, Gauge::dipole, M, trunc));
  const DressedSystem c = build_dressed(params, Gauge::coulomb, r.n_max, M);
  const DressedSystem d = build_dressed(params, Gauge::dipole, r.n_max, M);
  r.eigen_residual = level_shift(c.eig.energies, d.eig.energies, tol.levels, params.omega_q);

  const EigenSystem aligned = align_phases(d.eig, c.eig, gauge_unitary(c.space, params), r.min_overlap);
  const TransitionTable ta = transition_table(aligned, d.space, params, Gauge::dipole);
  r.element_residual_x = max_abs_diff(ta.x, c.table.x, tol.levels);
  r.element_residual_s = max_abs_diff(ta.s, c.table.s, tol.levels);

  const int Mr = trunc.default_M(bath);
  auto truncate = [Mr](const DressedSystem& ds, const EigenSystem& eig, const TransitionTable& t) {
    EigenSystem e = eig;
    e.energies = eig.energies.head(Mr);
    e.states = eig.states.leftCols(Mr);
    e.parities.resize(Mr);
    e.sector_rank.resize(Mr);
    e.labels.resize(Mr);
    TransitionTable tt = transition_table(e, ds.space, ds.params, t.gauge);
    return std::pair{e, tt};
  };
  const auto [ec, tc] = truncate(c, c.eig, c.table);
  const auto [ed, td] = truncate(d, aligned, ta);
  const Superoperator Lc = liouvillian_gme(ec, tc, decay_rates(tc, bath, params));
  const Superoperator Ld = liouvillian_gme(ed, td, decay_rates(td, bath, params));
  r.liouvillian_residual = (Lc.matrix - Ld.matrix).cwiseAbs().maxCoeff() /
                           std::max(Lc.matrix.cwiseAbs().maxCoeff(), 1e-300);

  const DensityMatrix rc = steady_state(Lc);
  const DensityMatrix rd = steady_state(Ld);
  FieldOperatorSpec cav{Channel::cavity, Weighting::linear, params.omega_c};
  FieldOperatorSpec qub{Channel::qubit, Weighting::linear, params.omega_q};
  r.W_c_coulomb = emission_rate(rc, field_operator_plus(tc, cav));
  r.W_q_coulomb = emission_rate(rc, field_operator_plus(tc, qub));
  r.W_c_dipole = emission_rate(rd, field_operator_plus(td, cav));
  r.W_q_dipole = emission_rate(rd, field_operator_plus(td, qub));
  r.W_c_wrong = emission_rate(rd, wrong_field_operator_plus(d.space, ed, cav));
  r.rate_residual = std::max(relative_difference(r.W_c_coulomb, r.W_c_dipole),
                             relative_difference(r.W_q_coulomb, r.W_q_dipole));
  r.wrong_deviation = relative_difference(r.W_c_wrong, r.W_c_coulomb);

  r.pass = r.eigen_residual < tol.eigen_rel && r.element_residual_x < tol.element &&
           r.element_residual_s < tol.element && r.rate_residual < tol.rate_rel &&
           r.liouvillian_residual < tol.liouvillian;
  return r;
}

int cmd_levels(const Config& cfg, const RunOptions& opts) {
  const SweepConfig sc = sweep_from_config(cfg);
  const auto dir = output_dir(sc, opts);
  const int workers = resolve_workers(opts.workers);
  const Gauge g = sc.primary_gauge();
  const int M = sc.report_levels;
  auto results = parallel_map<DressedSystem>(sc.etas.size(), workers, [&](std::size_t i) {
    const ModelParams p = sc.params_at(sc.etas[i]);
    const int n = sc.trunc.n_max > 0 ? sc.trunc.n_max : converge_n_max(p, g, M, sc.trunc);
    return build_dressed(p, g, n, M);
  });

  Manifest man("levels", cfg, opts, workers);
  int code = kOk;
  {
    CsvFile levels(dir / "levels.csv", {"eta", "level_index", "label", "parity", "omega_rel"});
    CsvFile trans(dir / "transitions.csv", {"eta", "upper", "lower", "omega_over_wq"});
    for (std::size_t i = 0; i < results.size(); ++i) {
      json rec = point_record(sc.etas[i], results[i]);
      if (!results[i].value) {
        code = kConvergenceFailure;
        man.point(rec);
        continue;
      }
      const DressedSystem& d = *results[i].value;
      rec["n_max"] = d.space.n_max();
      rec["M"] = d.eig.size();
      man.point(rec);
      const std::string eta = format_double(sc.etas[i]);
      for (int k = 0; k < d.eig.size(); ++k) {
        levels.row({eta, fmt_int(k), d.eig.labels[k].str(), fmt_int(d.eig.parities[k]),
                    format_double((d.eig.energies(k) - d.eig.energies(0)) / sc.omega_q)});
      }
      for (int k = 1; k < d.eig.size(); ++k) {
        for (int j = 0; j < k; ++j) {
          if (d.eig.parities[k] == d.eig.parities[j]) continue;
          trans.row({eta, d.eig.labels[k].str(), d.eig.labels[j].str(),
                     format_double(std::abs(d.table.omega(k, j)) / sc.omega_q)});
        }
      }
    }
  }
  man.write(dir, {"levels.csv", "transitions.csv"});
  return code;
}

int cmd_rates(const Config& cfg, const RunOptions& opts) {
  const SweepConfig sc = sweep_from_config(cfg);
  const Model model = sc.models.front();
  const bool wrong = sc.wrong_operator && model != Model::standard_jc;
  const double W0 = reference_rate_eta0(sc.bath, sc.params_at(0.0), sc.trunc.default_M(sc.bath));
  const auto dir = output_dir(sc, opts);
  const int workers = resolve_workers(opts.workers);
  auto results = parallel_map<RatePoint>(sc.etas.size(), workers, [&](std::size_t i) {
    return compute_rates(sc.point(sc.etas[i], model, sc.primary_gauge()), wrong);
  });

  Manifest man("rates", cfg, opts, workers);
  int code = kOk;
  {
    std::vector<std::string> header{"eta", "W_c_norm", "W_q_norm"};
    if (wrong) header.push_back("W_c_wrong_norm");
    CsvFile csv(dir / "rates.csv", header);
    for (std::size_t i = 0; i < results.size(); ++i) {
      json rec = point_record(sc.etas[i], results[i]);
      if (!results[i].value) {
        code = kConvergenceFailure;
        man.point(rec);
        continue;
      }
      const RatePoint& r = *results[i].value;
      rec["n_max"] = r.n_max;
      rec["M"] = r.M;
      man.point(rec);
      for (const auto& w : r.warnings) man.warn(w);
      std::vector<std::string> row{format_double(sc.etas[i]), format_double(r.W_c / W0), format_double(r.W_q / W0)};
      if (wrong) row.push_back(format_double(r.W_c_wrong / W0));
      csv.row(row);
    }
  }
  man.write(dir, {"rates.csv"});
  return code;
}

namespace {

struct SpectraPoint {
  std::vector<SpectrumResult> per_channel;
  int n_max = 0;
  int M = 0;
  std::vector<std::string> warnings;
};

SpectraPoint spectra_at(const SweepConfig& sc, double eta, Model model, const std::vector<double>& grid) {
  const OpenSystem sys = solve_point(sc.point(eta, model, sc.primary_gauge()));
  SpectraPoint sp;
  sp.n_max = sys.n_max;
  sp.M = sys.M;
  sp.warnings = sys.warnings;
  for (Channel ch : sc.channels) {
    if (ch == Channel::cavity_wrong && !sys.dressed) continue;
    SpectrumResult s = compute_spectrum(sys, ch, grid);
    s.normalize_max();
    sp.per_channel.push_back(std::move(s));
  }
  return sp;
}

void check_channels(const SweepConfig& sc) {
  const bool wants_wrong = std::find(sc.channels.begin(), sc.channels.end(), Channel::cavity_wrong) != sc.channels.end();
  if (wants_wrong && sc.primary_gauge() != Gauge::dipole) {
    throw ConfigError("channel cavity_wrong requires gauge = dipole");
  }
}

}  // namespace

int cmd_spectra(const Config& cfg, const RunOptions& opts) {
  const SweepConfig sc = sweep_from_config(cfg);
  check_channels(sc);
  const Model model = sc.models.front();
  const auto grid = sc.omega.build(sc.omega_q);
  const auto dir = output_dir(sc, opts);
  const int workers = resolve_workers(opts.workers);
  auto results = parallel_map<SpectraPoint>(sc.etas.size(), workers,
                                            [&](std::size_t i) { return spectra_at(sc, sc.etas[i], model, grid); });

  Manifest man("spectra", cfg, opts, workers);
  int code = kOk;
  {
    CsvFile csv(dir / "spectra.csv", {"eta", "omega_over_wq", "channel", "S_norm"});
    for (std::size_t i = 0; i < results.size(); ++i) {
      json rec = point_record(sc.etas[i], results[i]);
      if (!results[i].value) {
        code = kConvergenceFailure;
        man.point(rec);
        continue;
      }
      const SpectraPoint& sp = *results[i].value;
      rec["n_max"] = sp.n_max;
      rec["M"] = sp.M;
      man.point(rec);
      for (const auto& w : sp.warnings) man.warn(w);
      const std::string eta = format_double(sc.etas[i]);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::string w = format_double(grid[k] / sc.omega_q);
        for (const auto& s : sp.per_channel) {
          csv.row({eta, w, std::string(to_string(s.channel)), format_double(s.values[k])});
        }
      }
    }
  }
  man.write(dir, {"spectra.csv"});
  return code;
}

int cmd_gauge_audit(const Config& cfg, const RunOptions& opts) {
  const SweepConfig sc = sweep_from_config(cfg);
  if (sc.gauge != GaugeChoice::both) throw ConfigError("gauge-audit requires gauge = both");
  const auto dir = output_dir(sc, opts);
  const int workers = resolve_workers(opts.workers);
  auto results = parallel_map<GaugeAuditPoint>(sc.etas.size(), workers, [&](std::size_t i) {
    return gauge_audit_point(sc.params_at(sc.etas[i]), sc.bath, sc.trunc, sc.audit);
  });

  Manifest man("gauge-audit", cfg, opts, workers);
  json report;
  report["tolerances"] = {{"levels", sc.audit.levels},
                          {"eigen_rel", sc.audit.eigen_rel},
                          {"element", sc.audit.element},
                          {"rate_rel", sc.audit.rate_rel},
                          {"liouvillian", sc.audit.liouvillian}};
  report["points"] = json::array();
  bool all_pass = true;
  bool failed_point = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    json rec = point_record(sc.etas[i], results[i]);
    if (!results[i].value) {
      failed_point = true;
      man.point(rec);
      continue;
    }
    const GaugeAuditPoint& a = *results[i].value;
    rec["n_max"] = a.n_max;
    rec["M"] = std::max(sc.audit.levels, sc.trunc.default_M(sc.bath));
    man.point(rec);
    all_pass = all_pass && a.pass;
    report["points"].push_back({{"eta", a.eta},
                                {"n_max", a.n_max},
                                {"eigen_residual", a.eigen_residual},
                                {"element_residual_x", a.element_residual_x},
                                {"element_residual_s", a.element_residual_s},
                                {"min_state_overlap", a.min_overlap},
                                {"liouvillian_residual", a.liouvillian_residual},
                                {"W_c_coulomb", a.W_c_coulomb},
                                {"W_c_dipole", a.W_c_dipole},
                                {"W_q_coulomb", a.W_q_coulomb},
                                {"W_q_dipole", a.W_q_dipole},
                                {"rate_residual", a.rate_residual},
                                {"W_c_wrong", a.W_c_wrong},
                                {"wrong_operator_deviation", a.wrong_deviation},
                                {"wrong_operator_equal", a.wrong_deviation < sc.audit.rate_rel},
                                {"pass", a.pass}});
  }
  report["pass"] = all_pass && !failed_point;
  {
    std::ofstream out(dir / "gauge_audit.json", std::ios::binary);
    out << report.dump(2) << '\n';
  }
  man.write(dir, {"gauge_audit.json"});
  if (failed_point) return kConvergenceFailure;
  return all_pass ? kOk : kAuditFailure;
}

int cmd_compare_models(const Config& cfg, const RunOptions& opts) {
  SweepConfig sc = sweep_from_config(cfg);
  if (sc.models.size() < 2) throw ConfigError("compare needs at least two models");
  check_channels(sc);
  const auto grid = sc.omega.build(sc.omega_q);
  const double W0 = reference_rate_eta0(sc.bath, sc.params_at(0.0), sc.trunc.default_M(sc.bath));
  const auto dir = output_dir(sc, opts);
  const int workers = resolve_workers(opts.workers);

  struct ComparePoint {
    RatePoint rates;
    SpectraPoint spectra;
  };
  const std::size_t nm = sc.models.size();
  auto results = parallel_map<ComparePoint>(sc.etas.size() * nm, workers, [&](std::size_t idx) {
    const double eta = sc.etas[idx / nm];
    const Model m = sc.models[idx % nm];
    ComparePoint cp;
    cp.rates = compute_rates(sc.point(eta, m, sc.primary_gauge()), false);
    cp.spectra = spectra_at(sc, eta, m, grid);
    return cp;
  });

  Manifest man("compare", cfg, opts, workers);
  int code = kOk;
  {
    CsvFile rates(dir / "compare_rates.csv", {"eta", "model", "W_c_norm", "W_q_norm"});
    for (std::size_t idx = 0; idx < results.size(); ++idx) {
      const double eta = sc.etas[idx / nm];
      const Model m = sc.models[idx % nm];
      json rec = point_record(eta, results[idx]);
      rec["model"] = std::string(to_string(m));
      if (!results[idx].value) {
        code = kConvergenceFailure;
        man.point(rec);
        continue;
      }
      const ComparePoint& cp = *results[idx].value;
      rec["n_max"] = cp.rates.n_max;
      rec["M"] = cp.rates.M;
      man.point(rec);
      for (const auto& w : cp.rates.warnings) man.warn(w);
      rates.row({format_double(eta), std::string(to_string(m)), format_double(cp.rates.W_c / W0),
                 format_double(cp.rates.W_q / W0)});
    }
    CsvFile spectra(dir / "compare_spectra.csv", {"eta", "omega_over_wq", "channel", "model", "S_norm"});
    for (std::size_t e = 0; e < sc.etas.size(); ++e) {
      const std::string eta = format_double(sc.etas[e]);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::string w = format_double(grid[k] / sc.omega_q);
        for (Channel ch : sc.channels) {
          for (std::size_t mi = 0; mi < nm; ++mi) {
            const auto& o = results[e * nm + mi];
            if (!o.value) continue;
            for (const auto& s : o.value->spectra.per_channel) {
              if (s.channel != ch) continue;
              spectra.row({eta, w, std::string(to_string(ch)), std::string(to_string(sc.models[mi])),
                           format_double(s.values[k])});
            }
          }
        }
      }
    }
  }
  man.write(dir, {"compare_rates.csv", "compare_spectra.csv"});
  return code;
}

}  // namespace qrm
