#include "qrm/config.hpp"

#include "qrm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qrm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
}

const std::set<std::string> kKnownKeys = {
    "model", "models", "gauge", "delta", "omega_q",
    "sweep.eta.values", "sweep.eta.min", "sweep.eta.max", "sweep.eta.log_min", "sweep.eta.log_max",
    "sweep.eta.points", "sweep.eta.spacing",
    "bath.T_c", "bath.T_q", "bath.kappa_over_wq", "bath.gamma_over_wq",
    "truncation.n_max", "truncation.M", "truncation.n_max_start", "truncation.n_max_cap",
    "truncation.M_cap", "truncation.eigen_tol", "truncation.observable_tol", "truncation.standard_n_max",
    "omega.min", "omega.max", "omega.points", "omega.spacing",
    "channels", "rates.wrong_operator", "levels.count",
    "audit.levels", "audit.eigen_tol", "audit.element_tol", "audit.rate_tol", "audit.liouvillian_tol",
    "jc.coupling_scale", "output.dir",
};

bool is_auto(const std::string& v) { return v == "auto"; }

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key)) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "': expected an integer");
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "': expected true/false, got '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : get_list(key)) out.push_back(to_double(key, s));
  return out;
}

std::vector<double> OmegaGridSpec::build(double omega_q) const {
  if (!(min > 0.0)) throw ConfigError("omega.min must be > 0 (omega = 0 is excluded)");
  if (!(max > min) || points < 2) throw ConfigError("omega grid needs max > min and at least 2 points");
  auto g = log_spacing ? log_grid(min, max, points) : linear_grid(min, max, points);
  for (double& w : g) w *= omega_q;
  return g;
}

ModelParams SweepConfig::params_at(double eta) const {
  ModelParams p = ModelParams::from_detuning(delta, eta, omega_q);
  p.jc_coupling_scale = jc_coupling_scale;
  return p;
}

PointSpec SweepConfig::point(double eta, Model model, Gauge g) const {
  PointSpec s;
  s.params = params_at(eta);
  s.bath = bath;
  s.gauge = g;
  s.model = model;
  s.trunc = trunc;
  return s;
}

SweepConfig sweep_from_config(const Config& cfg) {
  for (const auto& [k, v] : cfg.entries()) {
    if (!kKnownKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  SweepConfig sc;
  try {
    if (cfg.has("models")) {
      sc.models.clear();
      for (const auto& m : cfg.get_list("models")) sc.models.push_back(model_from_string(m));
    } else if (cfg.has("model")) {
      sc.models = {model_from_string(cfg.get_string("model"))};
    }
    if (sc.models.empty()) throw ConfigError("no model selected");

    const std::string gauge = cfg.get_string("gauge", "dipole");
    if (gauge == "coulomb") sc.gauge = GaugeChoice::coulomb;
    else if (gauge == "dipole") sc.gauge = GaugeChoice::dipole;
    else if (gauge == "both") sc.gauge = GaugeChoice::both;
    else throw ConfigError("gauge must be coulomb, dipole or both");

    sc.delta = cfg.get_double("delta", 0.0);
    sc.omega_q = cfg.get_double("omega_q", 1.0);
    sc.jc_coupling_scale = cfg.get_double("jc.coupling_scale", 0.5);
    if (!(1.0 + sc.delta > 0.0)) throw ConfigError("delta must be > -1");
    if (!(sc.omega_q > 0.0)) throw ConfigError("omega_q must be positive");

    if (cfg.has("sweep.eta.values")) {
      sc.etas = cfg.get_doubles("sweep.eta.values");
    } else {
      const int n = cfg.get_int("sweep.eta.points", 0);
      const std::string spacing = cfg.get_string("sweep.eta.spacing", "log");
      if (n < 1) throw ConfigError("sweep.eta.points must be >= 1 (or give sweep.eta.values)");
      if (spacing == "log") {
        const double lo = cfg.get_double("sweep.eta.log_min");
        const double hi = cfg.get_double("sweep.eta.log_max");
        sc.etas = log_grid(std::pow(10.0, lo), std::pow(10.0, hi), n);
      } else if (spacing == "linear") {
        sc.etas = linear_grid(cfg.get_double("sweep.eta.min"), cfg.get_double("sweep.eta.max"), n);
      } else {
        throw ConfigError("sweep.eta.spacing must be log or linear");
      }
    }
    if (sc.etas.empty()) throw ConfigError("eta grid is empty");
    for (std::size_t i = 0; i < sc.etas.size(); ++i) {
      if (!(sc.etas[i] >= 0.0)) throw ConfigError("eta values must be >= 0");
      if (i > 0 && !(sc.etas[i] > sc.etas[i - 1])) throw ConfigError("eta grid must be strictly ascending");
    }

    sc.bath.T_c = cfg.get_double("bath.T_c", 0.0);
    sc.bath.T_q = cfg.get_double("bath.T_q", 0.05);
    sc.bath.kappa = cfg.get_double("bath.kappa_over_wq", 1e-3) * sc.omega_q;
    sc.bath.gamma = cfg.get_double("bath.gamma_over_wq", 1e-4) * sc.omega_q;
    sc.bath.validate();

    const std::string nmax = cfg.get_string("truncation.n_max", "auto");
    sc.trunc.n_max = is_auto(nmax) ? 0 : cfg.get_int("truncation.n_max", 0);
    const std::string M = cfg.get_string("truncation.M", "20");
    if (is_auto(M)) {
      sc.trunc.M = 0;
      sc.trunc.auto_M = true;
    } else {
      sc.trunc.M = cfg.get_int("truncation.M", 20);
    }
    sc.trunc.n_max_start = cfg.get_int("truncation.n_max_start", sc.trunc.n_max_start);
    sc.trunc.n_max_cap = cfg.get_int("truncation.n_max_cap", sc.trunc.n_max_cap);
    sc.trunc.M_cap = cfg.get_int("truncation.M_cap", sc.trunc.M_cap);
    sc.trunc.eigen_tol = cfg.get_double("truncation.eigen_tol", sc.trunc.eigen_tol);
    sc.trunc.observable_tol = cfg.get_double("truncation.observable_tol", sc.trunc.observable_tol);
    sc.trunc.standard_n_max = cfg.get_int("truncation.standard_n_max", sc.trunc.standard_n_max);
    if (sc.trunc.n_max < 0 || (!is_auto(nmax) && sc.trunc.n_max < 1)) throw ConfigError("truncation.n_max must be >= 1 or auto");
    if (!sc.trunc.auto_M && sc.trunc.M < 2) throw ConfigError("truncation.M must be >= 2 or auto");
    if (sc.trunc.n_max > 0 && !sc.trunc.auto_M && sc.trunc.M > 2 * (sc.trunc.n_max + 1)) {
      throw ConfigError("truncation.M exceeds the Hilbert-space dimension");
    }

    sc.omega.min = cfg.get_double("omega.min", sc.omega.min);
    sc.omega.max = cfg.get_double("omega.max", sc.omega.max);
    sc.omega.points = cfg.get_int("omega.points", sc.omega.points);
    const std::string ospacing = cfg.get_string("omega.spacing", "linear");
    if (ospacing != "linear" && ospacing != "log") throw ConfigError("omega.spacing must be linear or log");
    sc.omega.log_spacing = ospacing == "log";
    sc.omega.build(sc.omega_q);

    if (cfg.has("channels")) {
      sc.channels.clear();
      for (const auto& c : cfg.get_list("channels")) sc.channels.push_back(channel_from_string(c));
      std::sort(sc.channels.begin(), sc.channels.end(),
                [](Channel a, Channel b) { return to_string(a) < to_string(b); });
      sc.channels.erase(std::unique(sc.channels.begin(), sc.channels.end()), sc.channels.end());
    }
    if (sc.channels.empty()) throw ConfigError("channels must not be empty");
    sc.wrong_operator = cfg.get_bool("rates.wrong_operator", true);
    sc.report_levels = cfg.get_int("levels.count", sc.report_levels);
    if (sc.report_levels < 1) throw ConfigError("levels.count must be >= 1");

    sc.audit.levels = cfg.get_int("audit.levels", sc.audit.levels);
    sc.audit.eigen_rel = cfg.get_double("audit.eigen_tol", sc.audit.eigen_rel);
    sc.audit.element = cfg.get_double("audit.element_tol", sc.audit.element);
    sc.audit.rate_rel = cfg.get_double("audit.rate_tol", sc.audit.rate_rel);
    sc.audit.liouvillian = cfg.get_double("audit.liouvillian_tol", sc.audit.liouvillian);
    sc.output_dir = cfg.get_string("output.dir", sc.output_dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

}  // namespace qrm
