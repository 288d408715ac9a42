#include "qrm/errors.hpp"
#include "qrm/experiments.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qrm;
namespace fs = std::filesystem;

namespace {

Config cfg_from(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qrm_unit_" + name);
  fs::remove_all(d);
  return d;
}

const char* kSmallRates =
    "model = gme\n"
    "sweep.eta.values = 0.001, 0.1, 1.0\n"
    "bath.T_q = 0.05\n"
    "truncation.n_max = 40\n"
    "truncation.M = 10\n";

}  // namespace

TEST_CASE("config parsing") {
  const Config c = cfg_from("# comment\na = 1.5  # trailing\nb.c = x, y ,z\nflag = true\n\n");
  CHECK(c.get_double("a") == 1.5);
  CHECK(c.get_list("b.c") == std::vector<std::string>{"x", "y", "z"});
  CHECK(c.get_bool("flag", false));
  CHECK(c.get_int("missing", 7) == 7);
  CHECK_THROWS_AS(c.get_double("missing"), ConfigError);
  CHECK_THROWS_AS(cfg_from("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(cfg_from("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(cfg_from("a = zz\n").get_double("a"), ConfigError);
}

TEST_CASE("sweep config validation") {
  CHECK_THROWS_AS(sweep_from_config(cfg_from("sweep.eta.values = 0.1\nbogus.key = 1\n")), ConfigError);
  CHECK_THROWS_AS(sweep_from_config(cfg_from("sweep.eta.values = 0.1\nmodel = quantum\n")), ConfigError);
  CHECK_THROWS_AS(sweep_from_config(cfg_from("sweep.eta.values = -0.1\n")), ConfigError);
  CHECK_THROWS_AS(sweep_from_config(cfg_from("sweep.eta.values = 0.1\nbath.T_q = -1\n")), ConfigError);

  const SweepConfig s = sweep_from_config(cfg_from(
      "sweep.eta.log_min = -3\nsweep.eta.log_max = 0\nsweep.eta.points = 4\ngauge = both\ndelta = 0.2\n"));
  REQUIRE(s.etas.size() == 4);
  CHECK(s.etas[0] == doctest::Approx(1e-3));
  CHECK(s.etas[3] == doctest::Approx(1.0));
  CHECK(s.gauge == GaugeChoice::both);
  CHECK(s.params_at(0.5).omega_c == doctest::Approx(1.2));
  CHECK(s.trunc.M == 20);
}

TEST_CASE("all models agree without coupling") {
  for (double T_q : {0.05, 0.3}) {
    PointSpec p;
    p.params = ModelParams::from_detuning(0.1, 0.0);
    p.bath.T_q = T_q;
    p.bath.T_c = 0.2;
    p.trunc.n_max = 12;
    p.trunc.M = 20;
    p.trunc.standard_n_max = 12;
    double W[3][2];
    int i = 0;
    for (Model m : {Model::gme, Model::dressed_rwa, Model::standard_jc}) {
      p.model = m;
      const RatePoint r = compute_rates(p, false);
      W[i][0] = r.W_c;
      W[i][1] = r.W_q;
      ++i;
    }
    for (int k = 1; k < 3; ++k) {
      CHECK(relative_difference(W[k][0], W[0][0]) < 1e-8);
      CHECK(relative_difference(W[k][1], W[0][1]) < 1e-8);
    }
  }
}

TEST_CASE("dressed RWA emits into the cavity at tiny coupling") {
  // qubit pumped incoherently; 1+/1- splitting far below the linewidths
  PointSpec p;
  p.params = ModelParams::from_detuning(0.0, 1e-5);
  p.bath.T_q = 0.2;
  p.trunc.n_max = 20;
  p.trunc.M = 10;
  p.model = Model::gme;
  const RatePoint g = compute_rates(p, false);
  p.model = Model::dressed_rwa;
  const RatePoint r = compute_rates(p, false);
  CHECK(g.W_c < 1e-3 * g.W_q);
  CHECK(r.W_c > 0.1 * r.W_q);
}

TEST_CASE("rates command output is deterministic") {
  const Config cfg = cfg_from(kSmallRates);
  const fs::path a = scratch_dir("rates_a");
  const fs::path b = scratch_dir("rates_b");
  CHECK(cmd_rates(cfg, {a, 2, true}) == kOk);
  CHECK(cmd_rates(cfg, {b, 1, true}) == kOk);
  const std::string body = slurp(a / "rates.csv");
  CHECK(body == slurp(b / "rates.csv"));
  CHECK(body.rfind("eta,W_c_norm,W_q_norm,W_c_wrong_norm\n", 0) == 0);

  const auto man = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(man["command"] == "rates");
  CHECK(man["rng"] == "none");
  CHECK(man["files"]["rates.csv"] == sha256_hex(a / "rates.csv"));
  CHECK(man["points"].size() == 3);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("normalization failure maps to a config error") {
  const Config cfg = cfg_from("sweep.eta.values = 0.1\nbath.T_q = 0\ntruncation.n_max = 30\ntruncation.M = 8\n");
  const fs::path d = scratch_dir("rates_t0");
  CHECK_THROWS_AS(cmd_rates(cfg, {d, 1, true}), NormalizationError);
  fs::remove_all(d);
}

TEST_CASE("convergence failure exit code") {
  const Config cfg = cfg_from(
      "sweep.eta.values = 5\nbath.T_q = 0.05\ntruncation.n_max_start = 16\ntruncation.n_max_cap = 24\n"
      "truncation.M = 10\n");
  const fs::path d = scratch_dir("rates_cap");
  CHECK(cmd_rates(cfg, {d, 1, true}) == kConvergenceFailure);
  fs::remove_all(d);
}

TEST_CASE("gauge audit command passes") {
  const Config cfg = cfg_from("gauge = both\nsweep.eta.values = 0, 0.5\nbath.T_q = 0.2\ntruncation.M = 10\n");
  const fs::path d = scratch_dir("audit");
  CHECK(cmd_gauge_audit(cfg, {d, 2, true}) == kOk);
  const auto j = nlohmann::json::parse(slurp(d / "gauge_audit.json"));
  CHECK(j.dump().find("\"pass\":true") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("spectra command normalizes each row") {
  const Config cfg = cfg_from(
      "sweep.eta.values = 0.05, 0.3\nbath.T_q = 0.2\ntruncation.n_max = 30\ntruncation.M = 10\n"
      "omega.min = 0.5\nomega.max = 1.5\nomega.points = 41\nchannels = cavity, qubit\n");
  const fs::path d = scratch_dir("spectra");
  CHECK(cmd_spectra(cfg, {d, 2, true}) == kOk);
  std::istringstream in(slurp(d / "spectra.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "eta,omega_over_wq,channel,S_norm");
  std::map<std::string, double> peak;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ls(line);
    std::string eta, w, ch, s;
    std::getline(ls, eta, ',');
    std::getline(ls, w, ',');
    std::getline(ls, ch, ',');
    std::getline(ls, s, ',');
    auto& m = peak[eta + ch];
    m = std::max(m, std::stod(s));
  }
  CHECK(rows == 2 * 2 * 41);
  for (const auto& [k, v] : peak) CHECK(v == doctest::Approx(1.0));
  fs::remove_all(d);
}
