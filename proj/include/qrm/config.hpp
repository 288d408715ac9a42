#pragma once

#include "qrm/pipeline.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace qrm {

// Flat key = value file, '#' starts a comment, keys may be dotted.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<stream>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  const std::string& source() const { return source_; }

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

struct OmegaGridSpec {
  double min = 0.9;
  double max = 1.1;
  int points = 201;
  bool log_spacing = false;

  std::vector<double> build(double omega_q) const;  // in energy units
};

struct AuditTolerances {
  int levels = 20;
  double eigen_rel = 1e-8;
  double element = 1e-6;
  double rate_rel = 1e-6;
  double liouvillian = 1e-6;  // relative to max |L|
};

enum class GaugeChoice { coulomb, dipole, both };

struct SweepConfig {
  std::vector<Model> models{Model::gme};
  GaugeChoice gauge = GaugeChoice::dipole;
  std::vector<double> etas;
  double delta = 0.0;
  double omega_q = 1.0;
  double jc_coupling_scale = 0.5;
  BathSpec bath;
  TruncationSpec trunc;
  OmegaGridSpec omega;
  std::vector<Channel> channels{Channel::cavity};
  bool wrong_operator = true;
  int report_levels = 10;
  AuditTolerances audit;
  std::string output_dir = "out";

  ModelParams params_at(double eta) const;
  PointSpec point(double eta, Model model, Gauge gauge) const;
  Gauge primary_gauge() const { return gauge == GaugeChoice::coulomb ? Gauge::coulomb : Gauge::dipole; }
};

// Throws ConfigError on unknown or malformed keys.
SweepConfig sweep_from_config(const Config& cfg);

}  // namespace qrm
