#include "qrm/errors.hpp"
#include "qrm/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int run(const std::string& name, const std::string& config_path, const qrm::RunOptions& opts) {
  using namespace qrm;
  try {
    const Config cfg = Config::load(config_path);
    if (name == "levels") return cmd_levels(cfg, opts);
    if (name == "rates") return cmd_rates(cfg, opts);
    if (name == "spectra") return cmd_spectra(cfg, opts);
    if (name == "gauge-audit") return cmd_gauge_audit(cfg, opts);
    if (name == "compare") return cmd_compare_models(cfg, opts);
    std::cerr << "unknown command " << name << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NormalizationError& e) {
    std::cerr << "normalization error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergenceFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative quantum Rabi model: levels, emission rates and spectra"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  bool seedless = false;

  const std::pair<const char*, const char*> subs[] = {
      {"levels", "dressed levels and transition frequencies vs eta"},
      {"rates", "steady-state emission rates vs eta"},
      {"spectra", "cavity/qubit emission spectra vs eta"},
      {"gauge-audit", "Coulomb vs dipole comparison of levels, elements and rates"},
      {"compare", "GME, dressed-RWA and standard model side by side"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--workers", workers, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    sub->add_flag("--seedless", seedless, "assert that no random numbers are used");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qrm::kConfigError;
  }

  qrm::RunOptions opts;
  opts.out = out_dir;
  opts.workers = workers;
  opts.seedless = seedless;
  return run(app.get_subcommands().front()->get_name(), config_path, opts);
}
