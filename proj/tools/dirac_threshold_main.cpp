// dirac-threshold: command-line front end. Flags override values loaded
// from --config; everything is validated before any computation starts.

#include "dirac/error.hpp"
#include "dirac/report.hpp"
#include "dirac/run.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

using dirac::RunConfig;

// Each flag remembers how to write itself into a RunConfig.
struct Flags {
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  template <typename T>
  void add(CLI::App* app, const std::string& name, const std::string& help, T RunConfig::*field) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    setters.emplace_back(opt, [value, field](RunConfig& c) { c.*field = *value; });
  }
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config_path, "configuration file (sections [run], [potential], ...)");
  flags.add(sub, "--potential", "potential family: zero, loss-yau, bump", &RunConfig::potential);
  flags.add(sub, "--params", "potential parameters (loss-yau: scale; bump: cx cy cz radius ax ay az)",
            &RunConfig::potential_params);
  flags.add(sub, "--n", "grid points per axis (odd, >= 15)", &RunConfig::n);
  flags.add(sub, "--L", "box side length", &RunConfig::L);
  flags.add(sub, "--k", "number of modes", &RunConfig::k);
  flags.add(sub, "--tol", "solver tolerance", &RunConfig::tol);
  flags.add(sub, "--max-iter", "solver iteration cap", &RunConfig::max_iter);
  flags.add(sub, "--seed", "random seed", &RunConfig::seed);
  flags.add(sub, "--mass", "mass m >= 0", &RunConfig::mass);
  flags.add(sub, "--output", "output directory", &RunConfig::output_dir);
  flags.add(sub, "--threads", "worker threads (DIRAC_THRESHOLD_THREADS overrides)", &RunConfig::threads);
  flags.add(sub, "--plots", "write SVG plots (true/false)", &RunConfig::plots);
  flags.add(sub, "--dump-fields", "write modes in SPNF format (true/false)", &RunConfig::dump_fields);

  auto target = std::make_shared<std::string>();
  CLI::Option* t = sub->add_option("--target", *target, "threshold target: +m or -m")->check(CLI::IsMember({"+m", "-m", "m"}));
  flags.setters.emplace_back(t, [target](RunConfig& c) { c.target_sign = (*target == "-m") ? -1 : 1; });
  flags.add(sub, "--eigen-tol", "residual tolerance for eigenpairs of H", &RunConfig::eigen_tol);
  flags.add(sub, "--sphere-n", "sphere samples for the asymptotic check", &RunConfig::sphere_n);
  flags.add(sub, "--radii", "probe radii for r^2 psi(r omega)", &RunConfig::radii);
  flags.add(sub, "--direct-sum-tol", "tolerance of the direct-sum verdict", &RunConfig::direct_sum_tol);
  flags.add(sub, "--t-min", "first coupling of the sweep", &RunConfig::t_min);
  flags.add(sub, "--t-max", "last coupling of the sweep", &RunConfig::t_max);
  flags.add(sub, "--t-step", "coupling step", &RunConfig::t_step);
  flags.add(sub, "--epsilon", "perturbation size in the weighted sup norm", &RunConfig::epsilon);
  flags.add(sub, "--trials", "perturbation trials", &RunConfig::trials);
  flags.add(sub, "--scales", "multiples of the potential for dimbound", &RunConfig::scales);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold eigenfunctions of lattice Dirac and Weyl operators"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"check-potential", "classify the decay of a vector potential (A1, A2, A3)"},
      {"kernel", "smallest singular values and zero modes of the lattice Weyl operator"},
      {"threshold", "eigenpair of the Dirac operator at +m or -m and its direct-sum structure"},
      {"asymptotic", "limit of r^2 psi(r omega) against its integral formula"},
      {"sweep", "coupling sweep t -> sigma.(D - tA)"},
      {"probe", "random bump perturbations of a potential"},
      {"dimbound", "kernel dimension against the integral of |A|^3"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dirac::kExitValidation;
  }

  RunConfig config;
  try {
    if (!flags.config_path.empty()) config = dirac::parse_config(dirac::read_text_file(flags.config_path));
    for (const auto& [opt, set] : flags.setters)
      if (opt->count() > 0) set(config);
    config.command = dirac::parse_command(app.get_subcommands().front()->get_name());
  } catch (const dirac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dirac::exit_code_for(e.kind());
  }
  return dirac::run(config, std::cout);
}
