#include "dirac/run.hpp"

#include "dirac/error.hpp"
#include "dirac/lattice.hpp"
#include "dirac/parallel.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dirac {

namespace {

namespace fs = std::filesystem;

class RunLog {
 public:
  explicit RunLog(const fs::path& path) : os_(path, std::ios::trunc) {}
  void line(const std::string& level, const std::string& msg) {
    if (os_) os_ << level << ": " << msg << '\n';
    os_.flush();
  }

 private:
  std::ofstream os_;
};

class Summary {
 public:
  void row(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void row(const std::string& key, double value) { row(key, format_number(value)); }
  void print(std::ostream& out, const std::string& title) const {
    std::size_t width = 0;
    for (const auto& r : rows_) width = std::max(width, r.first.size());
    out << title << '\n' << std::string(title.size(), '-') << '\n';
    for (const auto& [k, v] : rows_) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  RunLog& log;
  Summary summary;
  bool converged = true;

  void write(const std::string& name, const std::string& content) {
    write_text_file(dir / name, content);
    log.line("info", "wrote " + name);
  }
  Grid grid() const { return Grid(cfg.n, cfg.L); }
  VectorPotential potential() const { return make_potential(cfg.potential, cfg.potential_params); }
  KernelSearch search() const {
    KernelSearch s;
    s.k = cfg.k;
    s.tol = cfg.tol;
    s.max_iter = cfg.max_iter;
    s.seed = cfg.seed;
    return s;
  }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ψ_LY is the only analytic zero mode available: loss-yau at unit scale.
bool has_analytic_mode(const RunConfig& c) {
  return c.potential == "loss-yau" && (c.potential_params.empty() || c.potential_params.front() == 1.0);
}

void run_check_potential(Context& ctx) {
  const VectorPotential a = ctx.potential();
  const DecayReport r = decay_classify(a);
  ctx.write("decay.txt", decay_document(a.label(), r).serialize());
  ctx.summary.row("potential", a.label());
  ctx.summary.row("A1 satisfied", yes_no(r.a1_satisfied));
  if (r.a1) ctx.summary.row("A1 rho", r.a1->rho);
  ctx.summary.row("compact support", yes_no(r.compact_support));
  ctx.summary.row("A2 satisfied", yes_no(r.a2_satisfied));
  ctx.summary.row("A3 finite", yes_no(std::isfinite(r.a3_norm)));
  ctx.summary.row("A3 norm", r.a3_norm);
  ctx.summary.row("weighted sup norm", r.sup_norm_weighted);
  if (ctx.cfg.plots && !r.compact_support) {
    DecayFit fit;
    for (std::size_t i = 0; i < r.shell_radii.size(); ++i) {
      if (r.shell_sup[i] > 0.0) {
        fit.shell_radius.push_back(r.shell_radii[i]);
        fit.shell_sup.push_back(r.shell_sup[i]);
      }
    }
    if (r.a1) {
      fit.slope = -r.a1->rho;
      fit.intercept = std::log(r.a1->constant);
    }
    if (!fit.shell_radius.empty()) ctx.write("decay.svg", decay_plot(fit, "decay of |A|: " + a.label()));
  }
}

KernelReport run_kernel_solve(Context& ctx, const OperatorHandle& t) {
  const KernelReport rep = smallest_singular(t, ctx.search());
  ctx.converged = ctx.converged && rep.converged;
  ctx.write("kernel.txt", kernel_document(rep).serialize());
  ctx.summary.row("grid", std::to_string(ctx.cfg.n) + " points, L = " + format_number(ctx.cfg.L));
  ctx.summary.row("iterations", std::to_string(rep.iterations) + (rep.converged ? "" : " (not converged)"));
  ctx.summary.row("zero-mode threshold", rep.discriminator.sigma_threshold);
  for (std::size_t i = 0; i < rep.singular_values.size(); ++i) {
    ctx.summary.row("sigma_" + std::to_string(i + 1), format_number(rep.singular_values[i]) + "  slope " +
                                                           format_fixed(rep.decay_slopes[i], 3) +
                                                           (rep.zero_mode[i] ? "  zero mode" : ""));
  }
  ctx.summary.row("detected kernel dim", std::to_string(rep.detected_dim));
  return rep;
}

void run_kernel(Context& ctx) {
  const Grid g = ctx.grid();
  const VectorPotential a = ctx.potential();
  ctx.summary.row("potential", a.label());
  const KernelReport rep = run_kernel_solve(ctx, build_weyl(a, g));
  const auto [lo, hi] = lattice_decay_window(g);
  try {
    const DecayFit fit = decay_fit(rep.modes.front(), lo, hi);
    ctx.write("decay.csv", decay_csv(fit).str());
    if (ctx.cfg.plots) ctx.write("decay.svg", decay_plot(fit, "decay of the lowest mode: " + a.label()));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateFit) throw;
    ctx.log.line("warning", std::string("no decay plot: ") + e.what());
  }
  if (ctx.cfg.dump_fields) {
    for (std::size_t i = 0; i < rep.modes.size(); ++i) {
      write_spnf(rep.modes[i], ctx.dir / ("mode_" + std::to_string(i + 1) + ".spnf"));
    }
  }
}

void run_threshold(Context& ctx) {
  const Grid g = ctx.grid();
  const VectorPotential a = ctx.potential();
  ctx.summary.row("potential", a.label());
  const KernelReport kernel = run_kernel_solve(ctx, build_weyl(a, g));
  const double target = ctx.cfg.target_sign * ctx.cfg.mass;
  const EigenReport eig =
      interior_eigen(build_dirac(a, ctx.cfg.mass, g), target, 1, ctx.cfg.eigen_tol, 4 * ctx.cfg.max_iter, ctx.cfg.seed);
  ctx.converged = ctx.converged && eig.converged;
  ctx.write("eigen.txt", eigen_document(eig).serialize());
  const DirectSumReport ds = verify_direct_sum(eig.eigenfields.front(), kernel, ctx.cfg.direct_sum_tol);
  ctx.write("direct_sum.txt", direct_sum_document(ds).serialize());
  ctx.summary.row("target", target);
  ctx.summary.row("eigenvalue", eig.eigenvalues.front());
  ctx.summary.row("residual", eig.residuals.front());
  ctx.summary.row("minor block ratio", ds.minor_ratio);
  ctx.summary.row("kernel overlap", ds.kernel_overlap);
  ctx.summary.row("verdict", to_string(ds.verdict));
  if (ctx.cfg.dump_fields) write_spnf(eig.eigenfields.front(), ctx.dir / "eigenfield.spnf");
}

void run_asymptotic(Context& ctx) {
  if (!has_analytic_mode(ctx.cfg)) {
    fail(ErrorKind::Validation, "parameter 'potential': the asymptotic command needs an analytic zero mode "
                                "(loss-yau at unit scale), got '" + ctx.cfg.potential + "'");
  }
  const VectorPotential a = ctx.potential();
  const SpinorMap2 psi = loss_yau_zero_mode();
  AsymptoticOptions opt;
  opt.sphere_n = ctx.cfg.sphere_n;
  opt.radii = ctx.cfg.radii;
  const AsymptoticReport weyl = asymptotic_limit_weyl(a, psi, opt);
  const AsymptoticReport general = asymptotic_limit_general(
      wrap_as_matrix_potential(a, [](const Vec3R&) { return 0.0; }),
      [&](const Vec3R& x) {
        Spinor4 f = Spinor4::Zero();
        f.head<2>() = psi(x);
        return f;
      },
      opt);
  double reduction = 0.0;
  for (std::size_t w = 0; w < weyl.u_values.size(); ++w) {
    const double denom = weyl.u_values[w].norm();
    const double diff = (general.u_values[w].head(2) - weyl.u_values[w]).norm();
    reduction = std::max(reduction, denom > 0.0 ? diff / denom : diff);
  }
  TextDocument doc = asymptotic_document(weyl);
  doc.set("block_reduction", "max_rel_deviation", reduction);
  ctx.write("asymptotic.txt", doc.serialize());
  ctx.write("asymptotic.csv", asymptotic_csv(weyl).str());
  if (ctx.cfg.plots) ctx.write("asymptotic.svg", asymptotic_plot(weyl));
  ctx.summary.row("potential", a.label());
  ctx.summary.row("sphere samples", std::to_string(weyl.sphere_samples.size()));
  for (std::size_t i = 0; i < weyl.radii.size(); ++i) {
    ctx.summary.row("max rel error r=" + format_number(weyl.radii[i]), weyl.max_rel_error_per_radius[i]);
  }
  ctx.summary.row("4-spinor reduction", reduction);
  ctx.summary.row("quadrature tail", weyl.tail_fraction);
}

void run_sweep(Context& ctx) {
  const VectorPotential a = ctx.potential();
  SweepOptions opt;
  opt.k = 1;
  opt.tol = ctx.cfg.tol;
  opt.max_iter = ctx.cfg.max_iter;
  opt.seed = ctx.cfg.seed;
  const SweepReport rep = coupling_sweep(a, coupling_grid(ctx.cfg), ctx.grid(), opt);
  for (bool c : rep.converged) ctx.converged = ctx.converged && c;
  ctx.write("sweep.csv", sweep_csv(rep).str());
  ctx.write("sweep.txt", sweep_document(rep).serialize());
  if (ctx.cfg.plots) ctx.write("sweep.svg", sweep_plot(rep));
  ctx.summary.row("potential", a.label());
  for (std::size_t i = 0; i < rep.couplings.size(); ++i) {
    ctx.summary.row("t=" + format_number(rep.couplings[i]),
                    format_number(rep.sigma_min[i]) + (rep.is_crossing[i] ? "  crossing" : ""));
  }
  ctx.summary.row("crossing intervals", std::to_string(rep.crossings.size()));
  ctx.summary.row("continuity flags", std::to_string(rep.jump_flags.size()));
}

void run_probe(Context& ctx) {
  const VectorPotential a = ctx.potential();
  ProbeOptions opt;
  opt.k = 1;
  opt.tol = ctx.cfg.tol;
  opt.max_iter = ctx.cfg.max_iter;
  const ProbeReport rep = perturbation_probe(a, ctx.cfg.epsilon, ctx.cfg.trials, ctx.cfg.seed, ctx.grid(), opt);
  for (bool c : rep.converged) ctx.converged = ctx.converged && c;
  ctx.write("probe.txt", probe_document(rep).serialize());
  ctx.summary.row("base potential", rep.base_label);
  ctx.summary.row("epsilon", rep.epsilon);
  ctx.summary.row("trials", std::to_string(rep.trials));
  ctx.summary.row("detected", std::to_string(rep.detected));
  ctx.summary.row("kernel fraction", rep.kernel_fraction);
}

void run_dimbound(Context& ctx) {
  const VectorPotential base = ctx.potential();
  std::vector<VectorPotential> list;
  for (double s : ctx.cfg.scales) list.push_back(s == 1.0 ? base : base.scaled(s));
  DimBoundOptions opt;
  opt.k = ctx.cfg.k;
  opt.mass = ctx.cfg.mass;
  opt.tol = ctx.cfg.tol;
  opt.eigen_tol = ctx.cfg.eigen_tol;
  opt.max_iter = ctx.cfg.max_iter;
  opt.seed = ctx.cfg.seed;
  const auto records = dim_bound_study(list, ctx.grid(), opt);
  for (const auto& r : records) ctx.converged = ctx.converged && r.converged;
  ctx.write("dimbound.txt", dim_bound_document(records).serialize());
  for (const auto& r : records) {
    ctx.summary.row(r.potential_label, "dim " + std::to_string(r.detected_dim) + "  +m " + std::to_string(r.dim_plus) +
                                           "  -m " + std::to_string(r.dim_minus) + "  int|A|^3 " +
                                           format_number(r.a3_cubed));
  }
  ctx.summary.row("empirical constant", empirical_dim_constant(records));
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::Configuration:
    case ErrorKind::Validation:
      return kExitValidation;
    case ErrorKind::Accuracy:
      return kExitAccuracy;
    default:
      return kExitFailure;
  }
}

int run(const RunConfig& config, std::ostream& out) {
  try {
    validate(config);
  } catch (const Error& e) {
    out << "error: " << e.what() << '\n';
    // the run log lives in the output directory; write it only if that is usable
    if (!config.output_dir.empty()) {
      std::error_code ec;
      fs::create_directories(config.output_dir, ec);
      if (!ec) RunLog(fs::path(config.output_dir) / "run.log").line("error", std::string(to_string(e.kind())) + ": " + e.what());
    }
    return exit_code_for(e.kind());
  }

  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    out << "error: cannot create output directory '" << dir.string() << "': " << ec.message() << '\n';
    return kExitFailure;
  }
  RunLog log(dir / "run.log");
  set_thread_count(config.threads);
  if (const char* env = std::getenv("DIRAC_THRESHOLD_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) set_thread_count(n);
  }
  log.line("info", "command " + to_string(config.command) + ", threads " + std::to_string(thread_count()));

  Context ctx{config, dir, log, {}, true};
  try {
    ctx.write("config.ini", serialize(config));
    ctx.write("manifest.txt", manifest(config).serialize());
    switch (config.command) {
      case Command::CheckPotential: run_check_potential(ctx); break;
      case Command::Kernel: run_kernel(ctx); break;
      case Command::Threshold: run_threshold(ctx); break;
      case Command::Asymptotic: run_asymptotic(ctx); break;
      case Command::Sweep: run_sweep(ctx); break;
      case Command::Probe: run_probe(ctx); break;
      case Command::DimBound: run_dimbound(ctx); break;
    }
  } catch (const Error& e) {
    log.line("error", std::string(to_string(e.kind())) + ": " + e.what());
    out << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    log.line("error", e.what());
    out << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  ctx.summary.print(out, to_string(config.command));
  if (!ctx.converged) {
    log.line("error", "solver did not converge within max_iter = " + std::to_string(config.max_iter));
    out << "solver did not converge (max_iter = " << config.max_iter << ")\n";
    return kExitNoConvergence;
  }
  log.line("info", "done");
  return kExitOk;
}

}  // namespace dirac
