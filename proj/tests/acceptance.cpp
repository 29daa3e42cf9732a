// Acceptance run: one PASS/FAIL line per criterion, tolerances as agreed
// for the artifact. Exit status is 0 only if every criterion passes.
//
// Usage: acceptance [criterion numbers...]   (default: all, 1 to 8)

#include "dirac/config.hpp"
#include "dirac/decay.hpp"
#include "dirac/eigensolver.hpp"
#include "dirac/landscape.hpp"
#include "dirac/potential.hpp"
#include "dirac/report.hpp"
#include "dirac/spinor.hpp"
#include "dirac/threshold.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace dirac;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // records a named check; the detail line lists every measured value
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [x]");
  }
};

std::string num(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

void spinor_algebra(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  const Mat4C id4 = Mat4C::Identity();
  for (int j = 1; j <= 3; ++j) {
    for (int k = 1; k <= 3; ++k) {
      worst = std::max(worst, (alpha(j) * alpha(k) + alpha(k) * alpha(j) - (j == k ? 2.0 : 0.0) * id4).cwiseAbs().maxCoeff());
      Mat2C expect = (j == k ? 1.0 : 0.0) * Mat2C::Identity();
      for (int l = 1; l <= 3; ++l) expect += kI * static_cast<double>(levi_civita(j, k, l)) * pauli(l);
      worst = std::max(worst, (pauli(j) * pauli(k) - expect).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, (alpha(j) * beta() + beta() * alpha(j)).cwiseAbs().maxCoeff());
  }
  worst = std::max(worst, (beta() * beta() - id4).cwiseAbs().maxCoeff());
  o.check(worst == 0.0, "exact identities max deviation " + num(worst));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  double prod = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3R u(g(rng), g(rng), g(rng)), v(g(rng), g(rng), g(rng));
    const Mat2C d = pauli_dot(u) * pauli_dot(v) - (u.dot(v) * Mat2C::Identity() + kI * pauli_dot(u.cross(v)));
    prod = std::max(prod, d.cwiseAbs().maxCoeff() / (1.0 + u.norm() * v.norm()));
  }
  o.check(prod < 1e-14, "pauli_dot product identity " + num(prod));
  const double t = seconds_since(t0);
  o.check(t < 1.0, "runtime " + num(t) + " s");
}

// ---------------------------------------------------------------- 2

void residual_oracle(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const VectorPotential a = loss_yau_potential();
  const SpinorMap2 psi = loss_yau_zero_mode();
  const Spinor2 phi0(1.0, 0.0);
  auto residual = [&](const Vec3R& x, const std::array<Spinor2, 3>& grad) {
    const Spinor2 p = psi(x);
    const Vec3R ax = a(x);
    Spinor2 out = Spinor2::Zero();
    for (int j = 0; j < 3; ++j) out += pauli(j + 1) * (-kI * grad[j] - ax[j] * p);
    return out.norm() / (1.0 + p.norm());
  };
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 3.0);
  double analytic = 0.0, richardson = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3R x(g(rng), g(rng), g(rng));
    // ψ = (1+r²)^{-3/2}(I + iσ·x)φ₀, differentiated by hand
    const double b = 1.0 + x.squaredNorm();
    const Spinor2 core = (Mat2C::Identity() + kI * pauli_dot(x)) * phi0;
    std::array<Spinor2, 3> exact, fd;
    const double h = 1e-4;
    for (int j = 0; j < 3; ++j) {
      exact[j] = -3.0 * x[j] * std::pow(b, -2.5) * core + std::pow(b, -1.5) * kI * (pauli(j + 1) * phi0);
      const Vec3R e = Vec3R::Unit(j);
      const Spinor2 d1 = (psi(x + h * e) - psi(x - h * e)) / (2.0 * h);
      const Spinor2 d2 = (psi(x + 0.5 * h * e) - psi(x - 0.5 * h * e)) / h;
      fd[j] = (4.0 * d2 - d1) / 3.0;
    }
    analytic = std::max(analytic, residual(x, exact));
    richardson = std::max(richardson, residual(x, fd));
  }
  o.check(analytic < 1e-8, "analytic max " + num(analytic) + " < 1e-8");
  o.check(richardson < 1e-5, "richardson max " + num(richardson) + " < 1e-5");
  const double t = seconds_since(t0);
  o.check(t < 10.0, "runtime " + num(t) + " s");
}

// ---------------------------------------------------------------- shared solves

struct Shared {
  Grid grid{63, 40.0};
  std::optional<KernelReport> kernel;  // loss-yau, k = 3

  const KernelReport& ly_kernel() {
    if (!kernel) {
      const auto t0 = std::chrono::steady_clock::now();
      kernel = smallest_singular(build_weyl(loss_yau_potential(), grid), 3, 1e-6, 800);
      std::printf("  (kernel solve at (63, 40): %.1f s, %d iterations)\n", seconds_since(t0), kernel->iterations);
      std::fflush(stdout);
    }
    return *kernel;
  }
};

double overlap(const SpinorField& a, const SpinorField& b) { return std::abs(a.inner(b)) / (a.norm() * b.norm()); }

// ---------------------------------------------------------------- 3

void lattice_zero_mode(Outcome& o, Shared& s) {
  const KernelReport& k = s.ly_kernel();
  o.check(k.converged, std::string("converged ") + (k.converged ? "yes" : "no"));
  const double s1 = k.singular_values[0], s2 = k.singular_values[1];
  const SpinorField psi = SpinorField::sample(s.grid, loss_yau_zero_mode());
  const double ov = overlap(k.modes[0], psi);
  o.check(s1 < 1e-2, "sigma1 " + num(s1) + " < 1e-2");
  o.check(ov > 0.99, "overlap with psi_LY " + num(ov) + " > 0.99");
  o.check(s2 > 0.1, "sigma2 " + num(s2) + " > 0.1");

  KernelSearch free;
  free.k = 4;
  free.tol = 1e-8;
  free.deflate_constants = false;
  const KernelReport f = smallest_singular(build_weyl(VectorPotential::zero(), s.grid), free);
  int below = 0;
  for (double v : f.singular_values) below += v < 0.5 * s.grid.fundamental();
  o.check(f.converged && below == 2, "A=0 singular values below pi/L: " + std::to_string(below) + " (expect 2)");
}

// ---------------------------------------------------------------- 4

void direct_sum(Outcome& o, Shared& s) {
  const KernelReport& k = s.ly_kernel();
  const VectorPotential a = loss_yau_potential();
  const double tol = 1e-4;
  const int iters = 3000;

  const OperatorHandle h1 = build_dirac(a, 1.0, s.grid);
  const EigenReport plus = interior_eigen(h1, 1.0, 1, tol, iters);
  const EigenReport minus = interior_eigen(h1, -1.0, 1, tol, iters);
  o.check(plus.converged && minus.converged, "converged");
  const double ep = plus.eigenvalues[0], em = minus.eigenvalues[0];
  o.check(std::abs(ep - 1.0) < 1e-2, "lambda(+1) " + num(ep));
  o.check(std::abs(em + 1.0) < 1e-2, "lambda(-1) " + num(em));
  const DirectSumReport dp = verify_direct_sum(plus.eigenfields[0], k, 1e-2);
  const DirectSumReport dm = verify_direct_sum(minus.eigenfields[0], k, 1e-2);
  o.check(dp.upper_dominant && dp.minor_ratio < 1e-2, "minor ratio at +m " + num(dp.minor_ratio));
  o.check(!dm.upper_dominant && dm.minor_ratio < 1e-2, "minor ratio at -m " + num(dm.minor_ratio));
  o.check(dp.kernel_overlap > 0.99 && dm.kernel_overlap > 0.99,
          "kernel overlap " + num(dp.kernel_overlap) + " / " + num(dm.kernel_overlap));
  o.check(plus.detected_dim == minus.detected_dim,
          "dims " + std::to_string(plus.detected_dim) + " / " + std::to_string(minus.detected_dim));

  std::vector<SpinorField> fields;
  for (double m : {0.5, 2.0}) {
    const EigenReport r = interior_eigen(build_dirac(a, m, s.grid), m, 1, tol, iters);
    o.check(r.converged, "converged at m=" + num(m));
    fields.push_back(r.eigenfields[0]);
  }
  fields.push_back(plus.eigenfields[0]);
  double worst = 1.0;
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = i + 1; j < fields.size(); ++j) worst = std::min(worst, overlap(fields[i], fields[j]));
  o.check(worst > 0.999, "m-independence min overlap " + num(worst) + " > 0.999");
}

// ---------------------------------------------------------------- 5

void asymptotic_limit(Outcome& o) {
  const VectorPotential a = loss_yau_potential();
  const SpinorMap2 psi = loss_yau_zero_mode();
  const AsymptoticReport r = asymptotic_limit_weyl(a, psi);
  double worst = 0.0;
  for (std::size_t w = 0; w < r.sphere_samples.size(); ++w) {
    const Spinor2 exact = kI * pauli_dot(r.sphere_samples[w]) * Spinor2(1.0, 0.0);
    worst = std::max(worst, (Spinor2(r.u_values[w]) - exact).norm() / exact.norm());
  }
  o.check(r.sphere_samples.size() == 100 && worst < 1e-2, "u vs analytic " + num(worst) + " < 1e-2");
  std::size_t i20 = 0, i50 = 0;
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    if (r.radii[i] == 20.0) i20 = i;
    if (r.radii[i] == 50.0) i50 = i;
  }
  const double e50 = r.max_rel_error_per_radius[i50];
  o.check(r.radii[i50] == 50.0 && e50 < 0.02, "error at r=50 " + num(e50, 7) + " < 0.02");
  bool decreasing = r.radii[i20] == 20.0;
  for (std::size_t i = i20 + 1; i <= i50; ++i)
    decreasing = decreasing && r.max_rel_error_per_radius[i] < r.max_rel_error_per_radius[i - 1];
  o.check(decreasing, "decreasing from r=20 (" + num(r.max_rel_error_per_radius[i20]) + ") to r=50");

  const MatrixPotential q = wrap_as_matrix_potential(a, [](const Vec3R&) { return 0.0; });
  const SpinorMap4 f = [psi](const Vec3R& x) {
    Spinor4 v = Spinor4::Zero();
    v.head<2>() = psi(x);
    return v;
  };
  const AsymptoticReport g = asymptotic_limit_general(q, f);
  double red = 0.0;
  for (std::size_t w = 0; w < r.u_values.size(); ++w) {
    const Eigen::VectorXcd& u4 = g.u_values[w];
    red = std::max(red, (u4.head(2) - r.u_values[w]).norm() / r.u_values[w].norm());
    red = std::max(red, u4.tail(2).norm() / r.u_values[w].norm());
  }
  o.check(red < 1e-2, "general formula block reduction " + num(red) + " < 1e-2");
}

// ---------------------------------------------------------------- 6

void resonance_proxy(Outcome& o, Shared& s) {
  const KernelReport& k = s.ly_kernel();
  const DecayFit fit = decay_fit(k.modes[0], 5.0, 18.0);
  o.check(std::abs(fit.slope + 2.0) <= 0.3, "mode slope on [5, 18] " + num(fit.slope) + " (expect -2 +- 0.3)");

  const SpinorMap2 slow = [](const Vec3R& x) { return Spinor2(1.0 / std::sqrt(1.0 + x.squaredNorm()), 0.0); };
  const SpinorField planted = SpinorField::sample(s.grid, slow);
  const DecayFit pf = decay_fit(planted, 5.0, 18.0);
  const bool rejected = !k.discriminator.accepts(0.0, pf.slope);
  o.check(rejected, "planted <x>^-1 slope " + num(pf.slope) + (rejected ? " rejected" : " accepted"));
}

// ---------------------------------------------------------------- 7

void sparseness(Outcome& o) {
  const Grid grid(31, 30.0);
  RunConfig defaults;
  const std::vector<double> t = coupling_grid(defaults);
  const SweepReport sw = coupling_sweep(loss_yau_potential(), t, grid);
  bool conv = true;
  for (bool c : sw.converged) conv = conv && c;
  o.check(conv, "sweep converged");
  const bool one = sw.crossings.size() == 1 && sw.crossings[0].first <= 1.0 && 1.0 <= sw.crossings[0].second;
  std::string runs;
  for (const auto& [lo, hi] : sw.crossings) runs += "[" + num(lo) + "," + num(hi) + "]";
  o.check(one, "crossing intervals " + (runs.empty() ? std::string("none") : runs));
  double weak = 1e300;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] <= 0.5 + 1e-12) weak = std::min(weak, sw.sigma_min[i]);
  o.check(weak > 0.05, "min sigma for t <= 0.5: " + num(weak) + " > 0.05");

  for (double eps : {0.1, 0.2}) {
    const ProbeReport z = perturbation_probe(VectorPotential::zero(), eps, 20, kDefaultSeed, grid);
    o.check(z.kernel_fraction == 0.0, "probe A=0 eps=" + num(eps) + " fraction " + num(z.kernel_fraction));
    const ProbeReport l = perturbation_probe(loss_yau_potential(), eps, 20, kDefaultSeed, grid);
    o.check(l.kernel_fraction <= 0.1, "probe loss-yau eps=" + num(eps) + " fraction " + num(l.kernel_fraction) + " <= 0.1");
  }

  const std::vector<VectorPotential> studied{loss_yau_potential(), loss_yau_potential().scaled(0.3),
                                             bump_potential(Vec3R(0.5, 0, 0), 3.0, Vec3R(0, 0.8, 0.4))};
  const auto recs = dim_bound_study(studied, grid);
  std::string dims;
  bool equal = true;
  for (const auto& r : recs) {
    equal = equal && r.dim_plus == r.dim_minus;
    dims += " " + std::to_string(r.dim_plus) + "/" + std::to_string(r.dim_minus);
  }
  o.check(equal, "+-m dims" + dims);
}

// ---------------------------------------------------------------- 8

void infrastructure(Outcome& o, Shared& s) {
  const SpinorField& mode = s.ly_kernel().modes[0];
  std::stringstream bin;
  write_spnf(mode, bin);
  const std::string bytes = bin.str();
  std::stringstream back_in(bytes);
  const SpinorField back = read_spnf(back_in);
  std::stringstream again;
  write_spnf(back, again);
  o.check(back == mode && again.str() == bytes, "SPNF round trip bit-exact");

  RunConfig c;
  c.command = Command::Probe;
  c.potential_params = {0.75};
  c.seed = 123456789;
  c.radii = {12.5, 25};
  o.check(parse_config(serialize(c)) == c, "config round trip");

  const Grid g(15, 20.0);
  const OperatorHandle t = build_weyl(loss_yau_potential(), g);
  const KernelReport k1 = smallest_singular(t, 2, 1e-6, 400, 99);
  const KernelReport k2 = smallest_singular(t, 2, 1e-6, 400, 99);
  const ProbeReport p1 = perturbation_probe(loss_yau_potential(), 0.1, 2, 99, g);
  const ProbeReport p2 = perturbation_probe(loss_yau_potential(), 0.1, 2, 99, g);
  o.check(kernel_document(k1).serialize() == kernel_document(k2).serialize() &&
              probe_document(p1).serialize() == probe_document(p2).serialize(),
          "identical seeds reproduce reports");

  const SweepReport sw = coupling_sweep(loss_yau_potential(), {0.5, 1.0}, g);
  const DecayFit fit = decay_fit(k1.modes[0], 2.5, 9.0);
  const bool stable = sweep_csv(sw).str() == sweep_csv(sw).str() && sweep_plot(sw) == sweep_plot(sw) &&
                      decay_csv(fit).str() == decay_csv(fit).str() && decay_plot(fit, "m") == decay_plot(fit, "m");
  o.check(stable, "CSV/SVG byte-stable");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};

  Shared shared;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"spinor algebra", [](Outcome& o) { spinor_algebra(o); }},
      {"loss-yau residual oracle", [](Outcome& o) { residual_oracle(o); }},
      {"lattice zero mode at (63, 40)", [&](Outcome& o) { lattice_zero_mode(o, shared); }},
      {"direct sum at +-m, m-independence", [&](Outcome& o) { direct_sum(o, shared); }},
      {"asymptotic limit formula", [](Outcome& o) { asymptotic_limit(o); }},
      {"decay of the lattice mode, resonance rejection", [&](Outcome& o) { resonance_proxy(o, shared); }},
      {"sparseness at (31, 30): sweep, probe, dimensions", [](Outcome& o) { sparseness(o); }},
      {"infrastructure", [&](Outcome& o) { infrastructure(o, shared); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.count(id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    std::printf("[%s] criterion %d, %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, wanted.size());
  return failed == 0 ? 0 : 1;
}
