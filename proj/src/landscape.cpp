#include "dirac/landscape.hpp"

#include "dirac/error.hpp"
#include "dirac/lattice.hpp"
#include "dirac/parallel.hpp"
#include "dirac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace dirac {

namespace {

std::string coupling_text(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

// Distinct, well-mixed stream per trial.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

SweepReport coupling_sweep(const VectorPotential& a, const std::vector<double>& couplings, const Grid& grid,
                           const SweepOptions& opt) {
  if (couplings.empty()) fail(ErrorKind::InvalidParameter, "coupling sweep needs at least one coupling");
  for (std::size_t i = 1; i < couplings.size(); ++i) {
    if (!(couplings[i] > couplings[i - 1])) fail(ErrorKind::InvalidParameter, "couplings must be strictly increasing");
  }

  SweepReport rep;
  rep.potential_label = a.label();
  rep.couplings = couplings;
  rep.grid = grid;
  const std::size_t count = couplings.size();
  rep.sigma_min.assign(count, 0.0);
  rep.decay_slope.assign(count, 0.0);
  rep.is_crossing.assign(count, false);
  rep.converged.assign(count, false);
  std::vector<ZeroModeDiscriminator> discriminators(count);

  auto solve = [&](std::size_t i, const std::vector<SpinorField>* warm) {
    const double t = couplings[i];
    try {
      const OperatorHandle op = build_weyl(a.scaled(t), grid);
      KernelSearch search;
      search.k = opt.k;
      search.tol = opt.tol;
      search.max_iter = opt.max_iter;
      search.seed = opt.seed;
      search.warm_start = warm;
      KernelReport k = smallest_singular(op, search);
      rep.sigma_min[i] = k.singular_values.front();
      rep.decay_slope[i] = k.decay_slopes.front();
      rep.is_crossing[i] = k.zero_mode.front();
      rep.converged[i] = k.converged;
      discriminators[i] = k.discriminator;
      return k;
    } catch (const Error& e) {
      fail(e.kind(), "coupling t = " + coupling_text(t) + ": " + e.what());
    }
  };

  if (opt.warm_start) {
    std::vector<SpinorField> previous;
    for (std::size_t i = 0; i < count; ++i) previous = solve(i, previous.empty() ? nullptr : &previous).modes;
  } else {
    parallel_for(count, [&](std::size_t i) { solve(i, nullptr); });
  }
  // The wrap-around budget scales with t; report the discriminator at t_max.
  rep.discriminator = discriminators.back();

  for (std::size_t i = 0; i < count;) {
    if (!rep.is_crossing[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < count && rep.is_crossing[j + 1]) ++j;
    rep.crossings.emplace_back(couplings[i], couplings[j]);
    i = j + 1;
  }

  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    rates.push_back(std::abs(rep.sigma_min[i + 1] - rep.sigma_min[i]) / (couplings[i + 1] - couplings[i]));
  }
  rep.lipschitz = median(rates);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double jump = std::abs(rep.sigma_min[i + 1] - rep.sigma_min[i]);
    if (jump > 10.0 * (couplings[i + 1] - couplings[i]) * rep.lipschitz) rep.jump_flags.push_back(static_cast<int>(i));
  }
  return rep;
}

VectorPotential random_perturbation(double epsilon, std::uint64_t seed, const Grid& grid,
                                    const PerturbationFamily& family) {
  if (!(epsilon >= 0.0)) fail(ErrorKind::InvalidParameter, "perturbation size must be non-negative");
  if (family.bumps < 1 || !(family.min_radius > 0.0) || family.max_radius < family.min_radius) {
    fail(ErrorKind::InvalidParameter, "invalid perturbation family");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto direction = [&] {
    const double z = 2.0 * unit(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3R(s * std::cos(phi), s * std::sin(phi), z);
  };

  VectorPotential sum = VectorPotential::zero();
  for (int b = 0; b < family.bumps; ++b) {
    const Vec3R center = family.center_radius * std::cbrt(unit(rng)) * direction();
    const double radius = family.min_radius + (family.max_radius - family.min_radius) * unit(rng);
    const Vec3R orientation = direction();
    sum = sum.plus(bump_potential(center, radius, orientation));
  }

  double weighted_sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3R x = grid.node(i);
    weighted_sup = std::max(weighted_sup, japanese_bracket(x) * sum(x).norm());
  }
  if (!(weighted_sup > 0.0)) fail(ErrorKind::Evaluation, "random perturbation vanishes on the grid");
  const VectorPotential scaled = sum.scaled(epsilon / weighted_sup);
  std::ostringstream label;
  label.precision(6);
  label << "bumps(eps=" << epsilon << ",seed=" << seed << ")";
  return VectorPotential(label.str(), [scaled](const Vec3R& x) { return scaled(x); }, std::nullopt,
                         scaled.support_radius());
}

ProbeReport perturbation_probe(const VectorPotential& a, double epsilon, int trials, std::uint64_t seed,
                               const Grid& grid, const ProbeOptions& opt) {
  if (!(epsilon >= 0.0)) fail(ErrorKind::InvalidParameter, "perturbation size must be non-negative");
  if (trials < 1) fail(ErrorKind::InvalidParameter, "perturbation probe needs at least one trial");

  ProbeReport rep;
  rep.base_label = a.label();
  rep.epsilon = epsilon;
  rep.trials = trials;
  rep.seed = seed;
  rep.grid = grid;
  const auto n = static_cast<std::size_t>(trials);
  rep.sigma.assign(n, 0.0);
  rep.slope.assign(n, 0.0);
  rep.zero_mode.assign(n, false);
  rep.converged.assign(n, false);

  // Every trial starts from the unperturbed modes.
  KernelSearch base_search;
  base_search.k = opt.k;
  base_search.tol = opt.tol;
  base_search.max_iter = opt.max_iter;
  base_search.seed = seed;
  const KernelReport base = smallest_singular(build_weyl(a, grid), base_search);

  parallel_for(n, [&](std::size_t i) {
    const std::uint64_t s = trial_seed(seed, i);
    KernelSearch search = base_search;
    search.seed = s;
    search.warm_start = &base.modes;
    KernelReport k;
    if (epsilon == 0.0) {
      k = base;
    } else {
      const VectorPotential perturbed = a.plus(random_perturbation(epsilon, s, grid, opt.family));
      k = smallest_singular(build_weyl(perturbed, grid), search);
    }
    rep.sigma[i] = k.singular_values.front();
    rep.slope[i] = k.decay_slopes.front();
    rep.zero_mode[i] = k.zero_mode.front();
    rep.converged[i] = k.converged;
  });
  rep.detected = static_cast<int>(std::count(rep.zero_mode.begin(), rep.zero_mode.end(), true));
  rep.kernel_fraction = static_cast<double>(rep.detected) / static_cast<double>(trials);
  return rep;
}

std::vector<DimBoundRecord> dim_bound_study(const std::vector<VectorPotential>& potentials, const Grid& grid,
                                            const DimBoundOptions& opt) {
  if (!(opt.mass > 0.0)) fail(ErrorKind::InvalidParameter, "dimension study needs a positive mass");
  std::vector<DimBoundRecord> out;
  for (const VectorPotential& a : potentials) {
    const DecayReport decay = decay_classify(a);
    if (!std::isfinite(decay.a3_norm)) {
      fail(ErrorKind::InvalidParameter, "potential '" + a.label() + "' is not in L³ (a3 quadrature diverges)");
    }
    DimBoundRecord rec;
    rec.potential_label = a.label();
    rec.a3_cubed = decay.a3_norm * decay.a3_norm * decay.a3_norm;

    KernelSearch search;
    search.k = opt.k;
    search.tol = opt.tol;
    search.max_iter = opt.max_iter;
    search.seed = opt.seed;
    const KernelReport weyl = smallest_singular(build_weyl(a, grid), search);
    rec.detected_dim = weyl.detected_dim;

    const OperatorHandle h = build_dirac(a, opt.mass, grid);
    const EigenReport plus = interior_eigen(h, opt.mass, opt.k, opt.eigen_tol, opt.max_iter, opt.seed);
    const EigenReport minus = interior_eigen(h, -opt.mass, opt.k, opt.eigen_tol, opt.max_iter, opt.seed);
    rec.dim_plus = plus.detected_dim;
    rec.dim_minus = minus.detected_dim;
    rec.converged = weyl.converged && plus.converged && minus.converged;
    rec.ratio = rec.a3_cubed > 0.0 ? rec.detected_dim / rec.a3_cubed : 0.0;
    out.push_back(rec);
  }
  return out;
}

double empirical_dim_constant(const std::vector<DimBoundRecord>& records) {
  double c = 0.0;
  for (const auto& r : records) c = std::max(c, r.ratio);
  return c;
}

}  // namespace dirac
