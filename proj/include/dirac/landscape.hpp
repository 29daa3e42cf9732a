#pragma once

// Where threshold kernels live in the space of potentials: coupling sweeps
// t ↦ σ·(D − tA), random bump perturbations, and dim Ker against ∫|A|³.

#include "dirac/eigensolver.hpp"
#include "dirac/potential.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dirac {

struct SweepOptions {
  int k = 1;
  double tol = 1e-6;
  int max_iter = 800;
  std::uint64_t seed = kDefaultSeed;
  bool warm_start = true;  // start each t from the previous modes
};

struct SweepReport {
  std::string potential_label;
  std::vector<double> couplings;   // strictly increasing
  std::vector<double> sigma_min;
  std::vector<double> decay_slope;
  std::vector<bool> is_crossing;   // discriminator verdict at each t
  std::vector<std::pair<double, double>> crossings;  // maximal runs of crossing samples
  std::vector<bool> converged;
  double lipschitz = 0.0;          // median |Δσ|/Δt over adjacent samples
  std::vector<int> jump_flags;     // i where |σ_{i+1} − σ_i| > 10·Δt·lipschitz
  ZeroModeDiscriminator discriminator;
  Grid grid{15, 1.0};
};

SweepReport coupling_sweep(const VectorPotential& a, const std::vector<double>& couplings, const Grid& grid,
                           const SweepOptions& opt = {});

struct PerturbationFamily {
  int bumps = 3;
  double center_radius = 3.0;  // centres uniform in this ball; |A_LY| ≥ 10% of its peak inside
  double min_radius = 1.5;
  double max_radius = 3.0;
};

/// Sum of random bumps rescaled so that sup over grid nodes of ⟨x⟩|δA(x)|
/// equals epsilon. Deterministic in (seed, grid).
VectorPotential random_perturbation(double epsilon, std::uint64_t seed, const Grid& grid,
                                    const PerturbationFamily& family = {});

struct ProbeOptions {
  int k = 1;
  double tol = 1e-6;
  int max_iter = 800;
  PerturbationFamily family{};
};

struct ProbeReport {
  std::string base_label;
  double epsilon = 0.0;
  int trials = 0;
  int detected = 0;
  double kernel_fraction = 0.0;  // detected / trials
  std::uint64_t seed = 0;
  std::vector<double> sigma;     // per trial
  std::vector<double> slope;
  std::vector<bool> zero_mode;
  std::vector<bool> converged;
  Grid grid{15, 1.0};
};

ProbeReport perturbation_probe(const VectorPotential& a, double epsilon, int trials, std::uint64_t seed,
                               const Grid& grid, const ProbeOptions& opt = {});

struct DimBoundOptions {
  int k = 3;
  double mass = 1.0;
  double tol = 1e-6;
  double eigen_tol = 1e-4;
  int max_iter = 800;
  std::uint64_t seed = kDefaultSeed;
};

struct DimBoundRecord {
  std::string potential_label;
  double a3_cubed = 0.0;   // ∫|A|³ dx
  int detected_dim = 0;    // Weyl kernel
  int dim_plus = 0;        // threshold modes of H at +m
  int dim_minus = 0;       // at −m
  double ratio = 0.0;      // detected_dim / a3_cubed (0 when a3_cubed = 0)
  bool converged = true;
};

std::vector<DimBoundRecord> dim_bound_study(const std::vector<VectorPotential>& potentials, const Grid& grid,
                                            const DimBoundOptions& opt = {});

/// Largest ratio over the records: an empirical lower estimate of the
/// constant in dim Ker ≤ c ∫|A|³.
double empirical_dim_constant(const std::vector<DimBoundRecord>& records);

}  // namespace dirac
