#pragma once

// Zero-mode detection for T_h and threshold eigenpairs of H_h.
//
// Both solvers run LOBPCG on a squared operator (T_h² = T_h†T_h, or
// (H_h − target)²) with a Fourier-diagonal preconditioner built from the
// free symbol, and deflate the constant spinors that the periodic box adds
// to the kernel at A = 0.

#include "dirac/decay.hpp"
#include "dirac/lattice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dirac {

inline constexpr std::uint64_t kDefaultSeed = 20080101;

struct KernelReport {
  std::vector<double> singular_values;  // ascending
  std::vector<SpinorField> modes;       // unit discrete L² norm, orthonormal
  std::vector<double> residuals;        // ‖T_h ψ_i‖
  std::vector<double> decay_slopes;     // lattice decay fit of each mode
  std::vector<bool> zero_mode;          // discriminator verdict per mode
  int detected_dim = 0;
  ZeroModeDiscriminator discriminator;
  bool deflated_constants = true;
  Grid grid{15, 1.0};
  std::string potential_label;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = kDefaultSeed;
};

struct EigenReport {
  std::vector<double> eigenvalues;      // ordered by distance to target
  std::vector<SpinorField> eigenfields; // unit discrete L² norm
  std::vector<double> residuals;        // ‖(H_h − λ)f‖
  std::vector<double> effective_sigma;  // √|λ² − m²|, the matching T_h singular value
  std::vector<double> decay_slopes;     // decay of the dominant 2-spinor block
  std::vector<bool> threshold_mode;     // discriminator verdict per eigenpair
  int detected_dim = 0;
  ZeroModeDiscriminator discriminator;
  double target = 0.0;
  double mass = 0.0;
  Grid grid{15, 1.0};
  std::string potential_label;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = kDefaultSeed;
};

struct KernelSearch {
  int k = 3;
  double tol = 1e-6;
  int max_iter = 800;
  std::uint64_t seed = kDefaultSeed;
  bool deflate_constants = true;
  /// Optional starting vectors (e.g. the previous point of a sweep).
  const std::vector<SpinorField>* warm_start = nullptr;
};

KernelReport smallest_singular(const OperatorHandle& t, const KernelSearch& search);
KernelReport smallest_singular(const OperatorHandle& t, int k, double tol, int max_iter,
                               std::uint64_t seed = kDefaultSeed);

EigenReport interior_eigen(const OperatorHandle& h, double target, int k, double tol, int max_iter = 1500,
                           std::uint64_t seed = kDefaultSeed);

/// ⟨f, H f⟩ / ⟨f, f⟩ (the imaginary part is dropped; see rayleigh_quotient_complex).
double rayleigh_quotient(const OperatorHandle& h, const SpinorField& f);
cplx rayleigh_quotient_complex(const OperatorHandle& h, const SpinorField& f);

}  // namespace dirac
