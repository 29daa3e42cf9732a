#pragma once

// Structural checks on threshold modes: the large-|x| limit of r²ψ(rω)
// against its integral formula, and the block structure of eigenfields of
// H at ±m.

#include "dirac/eigensolver.hpp"
#include "dirac/field.hpp"
#include "dirac/potential.hpp"
#include "dirac/quadrature.hpp"

#include <string>
#include <vector>

namespace dirac {

struct AsymptoticOptions {
  int sphere_n = 100;
  std::vector<double> radii{10.0, 20.0, 30.0, 40.0, 50.0};
  VolumeQuadratureOptions quadrature{};
  double max_tail_fraction = 0.1;
};

struct AsymptoticReport {
  std::vector<Vec3R> sphere_samples;
  std::vector<Eigen::VectorXcd> u_values;  // one per sample, 2 or 4 components
  std::vector<double> radii;               // strictly increasing
  // field_values[r][w] = r² ψ(r ω_w)
  std::vector<std::vector<Eigen::VectorXcd>> field_values;
  // rel_error[r][w] = |r²ψ(rω) − u(ω)| / |u(ω)|  (absolute where u(ω) = 0)
  std::vector<std::vector<double>> rel_error;
  std::vector<double> max_rel_error_per_radius;
  double uniformity_spread = 0.0;  // max over ω of the error at the largest radius
  double mean_error_at_largest = 0.0;
  double tail_fraction = 0.0;      // |tail| / |integral| of the moment quadrature
};

/// u(ω) = (i/4π) ∫ [ (ω·A) I₂ + i σ·(ω×A) ] ψ dy, with r²ψ(rω) at opt.radii.
/// Throws ErrorKind::Accuracy when the quadrature tail exceeds
/// opt.max_tail_fraction of the integral.
AsymptoticReport asymptotic_limit_weyl(const VectorPotential& a, const SpinorMap2& psi,
                                       const AsymptoticOptions& opt = {});

/// u(ω) = −(i/4π) (α·ω) ∫ Q f dy.
AsymptoticReport asymptotic_limit_general(const MatrixPotential& q, const SpinorMap4& f,
                                          const AsymptoticOptions& opt = {});

/// The three moments ∫ A_a ψ dy (columns), used by asymptotic_limit_weyl.
Eigen::Matrix<cplx, 2, 3> weyl_moments(const VectorPotential& a, const SpinorMap2& psi,
                                       const VolumeQuadratureOptions& opt, double* tail_fraction = nullptr);

/// r² f(rω) for a lattice field by periodic trilinear interpolation; radii
/// above 0.45 L are rejected (wrap-around).
std::vector<std::vector<Eigen::VectorXcd>> lattice_profile(const SpinorField& f, const std::vector<double>& radii,
                                                           const std::vector<Vec3R>& directions);

enum class Verdict { Consistent, Inconsistent };
std::string to_string(Verdict v);

struct DirectSumReport {
  double upper_norm = 0.0;
  double lower_norm = 0.0;
  double minor_ratio = 0.0;     // minor block norm / total norm
  bool upper_dominant = true;
  double kernel_overlap = 0.0;  // ‖P_ker(dominant block)‖ / ‖dominant block‖
  int kernel_dim = 0;           // accepted kernel modes used for the projection
  Verdict verdict = Verdict::Inconsistent;
};

/// Consistent iff minor_ratio < tol and kernel_overlap > 1 − tol. The kernel
/// basis is the discriminator-accepted modes of `kernel`.
DirectSumReport verify_direct_sum(const SpinorField& f, const KernelReport& kernel, double tol);

}  // namespace dirac
