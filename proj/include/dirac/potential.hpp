#pragma once

// Analytic vector potentials A(x) and 4×4 matrix potentials Q(x), plus the
// numerical classification of a potential's decay.

#include "dirac/spinor.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

/// Pointwise bound |A_j(x)| ≤ constant · ⟨x⟩^(−rho).
struct DecayClaim {
  double rho = 0.0;
  double constant = 0.0;
};

using ScalarField = std::function<double(const Vec3R&)>;
using SpinorMap2 = std::function<Spinor2(const Vec3R&)>;
using SpinorMap4 = std::function<Spinor4(const Vec3R&)>;

class VectorPotential {
 public:
  using Eval = std::function<Vec3R(const Vec3R&)>;

  VectorPotential(std::string label, Eval eval, std::optional<DecayClaim> claim = std::nullopt,
                  std::optional<double> support_radius = std::nullopt);

  static VectorPotential zero();

  Vec3R operator()(const Vec3R& x) const { return (*eval_)(x); }

  const std::string& label() const { return label_; }
  const std::optional<DecayClaim>& claimed_decay() const { return claim_; }
  /// Radius of a ball about the origin containing the support, when compact.
  const std::optional<double>& support_radius() const { return support_radius_; }

  /// x ↦ t·A(x)
  VectorPotential scaled(double t) const;

  /// x ↦ A(x) + B(x)
  VectorPotential plus(const VectorPotential& other) const;

 private:
  std::string label_;
  std::shared_ptr<const Eval> eval_;
  std::optional<DecayClaim> claim_;
  std::optional<double> support_radius_;
};

class MatrixPotential {
 public:
  using Eval = std::function<Mat4C(const Vec3R&)>;

  MatrixPotential(std::string label, Eval eval, std::optional<DecayClaim> claim = std::nullopt);

  Mat4C operator()(const Vec3R& x) const { return (*eval_)(x); }
  const std::string& label() const { return label_; }
  const std::optional<DecayClaim>& claimed_decay() const { return claim_; }

 private:
  std::string label_;
  std::shared_ptr<const Eval> eval_;
  std::optional<DecayClaim> claim_;
};

/// Loss–Yau potential with w = (0,0,1):
///   A(x) = 3(1+|x|²)⁻² [ (1−|x|²) w + 2(w·x) x + 2 w×x ],  |A(x)| = 3⟨x⟩⁻².
VectorPotential loss_yau_potential();

/// Its zero mode ψ(x) = (1+|x|²)^(−3/2) (I₂ + i σ·x) (1,0)ᵀ, with
/// σ·(D − A)ψ = 0 for D = −i∇.
SpinorMap2 loss_yau_zero_mode();

/// Analytic gradient ∂_j ψ_LY (used by the residual oracle).
std::array<Spinor2, 3> loss_yau_zero_mode_gradient(const Vec3R& x);

/// Smooth bump amplitude·exp(1 − 1/(1 − s²)), s = |x − center|/radius < 1.
VectorPotential bump_potential(const Vec3R& center, double radius, const Vec3R& amplitude);

/// Q(x) = −α·A(x) + q(x) I₄
MatrixPotential wrap_as_matrix_potential(const VectorPotential& a, const ScalarField& q,
                                         std::optional<DecayClaim> q_decay = std::nullopt);

/// Named families for configuration files and the CLI:
///   zero, loss-yau [scale], bump cx cy cz radius ax ay az
VectorPotential make_potential(const std::string& name, const std::vector<double>& params);

struct DecayReport {
  std::optional<DecayClaim> a1;          // fitted (ρ, C); absent for compact support or A ≡ 0
  bool a1_satisfied = false;             // ρ_fit > 1, or compact support
  bool compact_support = false;          // identically zero tail on the probe set
  bool a2_satisfied = false;
  double a3_norm = 0.0;                  // (∫|A|³ dx)^(1/3)
  double sup_norm_weighted = 0.0;        // sup ⟨x⟩|A(x)| over the probe set
  double probe_radius_max = 0.0;
  std::vector<double> shell_radii;
  std::vector<double> shell_sup;         // sup |A| over the 26 directions per shell
};

/// Probe shells: 40 log-spaced radii in [1, probe_max], 26 directions each.
DecayReport decay_classify(const VectorPotential& a, double probe_max = 100.0);

/// max over the probe set of |A(x)| ⟨x⟩^ρ / C; ≤ 1 iff the claim holds there.
double claimed_decay_ratio(const VectorPotential& a, const DecayClaim& claim, double probe_max = 100.0);

/// max over the probe set of max_jk |Q_jk(x)| ⟨x⟩^ρ.
double matrix_decay_constant(const MatrixPotential& q, double rho, double probe_max = 100.0);

}  // namespace dirac
