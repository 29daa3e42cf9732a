#pragma once

// Sphere designs and ℝ³ volume quadrature.

#include "dirac/spinor.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace dirac {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Near-uniform spiral design of n unit vectors (deterministic).
std::vector<Vec3R> fibonacci_sphere(int n);

/// The 26 normalized neighbour directions of the unit cube.
const std::array<Vec3R, 26>& cube_directions();

struct WeightedDirection {
  Vec3R omega;
  double weight;  // weights sum to 4π
};

/// Gauss–Legendre in cos θ times the trapezoid rule in φ.
std::vector<WeightedDirection> product_sphere_rule(int n_theta, int n_phi);

struct VolumeQuadratureOptions {
  double r_first = 0.25;       // outer radius of the innermost shell
  double r_max = 200.0;        // shells end here; [r_max, ∞) is the tail
  double growth = 1.5;         // ratio of consecutive shell radii
  int radial_points = 16;      // Gauss points per shell
  int tail_points = 24;        // Gauss points on the mapped tail
  int n_theta = 24;
  int n_phi = 48;
};

template <typename V>
struct VolumeIntegral {
  V total;
  V tail;                       // contribution of [r_max, ∞)
  std::vector<double> shell_outer_radius;
  std::vector<double> shell_magnitude;  // |∫ over shell| per shell
};

/// Radial shell boundaries 0 = b_0 < r_first < ... < r_max.
std::vector<double> shell_boundaries(const VolumeQuadratureOptions& opt);

/// ∫_{ℝ³} f(y) dy for an analytic map f. The tail [r_max, ∞) uses the
/// substitution r = r_max / s, which is exact for an r⁻⁴ integrand.
/// `zero` provides the value type's additive identity (sizes for dynamic types).
template <typename V, typename F>
VolumeIntegral<V> integrate_volume(F&& f, const V& zero, const VolumeQuadratureOptions& opt = {}) {
  const GaussRule radial = gauss_legendre(opt.radial_points);
  const GaussRule tail = gauss_legendre(opt.tail_points);
  const std::vector<WeightedDirection> sphere = product_sphere_rule(opt.n_theta, opt.n_phi);
  const std::vector<double> bounds = shell_boundaries(opt);

  VolumeIntegral<V> out{zero, zero, {}, {}};
  auto shell_integral = [&](double r) {
    V acc = zero;
    for (const auto& d : sphere) acc += d.weight * f(Vec3R(r * d.omega));
    return V(acc * (r * r));
  };
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double a = bounds[s], b = bounds[s + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    V shell = zero;
    for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
      shell += radial.weights[q] * half * shell_integral(mid + half * radial.nodes[q]);
    }
    out.total += shell;
    out.shell_outer_radius.push_back(b);
    out.shell_magnitude.push_back(shell.norm());
  }
  // s ∈ (0, 1], r = r_max / s, dr = r_max / s² ds
  for (std::size_t q = 0; q < tail.nodes.size(); ++q) {
    const double s = 0.5 * (tail.nodes[q] + 1.0);
    const double w = 0.5 * tail.weights[q];
    const double r = opt.r_max / s;
    out.tail += w * (opt.r_max / (s * s)) * shell_integral(r);
  }
  out.total += out.tail;
  return out;
}

/// ⟨x⟩ = √(1 + |x|²)
inline double japanese_bracket(const Vec3R& x) { return std::sqrt(1.0 + x.squaredNorm()); }
inline double japanese_bracket(double r) { return std::sqrt(1.0 + r * r); }

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dirac
