#pragma once

// Radial decay fits and the zero-mode discriminator.
//
// A genuine zero mode of σ·(D − A) decays like |x|⁻²; a field with decay
// slope −a lies in the weighted space L^{2,−s} for every s > 3/2 − a, so a
// slope near −1 marks a resonance-like profile rather than an L² mode.
// Constant spinors (the periodic-box artefact) have slope 0.

#include "dirac/field.hpp"
#include "dirac/potential.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace dirac {

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::pair<double, double> r_window;
  double residual = 0.0;  // RMS of the log-log regression
  int shells = 0;
  std::vector<double> shell_radius;  // the regressed points
  std::vector<double> shell_sup;
};

using MagnitudeMap = std::function<double(const Vec3R&)>;

/// log(shell-sup |ψ|) against log r over 16 log-spaced shells in
/// [r_min, r_max], sup over the 26 cube directions.
DecayFit decay_fit(const MagnitudeMap& magnitude, double r_min, double r_max);
DecayFit decay_fit(const SpinorMap2& psi, double r_min, double r_max);
DecayFit decay_fit(const SpinorMap4& f, double r_min, double r_max);

/// Lattice version: nodes are binned into log-spaced shells and the largest
/// spinor magnitude in each bin is regressed against that node's radius.
DecayFit decay_fit(const SpinorField& f, double r_min, double r_max);

/// Default lattice window [L/8, 0.45 L], inside the wrap-around-free region.
std::pair<double, double> lattice_decay_window(const Grid& grid);

struct ZeroModeDiscriminator {
  double sigma_threshold = 1e-3;
  double max_slope = -1.5;

  /// max(10⁻³, 5 · (2π/L) · wraparound).
  static ZeroModeDiscriminator for_grid(const Grid& grid, double wraparound);

  bool accepts(double sigma, double decay_slope) const {
    return sigma < sigma_threshold && decay_slope <= max_slope;
  }
};

}  // namespace dirac
