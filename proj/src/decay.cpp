#include "dirac/decay.hpp"

#include "dirac/error.hpp"
#include "dirac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dirac {

namespace {

constexpr int kShells = 16;

void check_window(double r_min, double r_max) {
  if (!(r_min >= 1.0) || !(r_max > r_min)) {
    std::ostringstream os;
    os << "decay fit needs r_max > r_min >= 1, got [" << r_min << ", " << r_max << "]";
    fail(ErrorKind::InvalidParameter, os.str());
  }
}

DecayFit regress(const std::vector<double>& radii, const std::vector<double>& sups, double r_min, double r_max) {
  DecayFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (sups[i] > 0.0 && std::isfinite(sups[i])) {
      lx.push_back(std::log(radii[i]));
      ly.push_back(std::log(sups[i]));
      fit.shell_radius.push_back(radii[i]);
      fit.shell_sup.push_back(sups[i]);
    }
  }
  if (lx.size() < 8) {
    fail(ErrorKind::DegenerateFit, "field vanishes on too much of the decay window (" + std::to_string(lx.size()) +
                                       " usable shells, need 8)");
  }
  const LineFit line = fit_line(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.residual = line.rms;
  fit.r_window = {r_min, r_max};
  fit.shells = static_cast<int>(lx.size());
  return fit;
}

}  // namespace

DecayFit decay_fit(const MagnitudeMap& magnitude, double r_min, double r_max) {
  check_window(r_min, r_max);
  std::vector<double> radii(kShells), sups(kShells, 0.0);
  const double ratio = std::log(r_max / r_min);
  for (int i = 0; i < kShells; ++i) {
    radii[i] = r_min * std::exp(ratio * i / (kShells - 1));
    for (const Vec3R& d : cube_directions()) sups[i] = std::max(sups[i], magnitude(radii[i] * d));
  }
  return regress(radii, sups, r_min, r_max);
}

DecayFit decay_fit(const SpinorMap2& psi, double r_min, double r_max) {
  return decay_fit([&](const Vec3R& x) { return psi(x).norm(); }, r_min, r_max);
}

DecayFit decay_fit(const SpinorMap4& f, double r_min, double r_max) {
  return decay_fit([&](const Vec3R& x) { return f(x).norm(); }, r_min, r_max);
}

DecayFit decay_fit(const SpinorField& f, double r_min, double r_max) {
  check_window(r_min, r_max);
  const double ratio = std::log(r_max / r_min);
  std::vector<double> best(kShells, 0.0), where(kShells, 0.0);
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i).norm();
    if (r < r_min || r > r_max) continue;
    const int bin = std::min(kShells - 1, static_cast<int>(kShells * std::log(r / r_min) / ratio));
    const double m = f.magnitude_at(i);
    if (m > best[bin]) {
      best[bin] = m;
      where[bin] = r;
    }
  }
  std::vector<double> radii, sups;
  for (int b = 0; b < kShells; ++b) {
    if (best[b] > 0.0) {
      radii.push_back(where[b]);
      sups.push_back(best[b]);
    }
  }
  return regress(radii, sups, r_min, r_max);
}

std::pair<double, double> lattice_decay_window(const Grid& grid) {
  return {std::max(1.0, grid.extent() / 8.0), 0.45 * grid.extent()};
}

ZeroModeDiscriminator ZeroModeDiscriminator::for_grid(const Grid& grid, double wraparound) {
  ZeroModeDiscriminator d;
  d.sigma_threshold = std::max(1e-3, 5.0 * grid.fundamental() * wraparound);
  return d;
}

}  // namespace dirac
