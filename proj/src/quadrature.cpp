#include "dirac/quadrature.hpp"

#include "dirac/error.hpp"

#include <numbers>
#include <utility>

namespace dirac {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) fail(ErrorKind::InvalidParameter, "gauss_legendre needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<Vec3R> fibonacci_sphere(int n) {
  if (n < 1) fail(ErrorKind::InvalidParameter, "sphere design needs at least one point");
  std::vector<Vec3R> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return pts;
}

const std::array<Vec3R, 26>& cube_directions() {
  static const std::array<Vec3R, 26> dirs = [] {
    std::array<Vec3R, 26> d;
    int k = 0;
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        for (int l = -1; l <= 1; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          d[k++] = Vec3R(i, j, l).normalized();
        }
    return d;
  }();
  return dirs;
}

std::vector<WeightedDirection> product_sphere_rule(int n_theta, int n_phi) {
  const GaussRule gl = gauss_legendre(n_theta);
  std::vector<WeightedDirection> out;
  out.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int t = 0; t < n_theta; ++t) {
    const double z = gl.nodes[t];
    const double rho = std::sqrt(1.0 - z * z);
    for (int p = 0; p < n_phi; ++p) {
      const double phi = (p + 0.5) * dphi;
      out.push_back({Vec3R(rho * std::cos(phi), rho * std::sin(phi), z), gl.weights[t] * dphi});
    }
  }
  return out;
}

std::vector<double> shell_boundaries(const VolumeQuadratureOptions& opt) {
  if (!(opt.r_first > 0.0) || !(opt.r_max > opt.r_first) || !(opt.growth > 1.0)) {
    fail(ErrorKind::InvalidParameter, "volume quadrature needs 0 < r_first < r_max and growth > 1");
  }
  std::vector<double> b{0.0};
  double r = opt.r_first;
  while (r < opt.r_max) {
    b.push_back(r);
    r *= opt.growth;
  }
  b.push_back(opt.r_max);
  return b;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::InvalidParameter, "line fit needs >= 2 matched samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::InvalidParameter, "line fit abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += e * e;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace dirac
