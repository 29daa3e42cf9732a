#include "dirac/threshold.hpp"

#include "dirac/error.hpp"
#include "dirac/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dirac {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) fail(ErrorKind::InvalidParameter, "asymptotic probe needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) fail(ErrorKind::InvalidParameter, "probe radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) fail(ErrorKind::InvalidParameter, "probe radii must be strictly increasing");
  }
}

void check_tail(double fraction, double limit) {
  if (!(fraction <= limit)) {
    fail(ErrorKind::Accuracy, "moment quadrature tail is " + std::to_string(fraction) +
                                  " of the integral (limit " + std::to_string(limit) + ")");
  }
}

template <typename Map>
AsymptoticReport assemble(const std::vector<Vec3R>& omegas, std::vector<Eigen::VectorXcd> u, const Map& field,
                          const std::vector<double>& radii) {
  AsymptoticReport rep;
  rep.sphere_samples = omegas;
  rep.u_values = std::move(u);
  rep.radii = radii;
  rep.field_values.assign(radii.size(), {});
  rep.rel_error.assign(radii.size(), {});
  parallel_for(radii.size(), [&](std::size_t ri) {
    const double r = radii[ri];
    auto& values = rep.field_values[ri];
    auto& errors = rep.rel_error[ri];
    for (std::size_t w = 0; w < omegas.size(); ++w) {
      Eigen::VectorXcd v = (r * r) * field(Vec3R(r * omegas[w]));
      const double denom = rep.u_values[w].norm();
      const double diff = (v - rep.u_values[w]).norm();
      errors.push_back(denom > 0.0 ? diff / denom : diff);
      values.push_back(std::move(v));
    }
  });
  for (const auto& errors : rep.rel_error) {
    if (!std::all_of(errors.begin(), errors.end(), [](double e) { return std::isfinite(e); })) {
      fail(ErrorKind::Evaluation, "non-finite field value on the probe sphere");
    }
    rep.max_rel_error_per_radius.push_back(*std::max_element(errors.begin(), errors.end()));
  }
  const auto& last = rep.rel_error.back();
  rep.uniformity_spread = *std::max_element(last.begin(), last.end());
  double sum = 0.0;
  for (double e : last) sum += e;
  rep.mean_error_at_largest = sum / static_cast<double>(last.size());
  return rep;
}

}  // namespace

Eigen::Matrix<cplx, 2, 3> weyl_moments(const VectorPotential& a, const SpinorMap2& psi,
                                       const VolumeQuadratureOptions& opt, double* tail_fraction) {
  using Moments = Eigen::Matrix<cplx, 6, 1>;
  const auto integral = integrate_volume(
      [&](const Vec3R& y) {
        const Vec3R av = a(y);
        const Spinor2 p = psi(y);
        Moments m;
        m << av(0) * p, av(1) * p, av(2) * p;
        return m;
      },
      Moments(Moments::Zero()), opt);
  if (tail_fraction != nullptr) {
    const double total = integral.total.norm();
    *tail_fraction = total > 0.0 ? integral.tail.norm() / total : 0.0;
  }
  Eigen::Matrix<cplx, 2, 3> out;
  for (int c = 0; c < 3; ++c) out.col(c) = integral.total.segment<2>(2 * c);
  return out;
}

AsymptoticReport asymptotic_limit_weyl(const VectorPotential& a, const SpinorMap2& psi, const AsymptoticOptions& opt) {
  check_radii(opt.radii);
  double tail = 0.0;
  const Eigen::Matrix<cplx, 2, 3> m = weyl_moments(a, psi, opt.quadrature, &tail);
  check_tail(tail, opt.max_tail_fraction);

  // (ω·A) ψ ↦ Σ_a ω_a M_a ;  i σ·(ω×A) ψ ↦ i Σ ε_lab ω_a σ_l M_b
  const std::vector<Vec3R> omegas = fibonacci_sphere(opt.sphere_n);
  std::vector<Eigen::VectorXcd> u;
  u.reserve(omegas.size());
  for (const Vec3R& w : omegas) {
    Spinor2 acc = w(0) * m.col(0) + w(1) * m.col(1) + w(2) * m.col(2);
    for (int l = 0; l < 3; ++l)
      for (int aa = 0; aa < 3; ++aa)
        for (int b = 0; b < 3; ++b) {
          const int eps = levi_civita(l + 1, aa + 1, b + 1);
          if (eps != 0) acc += kI * (static_cast<double>(eps) * w(aa)) * (pauli(l + 1) * m.col(b));
        }
    u.emplace_back(kI / kFourPi * acc);
  }
  AsymptoticReport rep = assemble(omegas, std::move(u), [&](const Vec3R& x) { return Eigen::VectorXcd(psi(x)); },
                                  opt.radii);
  rep.tail_fraction = tail;
  return rep;
}

AsymptoticReport asymptotic_limit_general(const MatrixPotential& q, const SpinorMap4& f, const AsymptoticOptions& opt) {
  check_radii(opt.radii);
  const auto integral =
      integrate_volume([&](const Vec3R& y) { return Spinor4(q(y) * f(y)); }, Spinor4(Spinor4::Zero()), opt.quadrature);
  const double total = integral.total.norm();
  const double tail = total > 0.0 ? integral.tail.norm() / total : 0.0;
  check_tail(tail, opt.max_tail_fraction);

  const std::vector<Vec3R> omegas = fibonacci_sphere(opt.sphere_n);
  std::vector<Eigen::VectorXcd> u;
  u.reserve(omegas.size());
  for (const Vec3R& w : omegas) u.emplace_back(-kI / kFourPi * (alpha_dot(w) * integral.total));
  AsymptoticReport rep =
      assemble(omegas, std::move(u), [&](const Vec3R& x) { return Eigen::VectorXcd(f(x)); }, opt.radii);
  rep.tail_fraction = tail;
  return rep;
}

std::vector<std::vector<Eigen::VectorXcd>> lattice_profile(const SpinorField& f, const std::vector<double>& radii,
                                                           const std::vector<Vec3R>& directions) {
  check_radii(radii);
  const Grid& g = f.grid();
  if (radii.back() > 0.45 * g.extent()) {
    fail(ErrorKind::InvalidParameter, "lattice profile radius " + std::to_string(radii.back()) +
                                          " exceeds 0.45 L = " + std::to_string(0.45 * g.extent()));
  }
  const int n = g.n();
  const double h = g.spacing();
  const int comps = f.components();
  // node i sits at −L/2 + (i + ½) h
  auto locate = [&](double x, int& i0, double& frac) {
    const double s = (x + 0.5 * g.extent()) / h - 0.5;
    const double fl = std::floor(s);
    frac = s - fl;
    i0 = static_cast<int>(fl);
  };
  auto wrap = [n](int i) { return ((i % n) + n) % n; };

  std::vector<std::vector<Eigen::VectorXcd>> out(radii.size());
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    for (const Vec3R& w : directions) {
      const Vec3R x = r * w;
      std::array<int, 3> base{};
      std::array<double, 3> frac{};
      for (int d = 0; d < 3; ++d) locate(x(d), base[d], frac[d]);
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(comps);
      for (int corner = 0; corner < 8; ++corner) {
        double weight = 1.0;
        std::array<int, 3> idx{};
        for (int d = 0; d < 3; ++d) {
          const int bit = (corner >> d) & 1;
          weight *= bit ? frac[d] : 1.0 - frac[d];
          idx[d] = wrap(base[d] + bit);
        }
        const std::size_t node = g.index(idx[0], idx[1], idx[2]);
        for (int c = 0; c < comps; ++c) v(c) += weight * f.at(c, node);
      }
      out[ri].push_back((r * r) * v);
    }
  }
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::Consistent ? "consistent" : "inconsistent"; }

DirectSumReport verify_direct_sum(const SpinorField& f, const KernelReport& kernel, double tol) {
  if (f.components() != 4) fail(ErrorKind::InvalidParameter, "verify_direct_sum needs a 4-spinor field");
  if (!(f.grid() == kernel.grid)) fail(ErrorKind::InvalidParameter, "field and kernel live on different grids");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidParameter, "direct-sum tolerance must be positive");

  DirectSumReport rep;
  const SpinorField upper = f.block(0, 2);
  const SpinorField lower = f.block(2, 2);
  rep.upper_norm = upper.norm();
  rep.lower_norm = lower.norm();
  const double total = std::hypot(rep.upper_norm, rep.lower_norm);
  if (!(total > 0.0)) fail(ErrorKind::InvalidParameter, "verify_direct_sum of a zero field");
  rep.upper_dominant = rep.upper_norm >= rep.lower_norm;
  rep.minor_ratio = std::min(rep.upper_norm, rep.lower_norm) / total;

  const SpinorField& dominant = rep.upper_dominant ? upper : lower;
  double captured = 0.0;
  for (std::size_t i = 0; i < kernel.modes.size(); ++i) {
    if (!kernel.zero_mode[i]) continue;
    // kernel modes are orthonormal
    const double mode_norm = kernel.modes[i].norm();
    captured += std::norm(kernel.modes[i].inner(dominant)) / (mode_norm * mode_norm);
    ++rep.kernel_dim;
  }
  rep.kernel_overlap = std::sqrt(captured) / dominant.norm();
  rep.verdict = (rep.minor_ratio < tol && rep.kernel_overlap > 1.0 - tol) ? Verdict::Consistent
                                                                            : Verdict::Inconsistent;
  return rep;
}

}  // namespace dirac
