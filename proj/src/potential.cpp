#include "dirac/potential.hpp"

#include "dirac/error.hpp"
#include "dirac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dirac {

namespace {

std::string fmt_point(const Vec3R& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.x() << ", " << x.y() << ", " << x.z() << ")";
  return os.str();
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<double> probe_radii(double probe_max) {
  constexpr int kShells = 40;
  std::vector<double> r(kShells);
  const double lmax = std::log(probe_max);
  for (int i = 0; i < kShells; ++i) r[i] = std::exp(lmax * i / (kShells - 1));
  return r;
}

Vec3R checked_eval(const VectorPotential& a, const Vec3R& x) {
  const Vec3R v = a(x);
  if (!v.allFinite()) fail(ErrorKind::Evaluation, "potential '" + a.label() + "' is not finite at " + fmt_point(x));
  return v;
}

}  // namespace

VectorPotential::VectorPotential(std::string label, Eval eval, std::optional<DecayClaim> claim,
                                 std::optional<double> support_radius)
    : label_(std::move(label)),
      eval_(std::make_shared<const Eval>(std::move(eval))),
      claim_(claim),
      support_radius_(support_radius) {}

VectorPotential VectorPotential::zero() {
  return VectorPotential("zero", [](const Vec3R&) { return Vec3R::Zero().eval(); }, std::nullopt, 0.0);
}

VectorPotential VectorPotential::scaled(double t) const {
  auto inner = eval_;
  std::optional<DecayClaim> c = claim_;
  if (c) c->constant *= std::abs(t);
  return VectorPotential(fmt_num(t) + "*" + label_, [inner, t](const Vec3R& x) { return Vec3R(t * (*inner)(x)); }, c,
                         support_radius_);
}

VectorPotential VectorPotential::plus(const VectorPotential& other) const {
  auto a = eval_;
  auto b = other.eval_;
  std::optional<DecayClaim> c;
  if (claim_ && other.claim_) {
    c = DecayClaim{std::min(claim_->rho, other.claim_->rho), claim_->constant + other.claim_->constant};
  }
  std::optional<double> support;
  if (support_radius_ && other.support_radius_) support = std::max(*support_radius_, *other.support_radius_);
  return VectorPotential(label_ + "+" + other.label_, [a, b](const Vec3R& x) { return Vec3R((*a)(x) + (*b)(x)); }, c,
                         support);
}

MatrixPotential::MatrixPotential(std::string label, Eval eval, std::optional<DecayClaim> claim)
    : label_(std::move(label)), eval_(std::make_shared<const Eval>(std::move(eval))), claim_(claim) {}

VectorPotential loss_yau_potential() {
  return VectorPotential(
      "loss-yau",
      [](const Vec3R& x) {
        const Vec3R w(0.0, 0.0, 1.0);
        const double r2 = x.squaredNorm();
        const double pref = 3.0 / ((1.0 + r2) * (1.0 + r2));
        return Vec3R(pref * ((1.0 - r2) * w + 2.0 * w.dot(x) * x + 2.0 * w.cross(x)));
      },
      DecayClaim{2.0, 3.0});
}

SpinorMap2 loss_yau_zero_mode() {
  return [](const Vec3R& x) {
    const double r2 = x.squaredNorm();
    const double pref = std::pow(1.0 + r2, -1.5);
    // (I + iσ·x)(1,0)ᵀ = (1 + i x₃, i x₁ − x₂)
    return Spinor2(pref * cplx(1.0, x.z()), pref * cplx(-x.y(), x.x()));
  };
}

std::array<Spinor2, 3> loss_yau_zero_mode_gradient(const Vec3R& x) {
  const double r2 = x.squaredNorm();
  const double pref = std::pow(1.0 + r2, -1.5);
  const double dpref = -3.0 * std::pow(1.0 + r2, -2.5);  // ∂_j pref = dpref · x_j
  const Spinor2 body(cplx(1.0, x.z()), cplx(-x.y(), x.x()));
  const std::array<Spinor2, 3> dbody{Spinor2(0.0, kI), Spinor2(0.0, -1.0), Spinor2(kI, 0.0)};
  std::array<Spinor2, 3> g;
  for (int j = 0; j < 3; ++j) g[j] = dpref * x[j] * body + pref * dbody[j];
  return g;
}

VectorPotential bump_potential(const Vec3R& center, double radius, const Vec3R& amplitude) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorKind::InvalidParameter, "bump radius must be positive, got " + fmt_num(radius));
  }
  std::ostringstream label;
  label << "bump[c=" << fmt_point(center) << ",R=" << radius << ",a=" << fmt_point(amplitude) << "]";
  return VectorPotential(
      label.str(),
      [center, radius, amplitude](const Vec3R& x) {
        const double s2 = (x - center).squaredNorm() / (radius * radius);
        if (s2 >= 1.0) return Vec3R::Zero().eval();
        return Vec3R(amplitude * std::exp(1.0 - 1.0 / (1.0 - s2)));
      },
      std::nullopt, center.norm() + radius);
}

MatrixPotential wrap_as_matrix_potential(const VectorPotential& a, const ScalarField& q,
                                         std::optional<DecayClaim> q_decay) {
  // |(α·A)_jk| ≤ √2 max_j |A_j|
  std::optional<DecayClaim> claim;
  if (a.claimed_decay()) {
    const DecayClaim& ca = *a.claimed_decay();
    if (!q) {
      claim = DecayClaim{ca.rho, std::sqrt(2.0) * ca.constant};
    } else if (q_decay) {
      claim = DecayClaim{std::min(ca.rho, q_decay->rho), std::sqrt(2.0) * ca.constant + q_decay->constant};
    }
  }
  return MatrixPotential(
      "-alpha.(" + a.label() + ")+q",
      [a, q](const Vec3R& x) {
        Mat4C m = -alpha_dot(a(x));
        if (q) m += q(x) * Mat4C::Identity();
        return m;
      },
      claim);
}

VectorPotential make_potential(const std::string& name, const std::vector<double>& params) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi) {
      fail(ErrorKind::Configuration, "potential '" + name + "' takes " + std::to_string(lo) + ".." +
                                         std::to_string(hi) + " parameters, got " + std::to_string(params.size()));
    }
  };
  if (name == "zero") {
    need(0, 0);
    return VectorPotential::zero();
  }
  if (name == "loss-yau") {
    need(0, 1);
    const VectorPotential ly = loss_yau_potential();
    return params.empty() ? ly : ly.scaled(params[0]);
  }
  if (name == "bump") {
    need(7, 7);
    return bump_potential(Vec3R(params[0], params[1], params[2]), params[3], Vec3R(params[4], params[5], params[6]));
  }
  fail(ErrorKind::Configuration, "unknown potential family '" + name + "' (expected zero, loss-yau, bump)");
}

DecayReport decay_classify(const VectorPotential& a, double probe_max) {
  if (!(probe_max >= 10.0)) fail(ErrorKind::InvalidParameter, "decay_classify needs probe_max >= 10");
  DecayReport rep;
  rep.probe_radius_max = probe_max;
  rep.shell_radii = probe_radii(probe_max);
  rep.sup_norm_weighted = checked_eval(a, Vec3R::Zero()).norm();
  for (double r : rep.shell_radii) {
    double sup = 0.0;
    for (const Vec3R& d : cube_directions()) {
      const double v = checked_eval(a, r * d).norm();
      sup = std::max(sup, v);
      rep.sup_norm_weighted = std::max(rep.sup_norm_weighted, japanese_bracket(r) * v);
    }
    rep.shell_sup.push_back(sup);
  }

  // zero tail: everything beyond some shell vanishes identically
  const bool tail_zero = rep.shell_sup.back() == 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.shell_radii.size(); ++i) {
    if (rep.shell_sup[i] > 0.0) {
      lx.push_back(std::log(rep.shell_radii[i]));
      ly.push_back(std::log(rep.shell_sup[i]));
    }
  }
  rep.compact_support = tail_zero;
  if (!tail_zero && lx.size() >= 2) {
    const LineFit fit = fit_line(lx, ly);
    const double rho = -fit.slope;
    if (rho > 0.0) {
      double c = 0.0;
      for (std::size_t i = 0; i < rep.shell_radii.size(); ++i) {
        c = std::max(c, rep.shell_sup[i] * std::pow(japanese_bracket(rep.shell_radii[i]), rho));
      }
      rep.a1 = DecayClaim{rho, c};
      rep.a1_satisfied = rho > 1.0;
    }
  } else {
    rep.a1_satisfied = true;
  }

  // (A2): r·sup|A| non-increasing toward 0 over the last decade of radii
  {
    std::vector<double> g;
    for (std::size_t i = 0; i < rep.shell_radii.size(); ++i) {
      if (rep.shell_radii[i] >= probe_max / 10.0) g.push_back(rep.shell_radii[i] * rep.shell_sup[i]);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < g.size(); ++i) monotone = monotone && g[i] <= g[i - 1] * (1.0 + 1e-12);
    rep.a2_satisfied = g.back() == 0.0 || (monotone && g.back() < (1.0 - 1e-3) * g.front());
  }

  // (A3): L³ norm. A decay no faster than r⁻¹ leaves ∫|A|³ divergent.
  if (rep.a1 && rep.a1->rho <= 1.0) {
    rep.a3_norm = std::numeric_limits<double>::infinity();
  } else {
    VolumeQuadratureOptions opt;
    opt.r_max = probe_max;
    if (a.support_radius()) opt.r_max = std::max(1.0, *a.support_radius());
    opt.n_theta = 32;
    opt.n_phi = 64;
    opt.radial_points = 24;
    const auto integral = integrate_volume(
        [&](const Vec3R& x) {
          const double v = checked_eval(a, x).norm();
          return Eigen::Matrix<double, 1, 1>(v * v * v);
        },
        Eigen::Matrix<double, 1, 1>::Zero().eval(), opt);
    rep.a3_norm = std::cbrt(std::max(0.0, integral.total(0)));
  }
  return rep;
}

double claimed_decay_ratio(const VectorPotential& a, const DecayClaim& claim, double probe_max) {
  double worst = 0.0;
  auto visit = [&](const Vec3R& x) {
    const Vec3R v = checked_eval(a, x);
    const double bound = claim.constant * std::pow(japanese_bracket(x), -claim.rho);
    worst = std::max(worst, v.cwiseAbs().maxCoeff() / bound);
  };
  visit(Vec3R::Zero());
  for (double r : probe_radii(probe_max))
    for (const Vec3R& d : cube_directions()) visit(r * d);
  return worst;
}

double matrix_decay_constant(const MatrixPotential& q, double rho, double probe_max) {
  double worst = 0.0;
  auto visit = [&](const Vec3R& x) {
    worst = std::max(worst, q(x).cwiseAbs().maxCoeff() * std::pow(japanese_bracket(x), rho));
  };
  visit(Vec3R::Zero());
  for (double r : probe_radii(probe_max))
    for (const Vec3R& d : cube_directions()) visit(r * d);
  return worst;
}

}  // namespace dirac
