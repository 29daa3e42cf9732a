#include "dirac/eigensolver.hpp"
#include "dirac/error.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace dirac;

namespace {

SpinorField plane_wave(const Grid& g, const Vec3R& k, const Eigen::VectorXcd& v) {
  SpinorField f(g, static_cast<int>(v.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx phase = std::exp(kI * k.dot(g.node(i)));
    for (int a = 0; a < v.size(); ++a) f.at(a, i) = phase * v(a);
  }
  return f;
}

void check_kernel_invariants(const KernelReport& r, double tol) {
  REQUIRE(r.modes.size() == r.singular_values.size());
  for (std::size_t i = 0; i < r.modes.size(); ++i) {
    CHECK(r.residuals[i] <= r.singular_values[i] * (1.0 + 1e-6) + tol);
    if (i > 0) CHECK(r.singular_values[i] >= r.singular_values[i - 1]);
    for (std::size_t j = 0; j < r.modes.size(); ++j) {
      const cplx ip = r.modes[i].inner(r.modes[j]);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

// Smallest Ritz value of B = (P T P)², the deflated T†T, on a Krylov space
// built by Lanczos with full re-orthogonalisation; B is materialised densely
// on that space.
double krylov_smallest_sigma(const OperatorHandle& t, int dim, std::uint64_t seed) {
  const Grid& g = t.grid();
  auto apply_b = [&](const SpinorField& v) {
    SpinorField w = v;
    remove_constants(w);
    w = t.apply(w);
    remove_constants(w);
    w = t.apply(w);
    remove_constants(w);
    return w;
  };
  std::vector<SpinorField> basis;
  SpinorField v(g, 2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  for (auto& x : v.values()) x = {n(rng), n(rng)};
  remove_constants(v);
  v *= 1.0 / v.norm();
  basis.push_back(v);
  while (static_cast<int>(basis.size()) < dim) {
    SpinorField w = apply_b(basis.back());
    w *= 1.0 / w.norm();
    // re-project each pass so rounding drift cannot build up in the constants
    for (int pass = 0; pass < 2; ++pass) {
      for (const SpinorField& q : basis) w.axpy(-q.inner(w), q);
      remove_constants(w);
    }
    const double nw = w.norm();
    if (nw < 1e-8) break;
    w *= 1.0 / nw;
    basis.push_back(w);
  }
  const int m = static_cast<int>(basis.size());
  std::vector<SpinorField> images;
  for (const SpinorField& q : basis) images.push_back(apply_b(q));
  Eigen::MatrixXcd proj(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) proj(i, j) = basis[i].inner(images[j]);
  proj = (0.5 * (proj + proj.adjoint())).eval();
  const double lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(proj).eigenvalues()(0);
  return std::sqrt(std::max(lam, 0.0));
}

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("free periodic weyl operator") {
  const Grid g(15, 20.0);
  const OperatorHandle t = build_weyl(VectorPotential::zero(), g);

  SUBCASE("deflated: the lowest singular values are 2 pi / L") {
    const KernelReport r = smallest_singular(t, 2, 1e-8, 800);
    REQUIRE(r.converged);
    CHECK(r.deflated_constants);
    for (double s : r.singular_values) CHECK(s == doctest::Approx(g.fundamental()).epsilon(1e-2));
    check_kernel_invariants(r, 1e-8);
    CHECK(r.detected_dim == 0);
  }

  SUBCASE("undeflated: exactly two singular values below half of 2 pi / L") {
    KernelSearch s;
    s.k = 4;
    s.tol = 1e-8;
    s.deflate_constants = false;
    const KernelReport r = smallest_singular(t, s);
    REQUIRE(r.converged);
    CHECK_FALSE(r.deflated_constants);
    int below = 0;
    for (double v : r.singular_values) below += v < 0.5 * g.fundamental();
    CHECK(below == 2);
    // constant modes do not decay, so the discriminator refuses them
    CHECK(r.detected_dim == 0);
  }
}

TEST_CASE("krylov cross-check of the smallest singular value") {
  const Grid g(15, 20.0);
  const OperatorHandle t = build_weyl(loss_yau_potential(), g);
  const KernelReport r = smallest_singular(t, 1, 1e-8, 1500);
  REQUIRE(r.converged);
  const double ritz = krylov_smallest_sigma(t, 200, 99);
  MESSAGE("lobpcg sigma_1 = " << r.singular_values[0] << ", krylov ritz sigma = " << ritz);
  CHECK(std::abs(ritz - r.singular_values[0]) <= 0.05 * r.singular_values[0]);
  // a Ritz value can only overestimate
  CHECK(ritz >= r.singular_values[0] * (1.0 - 1e-6));
}

TEST_CASE("weak coupling has no zero mode") {
  const Grid g(31, 30.0);
  const KernelReport r = smallest_singular(build_weyl(loss_yau_potential().scaled(0.1), g), 1, 1e-6, 800);
  REQUIRE(r.converged);
  CHECK(r.singular_values[0] > 0.05);
  CHECK(r.detected_dim == 0);
}

TEST_CASE("argument validation") {
  const Grid g(15, 20.0);
  const OperatorHandle t = build_weyl(VectorPotential::zero(), g);
  CHECK_THROWS_AS(smallest_singular(t, 0, 1e-6, 10), Error);
  CHECK_THROWS_AS(smallest_singular(t, 3000, 1e-6, 10), Error);
  CHECK_THROWS_AS(smallest_singular(t, 1, 0.0, 10), Error);
  CHECK_THROWS_AS(smallest_singular(build_dirac(VectorPotential::zero(), 1.0, g), 1, 1e-6, 10), Error);
  CHECK_THROWS_AS(interior_eigen(t, 1.0, 1, 1e-4), Error);
  CHECK_THROWS_AS(rayleigh_quotient(t, SpinorField(g, 2)), Error);
}

TEST_CASE("iteration cap is reported, not thrown") {
  const KernelReport r = smallest_singular(build_weyl(loss_yau_potential(), Grid(15, 20.0)), 2, 1e-12, 2);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations <= 2);
}

TEST_CASE("identical seeds give identical reports") {
  const OperatorHandle t = build_weyl(loss_yau_potential(), Grid(15, 20.0));
  const KernelReport a = smallest_singular(t, 2, 1e-6, 300, 5);
  const KernelReport b = smallest_singular(t, 2, 1e-6, 300, 5);
  CHECK(a.singular_values == b.singular_values);
  CHECK(a.iterations == b.iterations);
  CHECK(a.modes[0] == b.modes[0]);
}

TEST_CASE("rayleigh quotients") {
  const Grid g(15, 20.0);
  const std::array<cplx, 4> up{cplx(0.3, 0.1), cplx(-0.2, 0.0), cplx(0.0), cplx(0.0)};
  const std::array<cplx, 4> dn{cplx(0.0), cplx(0.0), cplx(1.0, -1.0), cplx(0.5, 0.0)};
  const OperatorHandle h = build_dirac(VectorPotential::zero(), 1.0, g);
  CHECK(rayleigh_quotient(h, SpinorField::constant(g, up)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rayleigh_quotient(h, SpinorField::constant(g, dn)) == doctest::Approx(-1.0).epsilon(1e-14));

  // massless plane wave along x₁: helicity eigenvectors of α₁ give ±|k|
  const OperatorHandle h0 = build_dirac(VectorPotential::zero(), 0.0, g);
  const Vec3R k(g.fundamental(), 0, 0);
  Eigen::SelfAdjointEigenSolver<Mat4C> es(alpha_dot(k));
  for (int j = 0; j < 4; ++j) {
    const SpinorField f = plane_wave(g, k, es.eigenvectors().col(j));
    CHECK(rayleigh_quotient(h0, f) == doctest::Approx(es.eigenvalues()(j)).epsilon(1e-12));
    CHECK(std::abs(rayleigh_quotient_complex(h0, f).imag()) < 1e-10 * k.norm());
  }

  // (ψ_LY, 0): the off-diagonal T block cannot contribute
  const Grid g2(31, 30.0);
  const SpinorField psi = SpinorField::sample(g2, loss_yau_zero_mode());
  const SpinorField f = SpinorField::stack(psi, SpinorField(g2, 2));
  CHECK(rayleigh_quotient(build_dirac(loss_yau_potential(), 1.0, g2), f) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("free dirac operator has a gap above m after deflation") {
  const Grid g(15, 20.0);
  const double m = 1.0;
  const EigenReport r = interior_eigen(build_dirac(VectorPotential::zero(), m, g), m, 1, 1e-6, 1500);
  REQUIRE(r.converged);
  const double floor = std::sqrt(m * m + g.fundamental() * g.fundamental());
  CHECK(std::abs(r.eigenvalues[0]) >= floor * (1.0 - 1e-6));
  CHECK(r.detected_dim == 0);
}

TEST_CASE("loss-yau threshold eigenpairs on a small grid") {
  const Grid g(31, 30.0);
  const double m = 1.0;
  const OperatorHandle h = build_dirac(loss_yau_potential(), m, g);
  const EigenReport plus = interior_eigen(h, m, 1, 1e-4, 3000);
  const EigenReport minus = interior_eigen(h, -m, 1, 1e-4, 3000);
  REQUIRE(plus.converged);
  REQUIRE(minus.converged);
  CHECK(plus.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(minus.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-2));
  CHECK(plus.residuals[0] < 1e-4);
  CHECK(minus.residuals[0] < 1e-4);
  const SpinorField& fp = plus.eigenfields[0];
  const SpinorField& fm = minus.eigenfields[0];
  CHECK(fp.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fp.block(2, 2).norm() / fp.norm() < 1e-2);
  CHECK(fm.block(0, 2).norm() / fm.norm() < 1e-2);
  CHECK(plus.detected_dim == minus.detected_dim);
  CHECK(plus.detected_dim == 1);
}

}
