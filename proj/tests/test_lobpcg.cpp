#include "dirac/lobpcg.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <random>

using namespace dirac;

namespace {

Eigen::MatrixXcd random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

// U diag(d) U†
Eigen::MatrixXcd with_spectrum(const Eigen::VectorXd& d, std::uint64_t seed) {
  const Eigen::MatrixXcd u = random_unitary(static_cast<int>(d.size()), seed);
  return u * d.cast<cplx>().asDiagonal() * u.adjoint();
}

BlockProblem dense_problem(const Eigen::MatrixXcd& a) {
  BlockProblem p;
  p.dim = static_cast<std::size_t>(a.rows());
  p.apply = [&a](const cplx* in, cplx* out) {
    Eigen::Map<Eigen::VectorXcd>(out, a.rows()) = a * Eigen::Map<const Eigen::VectorXcd>(in, a.rows());
  };
  return p;
}

}  // namespace

TEST_SUITE("lobpcg") {

TEST_CASE("lowest eigenpairs of a dense hermitian matrix") {
  const int n = 240;
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = 0.01 + 0.05 * i + 0.001 * i * i;
  const Eigen::MatrixXcd a = with_spectrum(d, 1);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a).eigenvalues();

  BlockOptions opt;
  opt.nev = 3;
  opt.block = 5;
  opt.tol = 1e-9;
  opt.max_iter = 500;
  const BlockResult r = lobpcg(dense_problem(a), opt);
  REQUIRE(r.converged);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.values(i) == doctest::Approx(ref(i)).epsilon(1e-10).scale(1.0));
    CHECK(r.residuals(i) < 1e-9);
    const Eigen::VectorXcd x = r.vectors.col(i);
    CHECK((a * x - r.values(i) * x).norm() < 1e-9);
  }
  const Eigen::MatrixXcd gram = r.vectors.adjoint() * r.vectors;
  CHECK((gram - Eigen::MatrixXcd::Identity(opt.block, opt.block)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate lowest eigenvalue") {
  const int n = 150;
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, 1.0, 10.0);
  d(0) = d(1) = 0.2;
  const Eigen::MatrixXcd a = with_spectrum(d, 2);
  BlockOptions opt;
  opt.nev = 2;
  opt.block = 4;
  opt.tol = 1e-9;
  const BlockResult r = lobpcg(dense_problem(a), opt);
  REQUIRE(r.converged);
  CHECK(r.values(0) == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(r.values(1) == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("projector restricts the search space") {
  // project out the two lowest eigenvectors; the solver must find the third
  const int n = 120;
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, 0.0, 12.0);
  const Eigen::MatrixXcd u = random_unitary(n, 3);
  const Eigen::MatrixXcd a = u * d.cast<cplx>().asDiagonal() * u.adjoint();
  const Eigen::MatrixXcd low = u.leftCols(2);
  BlockProblem p = dense_problem(a);
  p.project = [&low, n](cplx* v) {
    Eigen::Map<Eigen::VectorXcd> x(v, n);
    x -= low * (low.adjoint() * x);
  };
  BlockOptions opt;
  opt.nev = 1;
  opt.block = 3;
  opt.tol = 1e-9;
  const BlockResult r = lobpcg(p, opt);
  REQUIRE(r.converged);
  CHECK(r.values(0) == doctest::Approx(d(2)).epsilon(1e-10));
  CHECK((low.adjoint() * r.vectors.col(0)).norm() < 1e-12);
}

TEST_CASE("a good preconditioner and a warm start help") {
  // diagonally dominant with a wide spread: Jacobi preconditioning pays off
  const int n = 400;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0 + i;
  for (int i = 0; i + 1 < n; ++i) {
    const cplx c(0.3 * g(rng), 0.3 * g(rng));
    a(i, i + 1) = c;
    a(i + 1, i) = std::conj(c);
  }
  BlockOptions opt;
  opt.nev = 2;
  opt.block = 4;
  opt.tol = 1e-8;
  opt.max_iter = 2000;
  const BlockResult plain = lobpcg(dense_problem(a), opt);

  BlockProblem p = dense_problem(a);
  p.precondition = [&a, n](cplx* v) {
    for (int i = 0; i < n; ++i) v[i] /= a(i, i).real();
  };
  const BlockResult pre = lobpcg(p, opt);
  REQUIRE(plain.converged);
  REQUIRE(pre.converged);
  CHECK(pre.iterations < plain.iterations);
  CHECK(pre.values(0) == doctest::Approx(plain.values(0)).epsilon(1e-10));

  const Eigen::MatrixXcd start = pre.vectors.leftCols(2);
  const BlockResult warm = lobpcg(p, opt, &start);
  REQUIRE(warm.converged);
  CHECK(warm.iterations <= 2);
}

TEST_CASE("runs are deterministic in the seed") {
  const Eigen::MatrixXcd a = with_spectrum(Eigen::VectorXd::LinSpaced(80, 0.5, 4.0), 5);
  BlockOptions opt;
  opt.nev = 2;
  opt.block = 4;
  opt.seed = 42;
  const BlockResult r1 = lobpcg(dense_problem(a), opt);
  const BlockResult r2 = lobpcg(dense_problem(a), opt);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.values == r2.values);
  CHECK(r1.vectors == r2.vectors);
}

TEST_CASE("iteration cap reports non-convergence") {
  const Eigen::MatrixXcd a = with_spectrum(Eigen::VectorXd::LinSpaced(300, 0.001, 100.0), 6);
  BlockOptions opt;
  opt.nev = 1;
  opt.block = 2;
  opt.tol = 1e-12;
  opt.max_iter = 2;
  const BlockResult r = lobpcg(dense_problem(a), opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
}

}
