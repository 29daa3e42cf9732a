#include "dirac/lobpcg.hpp"

#include "dirac/error.hpp"
#include "dirac/simd/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace dirac {

namespace {

using Block = Eigen::MatrixXcd;
using Small = Eigen::MatrixXcd;

// Aᴴ B through the dot kernel.
Small gram(const Block& a, const Block& b) {
  const auto& k = simd::active();
  Small g(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) g(i, j) = k.dot(a.col(i).data(), b.col(j).data(), a.rows());
  return g;
}

// Hermitian Aᴴ A from the upper triangle.
Small gram_self(const Block& a) {
  const auto& k = simd::active();
  Small g(a.cols(), a.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      g(i, j) = k.dot(a.col(i).data(), a.col(j).data(), a.rows());
      g(j, i) = std::conj(g(i, j));
    }
  for (Eigen::Index i = 0; i < a.cols(); ++i) g(i, i) = g(i, i).real();
  return g;
}

// v ← v t (and av ← av t) without keeping a second full-size copy around
// longer than needed.
void transform(Block& v, const Small& t) {
  Block out(v.rows(), t.cols());
  out.noalias() = v * t;
  v.swap(out);
}

// Orthonormalise the columns of v (SVQB), dropping numerically dependent
// directions; the same transform is applied to av when given.
void svqb(Block& v, Block* av) {
  if (v.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Small g = gram_self(v);
    Eigen::VectorXd d(g.rows());
    for (Eigen::Index i = 0; i < g.rows(); ++i) d(i) = 1.0 / std::sqrt(std::max(g(i, i).real(), 1e-300));
    const Small scaled = d.asDiagonal() * g * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Small> es(scaled);
    const Eigen::VectorXd theta = es.eigenvalues();
    const double cutoff = 1e-12 * std::max(theta.maxCoeff(), 1e-300);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      if (theta(i) > cutoff) keep.push_back(i);
    Small t(v.cols(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      t.col(static_cast<Eigen::Index>(j)) = d.asDiagonal() * es.eigenvectors().col(keep[j]) / std::sqrt(theta(keep[j]));
    }
    transform(v, t);
    if (av != nullptr && av->cols() > 0) transform(*av, t);
  }
}

// v −= basis (basisᴴ v), twice; basis orthonormal. Mirrors onto av/abasis.
void orthogonalize_against(Block& v, Block* av, const Block& basis, const Block* abasis) {
  if (basis.cols() == 0 || v.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Small c = gram(basis, v);
    v.noalias() -= basis * c;
    if (av != nullptr && abasis != nullptr) av->noalias() -= *abasis * c;
  }
}

void apply_block(const BlockProblem& p, const Block& in, Block& out) {
  out.resize(in.rows(), in.cols());
  for (Eigen::Index j = 0; j < in.cols(); ++j) p.apply(in.col(j).data(), out.col(j).data());
}

void project_block(const BlockProblem& p, Block& v) {
  if (!p.project) return;
  for (Eigen::Index j = 0; j < v.cols(); ++j) p.project(v.col(j).data());
}

void rayleigh_ritz_single(Block& x, Block& ax, Eigen::VectorXd& lambda) {
  Small h = gram(x, ax);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Small> es(h);
  transform(x, es.eigenvectors());
  transform(ax, es.eigenvectors());
  lambda = es.eigenvalues();
}

}  // namespace

BlockResult lobpcg(const BlockProblem& problem, const BlockOptions& options, const Eigen::MatrixXcd* initial) {
  const auto n = static_cast<Eigen::Index>(problem.dim);
  const int b = options.block;
  if (options.nev < 1 || b < options.nev) fail(ErrorKind::InvalidParameter, "LOBPCG needs 1 <= nev <= block");
  if (3 * static_cast<Eigen::Index>(b) >= n) fail(ErrorKind::InvalidParameter, "LOBPCG block too large for the problem");

  Block x(n, b);
  {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < b; ++j)
      for (Eigen::Index i = 0; i < n; ++i) x(i, j) = cplx(normal(rng), normal(rng));
    if (initial != nullptr) {
      const Eigen::Index c = std::min<Eigen::Index>(initial->cols(), b);
      x.leftCols(c) = initial->leftCols(c);
    }
  }
  project_block(problem, x);
  svqb(x, nullptr);
  if (x.cols() < b) fail(ErrorKind::InvalidParameter, "initial block is rank deficient after projection");

  Block ax;
  apply_block(problem, x, ax);
  Eigen::VectorXd lambda;
  rayleigh_ritz_single(x, ax, lambda);

  BlockResult result;
  Block p(n, 0), ap(n, 0), w, aw, r(n, b);
  Eigen::VectorXd res(b);
  constexpr int kRefreshEvery = 25;

  auto residuals = [&] {
    r.noalias() = ax - x * lambda.asDiagonal();
    project_block(problem, r);
    for (Eigen::Index j = 0; j < b; ++j) res(j) = r.col(j).norm();
  };
  auto nev_converged = [&] {
    for (int j = 0; j < options.nev; ++j)
      if (!(res(j) <= options.tol)) return false;
    return true;
  };

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    result.iterations = iter;
    residuals();
    if (nev_converged()) {
      result.converged = true;
      break;
    }

    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < b; ++j)
      if (res(j) > options.tol) active.push_back(j);
    w.resize(n, static_cast<Eigen::Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) w.col(static_cast<Eigen::Index>(j)) = r.col(active[j]);
    if (problem.precondition)
      for (Eigen::Index j = 0; j < w.cols(); ++j) problem.precondition(w.col(j).data());
    project_block(problem, w);
    orthogonalize_against(w, nullptr, x, nullptr);
    orthogonalize_against(w, nullptr, p, nullptr);
    svqb(w, nullptr);
    orthogonalize_against(w, nullptr, x, nullptr);
    svqb(w, nullptr);
    apply_block(problem, w, aw);

    orthogonalize_against(p, &ap, x, &ax);
    orthogonalize_against(p, &ap, w, &aw);
    svqb(p, &ap);

    // Rayleigh–Ritz on span[X W P]; the blocks are mutually orthogonal, so
    // the Gram matrix is close to identity and assembled from sub-blocks.
    const std::array<const Block*, 3> s{&x, &w, &p};
    const std::array<const Block*, 3> as{&ax, &aw, &ap};
    std::array<Eigen::Index, 4> offset{0, 0, 0, 0};
    for (int i = 0; i < 3; ++i) offset[i + 1] = offset[i] + s[i]->cols();
    const Eigen::Index m = offset[3];
    Small h(m, m), g(m, m);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        if (s[i]->cols() == 0 || s[j]->cols() == 0) continue;
        const Small hij = gram(*s[i], *as[j]);
        const Small gij = (i == j) ? gram_self(*s[i]) : gram(*s[i], *s[j]);
        h.block(offset[i], offset[j], hij.rows(), hij.cols()) = hij;
        g.block(offset[i], offset[j], gij.rows(), gij.cols()) = gij;
        if (i != j) {
          h.block(offset[j], offset[i], hij.cols(), hij.rows()) = hij.adjoint();
          g.block(offset[j], offset[i], gij.cols(), gij.rows()) = gij.adjoint();
        }
      }
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Small> es(h, g);
    if (es.info() != Eigen::Success) {
      // basis lost definiteness: drop the search directions and retry next sweep
      p.resize(n, 0);
      ap.resize(n, 0);
      continue;
    }
    const Small c = es.eigenvectors().leftCols(b);
    lambda = es.eigenvalues().head(b);

    Block x_new(n, b), ax_new(n, b);
    x_new.noalias() = x * c.topRows(b);
    ax_new.noalias() = ax * c.topRows(b);
    Block p_new(n, b), ap_new(n, b);
    p_new.noalias() = w * c.middleRows(offset[1], w.cols());
    ap_new.noalias() = aw * c.middleRows(offset[1], w.cols());
    if (p.cols() > 0) {
      p_new.noalias() += p * c.middleRows(offset[2], p.cols());
      ap_new.noalias() += ap * c.middleRows(offset[2], p.cols());
    }
    x_new.noalias() += p_new;
    ax_new.noalias() += ap_new;
    x.swap(x_new);
    ax.swap(ax_new);
    p.swap(p_new);
    ap.swap(ap_new);

    if (iter % kRefreshEvery == 0) {
      // keep A·X from drifting away from the true product
      project_block(problem, x);
      svqb(x, nullptr);
      if (x.cols() == b) {
        apply_block(problem, x, ax);
        rayleigh_ritz_single(x, ax, lambda);
        p.resize(n, 0);
        ap.resize(n, 0);
      }
    }
  }

  residuals();
  result.converged = result.converged || nev_converged();
  result.values = lambda;
  result.vectors = std::move(x);
  result.residuals = res;
  return result;
}

}  // namespace dirac
