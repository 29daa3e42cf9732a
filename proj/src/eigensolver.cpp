#include "dirac/eigensolver.hpp"

#include "dirac/error.hpp"
#include "dirac/fft.hpp"
#include "dirac/lobpcg.hpp"
#include "dirac/parallel.hpp"
#include "dirac/simd/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace dirac {

namespace {

// Fourier-diagonal (|k|² + shift)⁻¹ on each component.
std::function<void(cplx*)> laplace_preconditioner(const Grid& grid, int components, double shift) {
  const auto waves = wave_vectors(grid);
  auto weight = std::make_shared<std::vector<double>>(grid.size());
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k2 = waves->k1[i] * waves->k1[i] + waves->k2[i] * waves->k2[i] + waves->k3[i] * waves->k3[i];
    (*weight)[i] = inv_n / (k2 + shift);
  }
  const int n = grid.n();
  const std::size_t nodes = grid.size();
  return [weight, n, nodes, components](cplx* v) {
    const Fft3& fft = fft_for(n);
    parallel_for(static_cast<std::size_t>(components), [&](std::size_t c) {
      std::span<cplx> comp(v + c * nodes, nodes);
      fft.forward(comp);
      for (std::size_t i = 0; i < nodes; ++i) comp[i] *= (*weight)[i];
      fft.backward(comp);
    });
  };
}

// ((H₀(k) − t)² + shift)⁻¹ with H₀(k) = α·k + mβ. Since H₀(k)² = E², any
// g(H₀) equals a + b H₀ with a = (g(E)+g(−E))/2 and b = (g(E)−g(−E))/(2E).
std::function<void(cplx*)> dirac_preconditioner(const Grid& grid, double mass, double target, double shift) {
  const auto waves = wave_vectors(grid);
  const std::size_t nodes = grid.size();
  auto coef_a = std::make_shared<std::vector<double>>(nodes);
  auto coef_b = std::make_shared<std::vector<double>>(nodes);
  const double inv_n = 1.0 / static_cast<double>(nodes);
  auto g = [&](double lam) { return 1.0 / ((lam - target) * (lam - target) + shift); };
  for (std::size_t i = 0; i < nodes; ++i) {
    const double k2 = waves->k1[i] * waves->k1[i] + waves->k2[i] * waves->k2[i] + waves->k3[i] * waves->k3[i];
    const double e = std::sqrt(k2 + mass * mass);
    double a, b;
    if (e < 1e-12) {
      a = g(0.0);
      const double d = -target;  // g'(0) = −2(0 − t) g(0)²
      b = -2.0 * d * g(0.0) * g(0.0);
    } else {
      a = 0.5 * (g(e) + g(-e));
      b = (g(e) - g(-e)) / (2.0 * e);
    }
    (*coef_a)[i] = a * inv_n;
    (*coef_b)[i] = b * inv_n;
  }
  const int n = grid.n();
  return [waves, coef_a, coef_b, n, nodes, mass](cplx* v) {
    const Fft3& fft = fft_for(n);
    parallel_for(4, [&](std::size_t c) { fft.forward({v + c * nodes, nodes}); });
    std::vector<cplx> h0(4 * nodes);
    const auto& kern = simd::active();
    // H₀ (u; l) = (σ·k l + m u ; σ·k u − m l)
    kern.pauli_apply(waves->k1.data(), waves->k2.data(), waves->k3.data(), v + 2 * nodes, v + 3 * nodes, h0.data(),
                     h0.data() + nodes, nodes, 1.0, false);
    kern.pauli_apply(waves->k1.data(), waves->k2.data(), waves->k3.data(), v, v + nodes, h0.data() + 2 * nodes,
                     h0.data() + 3 * nodes, nodes, 1.0, false);
    if (mass != 0.0) {
      kern.axpy(mass, v, h0.data(), 2 * nodes);
      kern.axpy(-mass, v + 2 * nodes, h0.data() + 2 * nodes, 2 * nodes);
    }
    for (int c = 0; c < 4; ++c) {
      cplx* comp = v + c * nodes;
      const cplx* hc = h0.data() + c * nodes;
      for (std::size_t i = 0; i < nodes; ++i) comp[i] = (*coef_a)[i] * comp[i] + (*coef_b)[i] * hc[i];
    }
    parallel_for(4, [&](std::size_t c) { fft.backward({v + c * nodes, nodes}); });
  };
}

SpinorField column_as_field(const Grid& grid, int components, const Eigen::MatrixXcd& block, Eigen::Index col) {
  SpinorField f(grid, components);
  std::copy(block.col(col).data(), block.col(col).data() + f.size(), f.data());
  const double norm = f.norm();
  if (norm > 0.0) f *= 1.0 / norm;
  return f;
}

double safe_slope(const SpinorField& f) {
  const auto [lo, hi] = lattice_decay_window(f.grid());
  try {
    return decay_fit(f, lo, hi).slope;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateFit) return 0.0;
    throw;
  }
}

}  // namespace

KernelReport smallest_singular(const OperatorHandle& t, const KernelSearch& search) {
  if (t.kind() != OperatorKind::Weyl) fail(ErrorKind::InvalidParameter, "smallest_singular needs a Weyl operator");
  if (search.k < 1) fail(ErrorKind::InvalidParameter, "smallest_singular needs k >= 1");
  if (!(search.tol > 0.0)) fail(ErrorKind::InvalidParameter, "solver tolerance must be positive");
  const Grid& grid = t.grid();
  const std::size_t nodes = grid.size();
  const std::size_t dim = 2 * nodes;
  const std::size_t capacity = dim - (search.deflate_constants ? 2 : 0);
  const int block = search.k + 2;
  if (static_cast<std::size_t>(3 * block) >= capacity) {
    fail(ErrorKind::InvalidParameter, "k = " + std::to_string(search.k) + " exceeds the deflated subspace capacity");
  }

  auto tmp = std::make_shared<std::vector<cplx>>(dim);
  BlockProblem problem;
  problem.dim = dim;
  // Deflation compresses T_h onto the complement of the constants on both
  // sides: a periodic T_h ψ = s is solvable only for mean-free s.
  const bool deflate = search.deflate_constants;
  problem.apply = [&t, tmp, deflate, nodes, dim](const cplx* in, cplx* out) {
    t.apply_raw(in, tmp->data());
    if (deflate) remove_constants({tmp->data(), dim}, nodes);
    t.apply_raw(tmp->data(), out);
  };
  problem.precondition = laplace_preconditioner(grid, 2, grid.fundamental() * grid.fundamental());
  if (search.deflate_constants) problem.project = [nodes, dim](cplx* v) { remove_constants({v, dim}, nodes); };

  BlockOptions opt;
  opt.nev = search.k;
  opt.block = block;
  opt.tol = search.tol;
  opt.max_iter = search.max_iter;
  opt.seed = search.seed;

  Eigen::MatrixXcd initial;
  if (search.warm_start != nullptr && !search.warm_start->empty()) {
    initial.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(search.warm_start->size()));
    for (std::size_t j = 0; j < search.warm_start->size(); ++j) {
      const SpinorField& w = (*search.warm_start)[j];
      if (w.components() != 2 || !(w.grid() == grid)) fail(ErrorKind::InvalidParameter, "warm start does not match the grid");
      std::copy(w.data(), w.data() + dim, initial.col(static_cast<Eigen::Index>(j)).data());
    }
  }
  const BlockResult res = lobpcg(problem, opt, initial.size() > 0 ? &initial : nullptr);

  KernelReport rep;
  rep.grid = grid;
  rep.deflated_constants = search.deflate_constants;
  rep.potential_label = t.metadata().potential_label;
  rep.iterations = res.iterations;
  rep.converged = res.converged;
  rep.seed = search.seed;
  rep.discriminator = ZeroModeDiscriminator::for_grid(grid, t.metadata().wraparound);
  for (int i = 0; i < search.k; ++i) {
    SpinorField mode = column_as_field(grid, 2, res.vectors, i);
    SpinorField image = t.apply(mode);
    if (search.deflate_constants) remove_constants(image);
    const double residual = image.norm();
    const double sigma = std::sqrt(std::max(res.values(i), 0.0));
    const double slope = safe_slope(mode);
    const bool accepted = rep.discriminator.accepts(sigma, slope);
    rep.singular_values.push_back(sigma);
    rep.residuals.push_back(residual);
    rep.decay_slopes.push_back(slope);
    rep.zero_mode.push_back(accepted);
    rep.detected_dim += accepted ? 1 : 0;
    rep.modes.push_back(std::move(mode));
  }
  return rep;
}

KernelReport smallest_singular(const OperatorHandle& t, int k, double tol, int max_iter, std::uint64_t seed) {
  KernelSearch s;
  s.k = k;
  s.tol = tol;
  s.max_iter = max_iter;
  s.seed = seed;
  return smallest_singular(t, s);
}

cplx rayleigh_quotient_complex(const OperatorHandle& h, const SpinorField& f) {
  const double n2 = f.norm();
  if (!(n2 > 0.0)) fail(ErrorKind::InvalidParameter, "Rayleigh quotient of a zero field");
  return f.inner(h.apply(f)) / (n2 * n2);
}

double rayleigh_quotient(const OperatorHandle& h, const SpinorField& f) { return rayleigh_quotient_complex(h, f).real(); }

EigenReport interior_eigen(const OperatorHandle& h, double target, int k, double tol, int max_iter,
                           std::uint64_t seed) {
  if (h.kind() == OperatorKind::Weyl) fail(ErrorKind::InvalidParameter, "interior_eigen needs a 4-spinor operator");
  if (k < 1) fail(ErrorKind::InvalidParameter, "interior_eigen needs k >= 1");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidParameter, "solver tolerance must be positive");
  const Grid& grid = h.grid();
  const std::size_t nodes = grid.size();
  const std::size_t dim = 4 * nodes;
  const double mass = h.metadata().mass;
  const double fundamental = grid.fundamental();

  // H² − t² is positive semidefinite when no eigenvalue can lie strictly
  // inside (−|t|, |t|): always for Dirac with |t| ≤ m, and trivially at t = 0.
  // It keeps the conditioning of T_h² instead of the quartic gap of (H − t)².
  const bool folded = (h.kind() == OperatorKind::Dirac && std::abs(target) <= mass) || target == 0.0;
  const int nev = folded ? 2 * k : k;

  auto tmp = std::make_shared<std::vector<cplx>>(dim);
  BlockProblem problem;
  problem.dim = dim;
  double inner_tol;
  if (folded) {
    problem.apply = [&h, tmp, target, nodes, dim](const cplx* in, cplx* out) {
      h.apply_raw(in, tmp->data());
      remove_constants({tmp->data(), dim}, nodes);
      h.apply_raw(tmp->data(), out);
      simd::active().axpy(-target * target, in, out, dim);
    };
    problem.precondition =
        laplace_preconditioner(grid, 4, std::max(mass * mass - target * target, 0.0) + fundamental * fundamental);
    // ‖(H² − t²)f‖ ≈ (|λ| + |t|)·‖(H − λ)f‖ near the target
    inner_tol = tol * std::max(std::abs(target), fundamental);
  } else {
    problem.apply = [&h, tmp, target, nodes, dim](const cplx* in, cplx* out) {
      const auto& kern = simd::active();
      h.apply_raw(in, tmp->data());
      kern.axpy(-target, in, tmp->data(), dim);
      remove_constants({tmp->data(), dim}, nodes);
      h.apply_raw(tmp->data(), out);
      kern.axpy(-target, tmp->data(), out, dim);
    };
    const double e1 = std::sqrt(mass * mass + fundamental * fundamental);
    const double shift = std::max(1e-10, std::min((e1 - target) * (e1 - target), (e1 + target) * (e1 + target)));
    problem.precondition = dirac_preconditioner(grid, mass, target, shift);
    // The squared residual understates ‖(H − λ)f‖ by the distance to the
    // nearest other eigenvalue.
    inner_tol = tol * std::min(1.0, shift);
  }
  problem.project = [nodes, dim](cplx* v) { remove_constants({v, dim}, nodes); };

  BlockOptions opt;
  opt.nev = nev;
  opt.block = nev + 2;
  opt.max_iter = max_iter;
  opt.seed = seed;
  opt.tol = inner_tol;
  EigenReport rep;
  rep.grid = grid;
  rep.target = target;
  rep.mass = mass;
  rep.potential_label = h.metadata().potential_label;
  rep.seed = seed;
  rep.discriminator = ZeroModeDiscriminator::for_grid(grid, h.metadata().wraparound);

  BlockResult res;
  Eigen::MatrixXcd warm;
  std::vector<SpinorField> fields;
  std::vector<double> values, residuals;
  for (int round = 0; round < 4; ++round) {
    res = lobpcg(problem, opt, warm.size() > 0 ? &warm : nullptr);
    rep.iterations += res.iterations;

    // Rayleigh–Ritz with H on the converged columns recovers eigenpairs of H
    // (and splits ±λ pairs that the folded operator merges).
    auto apply_h = [&](const Eigen::MatrixXcd& x) {
      Eigen::MatrixXcd hx(x.rows(), x.cols());
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        h.apply_raw(x.col(j).data(), hx.col(j).data());
        remove_constants({hx.col(j).data(), dim}, nodes);
      }
      return hx;
    };
    auto rayleigh_ritz = [&](const Eigen::MatrixXcd& basis, const Eigen::MatrixXcd& hb) {
      Eigen::MatrixXcd hs = basis.adjoint() * hb;
      hs = 0.5 * (hs + hs.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
      const Eigen::MatrixXcd ritz = basis * es.eigenvectors();
      const Eigen::MatrixXcd hritz = hb * es.eigenvectors();
      fields.clear();
      values.clear();
      residuals.clear();
      for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        const double lam = es.eigenvalues()(j);
        values.push_back(lam);
        residuals.push_back((hritz.col(j) - lam * ritz.col(j)).norm() / ritz.col(j).norm());
        fields.push_back(column_as_field(grid, 4, ritz, j));
      }
    };
    auto accepted_k = [&] {
      std::vector<int> rank(fields.size());
      std::iota(rank.begin(), rank.end(), 0);
      std::stable_sort(rank.begin(), rank.end(),
                       [&](int a, int b) { return std::abs(values[a] - target) < std::abs(values[b] - target); });
      bool ok = true;
      for (int idx = 0; idx < k; ++idx) ok = ok && residuals[rank[idx]] < tol;
      return ok;
    };

    const Eigen::MatrixXcd x = res.vectors.leftCols(nev);
    const Eigen::MatrixXcd hx = apply_h(x);
    rayleigh_ritz(x, hx);
    if (folded && res.converged && !accepted_k()) {
      // A degenerate ±λ cluster wider than the block leaves span X invariant
      // under H² but not under H. span{X, HX} is invariant under both.
      Eigen::MatrixXcd ext(x.rows(), 2 * nev);
      ext << x, hx;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(ext.adjoint() * ext);
      const Eigen::VectorXd w = gram.eigenvalues();
      const double cut = 1e-12 * w.maxCoeff();
      Eigen::Index keep = 0;
      for (Eigen::Index j = 0; j < w.size(); ++j) keep += w(j) > cut ? 1 : 0;
      const Eigen::Index first = w.size() - keep;  // eigenvalues ascend
      Eigen::MatrixXcd basis = ext * gram.eigenvectors().rightCols(keep);
      for (Eigen::Index j = 0; j < keep; ++j) basis.col(j) /= std::sqrt(w(first + j));
      rayleigh_ritz(basis, apply_h(basis));
    }
    const bool ok = res.converged && accepted_k();
    rep.converged = ok;
    if (ok || rep.iterations >= max_iter) break;
    warm = res.vectors;
    opt.tol *= 0.1;
    opt.max_iter = std::max(1, max_iter - rep.iterations);
  }

  std::vector<int> order(fields.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(values[a] - target) < std::abs(values[b] - target); });
  for (int idx = 0; idx < k; ++idx) {
    const int i = order[idx];
    const SpinorField& f = fields[i];
    const double lam = values[i];
    const double sigma = std::sqrt(std::abs(lam * lam - mass * mass));
    const SpinorField upper = f.block(0, 2);
    const SpinorField lower = f.block(2, 2);
    const double slope = safe_slope(upper.norm() >= lower.norm() ? upper : lower);
    const bool accepted = rep.discriminator.accepts(sigma, slope);
    rep.eigenvalues.push_back(lam);
    rep.residuals.push_back(residuals[i]);
    rep.effective_sigma.push_back(sigma);
    rep.decay_slopes.push_back(slope);
    rep.threshold_mode.push_back(accepted);
    rep.detected_dim += accepted ? 1 : 0;
    rep.eigenfields.push_back(f);
  }
  return rep;
}

}  // namespace dirac
