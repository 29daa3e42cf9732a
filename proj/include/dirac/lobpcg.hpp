#pragma once

// Block locally optimal preconditioned conjugate gradient (LOBPCG) for the
// lowest eigenpairs of a Hermitian positive semi-definite operator given
// only through its action. Optional projector restricts the iteration to a
// subspace (used to deflate the constant spinors).

#include "dirac/spinor.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>

namespace dirac {

struct BlockProblem {
  std::size_t dim = 0;
  /// out = A in, both length dim.
  std::function<void(const cplx* in, cplx* out)> apply;
  /// In-place preconditioner (Hermitian positive definite); empty = identity.
  std::function<void(cplx* v)> precondition;
  /// In-place orthogonal projector onto the search space; empty = identity.
  std::function<void(cplx* v)> project;
};

struct BlockOptions {
  int nev = 1;            // eigenpairs that must converge
  int block = 3;          // ≥ nev; extra columns guard convergence
  double tol = 1e-6;      // absolute residual ‖Ax − λx‖ on unit vectors
  int max_iter = 500;
  std::uint64_t seed = 0;
};

struct BlockResult {
  Eigen::VectorXd values;     // ascending, length block
  Eigen::MatrixXcd vectors;   // dim × block, orthonormal (Euclidean)
  Eigen::VectorXd residuals;  // ‖Ax − λx‖ per column
  int iterations = 0;
  bool converged = false;
};

/// `initial`, when given, seeds the first columns of the block; the rest
/// are drawn from a normal distribution seeded with `seed`.
BlockResult lobpcg(const BlockProblem& problem, const BlockOptions& options,
                   const Eigen::MatrixXcd* initial = nullptr);

}  // namespace dirac
