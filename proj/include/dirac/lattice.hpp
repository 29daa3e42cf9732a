#pragma once

// Matrix-free lattice discretisations on the periodic box:
//   T = σ·(D − A)            (2-spinor, Weyl–Dirac)
//   H = α·(D − A) + mβ       (4-spinor, Dirac with mass m ≥ 0)
//   H = α·D + Q              (4-spinor, general massless, Q Hermitian)
// D is the Fourier-spectral derivative; potentials are sampled at nodes.
//
// The spectral symbol σ·k vanishes on the grid only at k = 0, so T_h with
// A = 0 has exactly the two constant spinors as its kernel (no doubling).

#include "dirac/field.hpp"
#include "dirac/potential.hpp"

#include <memory>
#include <string>

namespace dirac {

enum class OperatorKind { Weyl, Dirac, MasslessGeneral };

const char* to_string(OperatorKind kind);

struct OperatorMetadata {
  std::string potential_label;
  double mass = 0.0;
  Grid grid;
  double wraparound = 0.0;  // wraparound_budget of A; 0 for matrix potentials
};

namespace detail {
class LatticeOperator;
}

class OperatorHandle {
 public:
  explicit OperatorHandle(std::shared_ptr<const detail::LatticeOperator> impl);

  SpinorField apply(const SpinorField& f) const;
  SpinorField adjoint_apply(const SpinorField& f) const;

  /// Raw form used by the solvers: `in` and `out` hold components()·n³ values
  /// and must not alias.
  void apply_raw(const cplx* in, cplx* out) const;

  OperatorKind kind() const;
  int components() const;
  const OperatorMetadata& metadata() const;
  const Grid& grid() const { return metadata().grid; }

 private:
  std::shared_ptr<const detail::LatticeOperator> impl_;
};

OperatorHandle build_weyl(const VectorPotential& a, const Grid& grid);
OperatorHandle build_dirac(const VectorPotential& a, double mass, const Grid& grid);
OperatorHandle build_massless_general(const MatrixPotential& q, const Grid& grid);

/// Potential samples at every node; throws Evaluation with the node on
/// non-finite values.
struct SampledPotential {
  std::vector<double> a1, a2, a3;
};
SampledPotential sample_potential(const VectorPotential& a, const Grid& grid);

/// sup |A| over the 26 cube directions at radius L/2: the size of the
/// potential where the periodic images meet.
double wraparound_budget(const VectorPotential& a, const Grid& grid);

}  // namespace dirac
