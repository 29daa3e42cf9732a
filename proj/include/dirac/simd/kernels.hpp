#pragma once

// Data-parallel inner loops of the lattice operators and the block solver.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. `active()` selects the best variant supported by the
// running CPU once; `scalar()` and `avx2()` expose the individual tables so
// tests can check the variants against each other.

#include <complex>
#include <cstddef>
#include <string_view>

namespace dirac::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  /// Σ conj(a_i) b_i
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);

  /// Σ |a_i|²
  double (*norm2)(const cplx* a, std::size_t n);

  /// y_i += alpha x_i
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);

  /// Pointwise 2-spinor product with σ·v(x):
  ///   out = (accumulate ? out : 0) + scale · (σ·v_i)(up_i, dn_i)
  /// v is given as three real arrays. `out_*` may alias `up`/`dn` only when
  /// accumulate is false.
  void (*pauli_apply)(const double* v1, const double* v2, const double* v3,
                      const cplx* up, const cplx* dn, cplx* out_up, cplx* out_dn,
                      std::size_t n, double scale, bool accumulate);
};

const KernelTable& scalar();

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2();

/// Best supported table. Overridable with DIRAC_THRESHOLD_SIMD=scalar.
const KernelTable& active();

}  // namespace dirac::simd
