#include "dirac/simd/kernels.hpp"

namespace dirac::simd {
namespace {

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double norm2_scalar(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
  }
}

void pauli_apply_scalar(const double* v1, const double* v2, const double* v3, const cplx* up,
                        const cplx* dn, cplx* out_up, cplx* out_dn, std::size_t n, double scale,
                        bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ur = up[i].real(), ui = up[i].imag();
    const double dr = dn[i].real(), di = dn[i].imag();
    const double a = v1[i], b = v2[i], c = v3[i];
    // (c u + (a − i b) d, (a + i b) u − c d)
    const double top_r = c * ur + a * dr + b * di;
    const double top_i = c * ui + a * di - b * dr;
    const double bot_r = a * ur - b * ui - c * dr;
    const double bot_i = a * ui + b * ur - c * di;
    if (accumulate) {
      out_up[i] += cplx(scale * top_r, scale * top_i);
      out_dn[i] += cplx(scale * bot_r, scale * bot_i);
    } else {
      out_up[i] = cplx(scale * top_r, scale * top_i);
      out_dn[i] = cplx(scale * bot_r, scale * bot_i);
    }
  }
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", dot_scalar, norm2_scalar, axpy_scalar, pauli_apply_scalar};
  return table;
}

}  // namespace dirac::simd
