// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "dirac/simd/kernels.hpp"

#if defined(__x86_64__) && defined(DIRAC_HAVE_AVX2)

#include <immintrin.h>

namespace dirac::simd {
namespace {

// Two complex doubles per register: [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// [v0, v0, v1, v1] from two consecutive reals.
inline __m256d splat_pairs(const double* v) {
  const __m128d lo = _mm_loadu_pd(v);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(lo), 0b01010000);
}

// i·z for each complex lane: (re, im) -> (−im, re)
inline __m256d mul_i(__m256d z) {
  const __m256d swapped = _mm256_permute_pd(z, 0b0101);
  return _mm256_mul_pd(swapped, _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();  // ar*br, ai*bi
  __m256d acc_im = _mm256_setzero_pd();  // ar*bi, ai*br (signs fixed below)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im);
  }
  double re = hsum(acc_re);
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double norm2_avx2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(a[i]);
  return s;
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = load2(x + i);
    __m256d vy = load2(y + i);
    vy = _mm256_fmadd_pd(ar, vx, vy);
    vy = _mm256_fmadd_pd(ai, mul_i(vx), vy);
    store2(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void pauli_apply_avx2(const double* v1, const double* v2, const double* v3, const cplx* up,
                      const cplx* dn, cplx* out_up, cplx* out_dn, std::size_t n, double scale,
                      bool accumulate) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = splat_pairs(v1 + i);
    const __m256d b = splat_pairs(v2 + i);
    const __m256d c = splat_pairs(v3 + i);
    const __m256d u = load2(up + i);
    const __m256d d = load2(dn + i);
    // top = c u + a d − b (i d);  bot = a u + b (i u) − c d
    __m256d top = _mm256_mul_pd(c, u);
    top = _mm256_fmadd_pd(a, d, top);
    top = _mm256_fnmadd_pd(b, mul_i(d), top);
    __m256d bot = _mm256_mul_pd(a, u);
    bot = _mm256_fmadd_pd(b, mul_i(u), bot);
    bot = _mm256_fnmadd_pd(c, d, bot);
    if (accumulate) {
      store2(out_up + i, _mm256_fmadd_pd(s, top, load2(out_up + i)));
      store2(out_dn + i, _mm256_fmadd_pd(s, bot, load2(out_dn + i)));
    } else {
      store2(out_up + i, _mm256_mul_pd(s, top));
      store2(out_dn + i, _mm256_mul_pd(s, bot));
    }
  }
  if (i < n) scalar().pauli_apply(v1 + i, v2 + i, v3 + i, up + i, dn + i, out_up + i, out_dn + i, n - i, scale, accumulate);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", dot_avx2, norm2_avx2, axpy_avx2, pauli_apply_avx2};
  return &table;
}

}  // namespace dirac::simd

#else

namespace dirac::simd {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace dirac::simd

#endif
