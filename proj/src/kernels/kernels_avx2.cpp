// Compiled with -mavx2 -mfma; only reached after the dispatcher has checked
// the CPU feature bits.

#include <immintrin.h>

#include "hbts/kernels.hpp"

namespace hbts::simd::avx2 {

namespace {

// std::complex<double> is layout-compatible with double[2].
inline const double* as_doubles(const Complex* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(Complex* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void zaxpy(std::size_t n, Complex a, const Complex* x, Complex* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // (xi, xr) pairs
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  if (i < n) scalar::zaxpy(n - i, a, x + i, y + i);
}

Complex zdotc(std::size_t n, const Complex* x, const Complex* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d re0 = _mm256_setzero_pd();
  __m256d re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd();
  __m256d im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    const __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    re1 = _mm256_fmadd_pd(x1, y1, re1);
    // (xr*yi, xi*yr) pairs
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
    im1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
  }
  const __m256d re = _mm256_add_pd(re0, re1);
  const __m256d im = _mm256_add_pd(im0, im1);
  // imaginary part: sum of even lanes minus sum of odd lanes
  const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  Complex acc(hsum(re), hsum(_mm256_mul_pd(im, sign)));
  if (i < n) acc += scalar::zdotc(n - i, x + i, y + i);
  return acc;
}

double dznrm2sq(std::size_t n, const Complex* x) {
  const double* xd = as_doubles(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  if (i < n) acc += scalar::dznrm2sq(n - i, x + i);
  return acc;
}

}  // namespace hbts::simd::avx2
