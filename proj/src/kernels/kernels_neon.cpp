// aarch64 Advanced SIMD variants. One float64x2_t holds one complex value.

#include <arm_neon.h>

#include "hbts/kernels.hpp"

namespace hbts::simd::neon {

namespace {

inline const double* as_doubles(const Complex* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(Complex* p) { return reinterpret_cast<double*>(p); }

}  // namespace

void zaxpy(std::size_t n, Complex a, const Complex* x, Complex* y) {
  const float64x2_t ar = vdupq_n_f64(a.real());
  // (-ai, ai) so that the swapped product lands with the right sign
  const float64x2_t ai = {-a.imag(), a.imag()};
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t xs = vextq_f64(xv, xv, 1);  // (xi, xr)
    float64x2_t yv = vld1q_f64(yd + 2 * i);
    yv = vfmaq_f64(yv, ar, xv);
    yv = vfmaq_f64(yv, ai, xs);
    vst1q_f64(yd + 2 * i, yv);
  }
}

Complex zdotc(std::size_t n, const Complex* x, const Complex* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  float64x2_t re = vdupq_n_f64(0.0);
  float64x2_t im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    re = vfmaq_f64(re, xv, yv);                     // (xr*yr, xi*yi)
    im = vfmaq_f64(im, xv, vextq_f64(yv, yv, 1));   // (xr*yi, xi*yr)
  }
  return {vgetq_lane_f64(re, 0) + vgetq_lane_f64(re, 1), vgetq_lane_f64(im, 0) - vgetq_lane_f64(im, 1)};
}

double dznrm2sq(std::size_t n, const Complex* x) {
  const double* xd = as_doubles(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    acc = vfmaq_f64(acc, xv, xv);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

}  // namespace hbts::simd::neon
