#include "slq/simd/kernels.hpp"

#include <arm_neon.h>

namespace slq::simd::neon {

double weighted_sumsq(const double* x, const double* w, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t xv = vld1q_f64(x + k);
        float64x2_t wv = vld1q_f64(w + k);
        acc = vfmaq_f64(acc, vmulq_f64(xv, xv), wv);
    }
    double tail = 0.0;
    for (; k < n; ++k) tail += w[k] * x[k] * x[k];
    return vaddvq_f64(acc) + tail;
}

double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(x + k), vld1q_f64(y + k));
        float64x2_t wv = vld1q_f64(w + k);
        acc = vfmaq_f64(acc, vmulq_f64(d, d), wv);
    }
    double tail = 0.0;
    for (; k < n; ++k) {
        double d = x[k] - y[k];
        tail += w[k] * d * d;
    }
    return vaddvq_f64(acc) + tail;
}

std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n) {
    const double* ad = reinterpret_cast<const double*>(a);
    const double* bd = reinterpret_cast<const double*>(b);
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2x2_t av = vld2q_f64(ad + 2 * k); // val[0] = re, val[1] = im
        float64x2x2_t bv = vld2q_f64(bd + 2 * k);
        float64x2_t wv = vld1q_f64(w + k);
        float64x2_t re = vsubq_f64(vmulq_f64(av.val[0], bv.val[0]), vmulq_f64(av.val[1], bv.val[1]));
        float64x2_t im = vaddq_f64(vmulq_f64(av.val[0], bv.val[1]), vmulq_f64(av.val[1], bv.val[0]));
        acc_re = vfmaq_f64(acc_re, re, wv);
        acc_im = vfmaq_f64(acc_im, im, wv);
    }
    double re = vaddvq_f64(acc_re);
    double im = vaddvq_f64(acc_im);
    for (; k < n; ++k) {
        double ar = a[k].real(), ai = a[k].imag();
        double br = b[k].real(), bi = b[k].imag();
        re += w[k] * (ar * br - ai * bi);
        im += w[k] * (ar * bi + ai * br);
    }
    return {re, im};
}

} // namespace slq::simd::neon
