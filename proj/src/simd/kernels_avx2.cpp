#include "slq/simd/kernels.hpp"

#include <immintrin.h>

namespace slq::simd::avx2 {

static inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double weighted_sumsq(const double* x, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d xv = _mm256_loadu_pd(x + k);
        __m256d wv = _mm256_loadu_pd(w + k);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(xv, xv), wv, acc);
    }
    double tail = 0.0;
    for (; k < n; ++k) tail += w[k] * x[k] * x[k];
    return hsum(acc) + tail;
}

double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
        __m256d wv = _mm256_loadu_pd(w + k);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), wv, acc);
    }
    double tail = 0.0;
    for (; k < n; ++k) {
        double d = x[k] - y[k];
        tail += w[k] * d * d;
    }
    return hsum(acc) + tail;
}

std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n) {
    // Two interleaved complexes per 256-bit lane pair: [re0 im0 re1 im1].
    const double* ad = reinterpret_cast<const double*>(a);
    const double* bd = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd(); // interleaved [sum_re sum_im sum_re sum_im]
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        __m256d av = _mm256_loadu_pd(ad + 2 * k);
        __m256d bv = _mm256_loadu_pd(bd + 2 * k);
        __m256d t1 = _mm256_mul_pd(av, bv);                        // [ar*br ai*bi ...]
        __m256d bsw = _mm256_permute_pd(bv, 0b0101);               // [bi br ...]
        __m256d t2 = _mm256_mul_pd(av, bsw);                       // [ar*bi ai*br ...]
        __m256d re = _mm256_hsub_pd(t1, t1);                       // [re re ...]
        __m256d im = _mm256_hadd_pd(t2, t2);                       // [im im ...]
        __m256d prod = _mm256_blend_pd(re, im, 0b1010);            // [re im re im]
        __m256d wv = _mm256_setr_pd(w[k], w[k], w[k + 1], w[k + 1]);
        acc = _mm256_fmadd_pd(prod, wv, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    double re = _mm_cvtsd_f64(s);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; k < n; ++k) {
        double ar = a[k].real(), ai = a[k].imag();
        double br = b[k].real(), bi = b[k].imag();
        re += w[k] * (ar * br - ai * bi);
        im += w[k] * (ar * bi + ai * br);
    }
    return {re, im};
}

} // namespace slq::simd::avx2
