#include "slq/simd/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace slq::simd {

namespace scalar {

double weighted_sumsq(const double* x, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += w[k] * x[k] * x[k];
    return acc;
}

double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = x[k] - y[k];
        acc += w[k] * d * d;
    }
    return acc;
}

std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double ar = a[k].real(), ai = a[k].imag();
        double br = b[k].real(), bi = b[k].imag();
        re += w[k] * (ar * br - ai * bi);
        im += w[k] * (ar * bi + ai * br);
    }
    return {re, im};
}

} // namespace scalar

#if defined(SLQ_HAVE_AVX2_TU) && defined(__GNUC__)
static bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
static bool cpu_has_avx2() { return false; }
#endif

static Backend detect_backend() {
#if defined(SLQ_HAVE_AVX2_TU)
    if (cpu_has_avx2()) return Backend::avx2;
#endif
#if defined(SLQ_HAVE_NEON_TU)
    return Backend::neon;
#endif
    return Backend::scalar;
}

static std::atomic<Backend> g_backend{detect_backend()};

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

void force_backend(Backend b) {
    bool ok = (b == Backend::scalar);
#if defined(SLQ_HAVE_AVX2_TU)
    if (b == Backend::avx2 && cpu_has_avx2()) ok = true;
#endif
#if defined(SLQ_HAVE_NEON_TU)
    if (b == Backend::neon) ok = true;
#endif
    if (!ok) throw std::invalid_argument(std::string("simd backend not available: ") + backend_name(b));
    g_backend.store(b, std::memory_order_relaxed);
}

void reset_backend() { g_backend.store(detect_backend(), std::memory_order_relaxed); }

double weighted_sumsq(const double* x, const double* w, std::size_t n) {
    switch (active_backend()) {
#if defined(SLQ_HAVE_AVX2_TU)
        case Backend::avx2: return avx2::weighted_sumsq(x, w, n);
#endif
#if defined(SLQ_HAVE_NEON_TU)
        case Backend::neon: return neon::weighted_sumsq(x, w, n);
#endif
        default: return scalar::weighted_sumsq(x, w, n);
    }
}

double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n) {
    switch (active_backend()) {
#if defined(SLQ_HAVE_AVX2_TU)
        case Backend::avx2: return avx2::weighted_sumsq_diff(x, y, w, n);
#endif
#if defined(SLQ_HAVE_NEON_TU)
        case Backend::neon: return neon::weighted_sumsq_diff(x, y, w, n);
#endif
        default: return scalar::weighted_sumsq_diff(x, y, w, n);
    }
}

std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n) {
    switch (active_backend()) {
#if defined(SLQ_HAVE_AVX2_TU)
        case Backend::avx2: return avx2::weighted_cdot(a, b, w, n);
#endif
#if defined(SLQ_HAVE_NEON_TU)
        case Backend::neon: return neon::weighted_cdot(a, b, w, n);
#endif
        default: return scalar::weighted_cdot(a, b, w, n);
    }
}

} // namespace slq::simd
