#pragma once

#include <complex>
#include <cstddef>

// Flat reduction kernels for the grid-sized inner loops (Hilbert-Schmidt
// accumulation, kernel application). A scalar reference implementation is
// always available; AVX2 and NEON variants are compiled per-architecture
// and selected at runtime. All variants must agree to roundoff; the test
// suite checks scalar/vector equivalence on random data.

namespace slq::simd {

enum class Backend { scalar, avx2, neon };

/// Backend the dispatched entry points currently route to.
Backend active_backend();

const char* backend_name(Backend b);

/// Pin the backend (tests). Throws std::invalid_argument if the requested
/// backend is not available on this machine.
void force_backend(Backend b);

/// Return to automatic selection.
void reset_backend();

/// sum_k w[k] * x[k]^2
double weighted_sumsq(const double* x, const double* w, std::size_t n);

/// sum_k w[k] * (x[k] - y[k])^2
double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n);

/// sum_k w[k] * a[k] * b[k]  (plain complex product, no conjugation)
std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n);

namespace scalar {
double weighted_sumsq(const double* x, const double* w, std::size_t n);
double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n);
std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n);
} // namespace scalar

#if defined(SLQ_HAVE_AVX2_TU)
namespace avx2 {
double weighted_sumsq(const double* x, const double* w, std::size_t n);
double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n);
std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n);
} // namespace avx2
#endif

#if defined(SLQ_HAVE_NEON_TU)
namespace neon {
double weighted_sumsq(const double* x, const double* w, std::size_t n);
double weighted_sumsq_diff(const double* x, const double* y, const double* w, std::size_t n);
std::complex<double> weighted_cdot(const std::complex<double>* a, const std::complex<double>* b,
                                   const double* w, std::size_t n);
} // namespace neon
#endif

} // namespace slq::simd
