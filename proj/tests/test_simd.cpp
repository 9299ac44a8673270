#include "slq/simd/kernels.hpp"

#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

using namespace slq;

namespace {

struct Arrays {
    std::vector<double> x, y, w;
    std::vector<std::complex<double>> a, b;
};

Arrays random_arrays(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Arrays out;
    for (std::size_t k = 0; k < n; ++k) {
        out.x.push_back(unif(rng));
        out.y.push_back(unif(rng));
        out.w.push_back(0.5 + 0.5 * std::abs(unif(rng)));
        out.a.emplace_back(unif(rng), unif(rng));
        out.b.emplace_back(unif(rng), unif(rng));
    }
    return out;
}

std::vector<simd::Backend> available_backends() {
    std::vector<simd::Backend> out{simd::Backend::scalar};
#if defined(SLQ_HAVE_AVX2_TU)
    try {
        simd::force_backend(simd::Backend::avx2);
        out.push_back(simd::Backend::avx2);
    } catch (const std::invalid_argument&) {
    }
#endif
#if defined(SLQ_HAVE_NEON_TU)
    out.push_back(simd::Backend::neon);
#endif
    simd::reset_backend();
    return out;
}

} // namespace

TEST_CASE("simd kernels match the scalar reference on every backend") {
    for (std::size_t n : {0ul, 1ul, 2ul, 3ul, 5ul, 8ul, 33ul, 1024ul, 1027ul}) {
        const Arrays arr = random_arrays(n, 42 + static_cast<unsigned>(n));
        const double ref_sumsq = simd::scalar::weighted_sumsq(arr.x.data(), arr.w.data(), n);
        const double ref_diff =
            simd::scalar::weighted_sumsq_diff(arr.x.data(), arr.y.data(), arr.w.data(), n);
        const auto ref_cdot =
            simd::scalar::weighted_cdot(arr.a.data(), arr.b.data(), arr.w.data(), n);

        for (simd::Backend backend : available_backends()) {
            simd::force_backend(backend);
            CAPTURE(simd::backend_name(backend));
            CAPTURE(n);
            const double tol = 1e-13 * (1.0 + double(n));
            CHECK(simd::weighted_sumsq(arr.x.data(), arr.w.data(), n) ==
                  doctest::Approx(ref_sumsq).epsilon(tol));
            CHECK(simd::weighted_sumsq_diff(arr.x.data(), arr.y.data(), arr.w.data(), n) ==
                  doctest::Approx(ref_diff).epsilon(tol));
            const auto got = simd::weighted_cdot(arr.a.data(), arr.b.data(), arr.w.data(), n);
            CHECK(std::abs(got - ref_cdot) <= tol * (1.0 + std::abs(ref_cdot)));
        }
        simd::reset_backend();
    }
}

TEST_CASE("simd kernels reproduce hand values") {
    const double x[3] = {1.0, 2.0, 3.0};
    const double y[3] = {0.0, 1.0, 1.0};
    const double w[3] = {2.0, 1.0, 0.5};
    CHECK(simd::weighted_sumsq(x, w, 3) == doctest::Approx(2.0 + 4.0 + 4.5));
    CHECK(simd::weighted_sumsq_diff(x, y, w, 3) == doctest::Approx(2.0 + 1.0 + 2.0));

    const std::complex<double> a[2] = {{1.0, 1.0}, {2.0, 0.0}};
    const std::complex<double> b[2] = {{1.0, -1.0}, {0.0, 1.0}};
    // w0*(1+i)(1-i) + w1*2i = 2*2 + 1*2i
    const auto got = simd::weighted_cdot(a, b, w, 2);
    CHECK(got.real() == doctest::Approx(4.0));
    CHECK(got.imag() == doctest::Approx(2.0));
}

TEST_CASE("forcing an unavailable backend throws") {
#if !defined(SLQ_HAVE_NEON_TU)
    CHECK_THROWS_AS(simd::force_backend(simd::Backend::neon), std::invalid_argument);
#endif
#if !defined(SLQ_HAVE_AVX2_TU)
    CHECK_THROWS_AS(simd::force_backend(simd::Backend::avx2), std::invalid_argument);
#endif
    simd::reset_backend();
}
