#include "slq/boundary.hpp"

#include <doctest.h>

#include <Eigen/QR>
#include <random>

using namespace slq;

namespace {

Matrix random_matrix(Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = Complex(unif(rng), unif(rng));
    return m;
}

Matrix random_unitary(Index n, std::mt19937_64& rng) {
    return Eigen::HouseholderQR<Matrix>(random_matrix(n, rng)).householderQ();
}

Vector random_vector(Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(unif(rng), unif(rng));
    return v;
}

} // namespace

TEST_CASE("boundary maps extract the triplet blocks") {
    Vector w_a(2), w_b(2);
    w_a << 1.0, 2.0;
    w_b << 3.0, 4.0;
    const auto [g1, g2] = boundary_maps(w_a, w_b);
    CHECK(g1(0) == Complex(2.0));
    CHECK(g1(1) == Complex(-4.0));
    CHECK(g2(0) == Complex(1.0));
    CHECK(g2(1) == Complex(3.0));

    const auto [z1, z2] = boundary_maps(Vector::Zero(4), Vector::Zero(4));
    CHECK(z1.norm() == 0.0);
    CHECK(z2.norm() == 0.0);

    Vector wa4(4), wb4(4);
    wa4 << 1, 0, 0, 0; // y(a) = e1, D1y(a) = 0
    wb4 << 0, 1, 0, 0;
    const auto [g1b, g2b] = boundary_maps(wa4, wb4);
    CHECK(g2b(0) == Complex(1.0));
    CHECK(g2b(2) == Complex(0.0));
    CHECK(g2b(3) == Complex(1.0));
    CHECK(g1b.norm() == 0.0);
}

TEST_CASE("canonical conditions: Dirichlet, Neumann, K = 0") {
    const Complex i2(0, 2);
    SUBCASE("K = I is Dirichlet") {
        const LinearBC bc = canonical_to_linear({Matrix::Identity(2, 2), BCVariant::LK});
        Matrix alpha(2, 2), beta(2, 2);
        alpha << i2, 0, 0, 0;
        beta << 0, 0, i2, 0;
        CHECK((bc.alpha - alpha).norm() == 0.0);
        CHECK((bc.beta - beta).norm() == 0.0);
    }
    SUBCASE("K = -I is Neumann") {
        const LinearBC bc = canonical_to_linear({-Matrix::Identity(2, 2), BCVariant::LK});
        Matrix alpha(2, 2), beta(2, 2);
        alpha << 0, -2, 0, 0;
        beta << 0, 0, 0, 2;
        CHECK((bc.alpha - alpha).norm() == 0.0);
        CHECK((bc.beta - beta).norm() == 0.0);
    }
    SUBCASE("K = 0 gives D1y(a) = i y(a), D1y(b) = -i y(b)") {
        const LinearBC bc = canonical_to_linear({Matrix::Zero(2, 2), BCVariant::LK});
        // the two rows, applied to w(a) = (y(a), D1y(a)), w(b) = (y(b), D1y(b))
        Vector wa(2), wb(2);
        const Complex ya(0.7, -0.2);
        const Complex yb(-0.4, 1.1);
        wa << ya, Complex(0, 1) * ya;  // D1y(a) = i y(a)
        wb << yb, Complex(0, -1) * yb; // D1y(b) = -i y(b)
        CHECK((bc.alpha * wa + bc.beta * wb).norm() <= 1e-15);
    }
}

TEST_CASE("classification") {
    CHECK(classify({Matrix::Identity(4, 4), BCVariant::LK}).kind == ExtensionKind::SelfAdjoint);
    const ExtensionClass zero = classify({Matrix::Zero(2, 2), BCVariant::LK});
    CHECK(zero.kind == ExtensionKind::MaximalDissipative);
    CHECK(zero.norm_K == 0.0);
    CHECK(classify({Matrix::Zero(2, 2), BCVariant::LUpperK}).kind ==
          ExtensionKind::MaximalAccumulative);
    CHECK(classify({2.0 * Matrix::Identity(2, 2), BCVariant::LK}).kind ==
          ExtensionKind::OutsideTheorem);

    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix K = random_unitary(4, rng);
        const ExtensionClass cls = classify({K, BCVariant::LK});
        CAPTURE(rep);
        CHECK(cls.kind == ExtensionKind::SelfAdjoint);
        CHECK(cls.unitary_defect <= 1e-10);
    }
}

TEST_CASE("separated detection") {
    std::mt19937_64 rng(5);
    const Matrix Ka = random_matrix(2, rng), Kb = random_matrix(2, rng);
    Matrix K = Matrix::Zero(4, 4);
    K.topLeftCorner(2, 2) = Ka;
    K.bottomRightCorner(2, 2) = Kb;
    const SeparationResult sep = is_separated(K);
    CHECK(sep.separated);
    CHECK(sep.residual == 0.0);

    Matrix coupled = K;
    coupled.topRightCorner(2, 2) = Matrix::Identity(2, 2);
    const SeparationResult bad = is_separated(coupled);
    CHECK(!bad.separated);
    CHECK(bad.residual == doctest::Approx(1.0));

    CHECK(is_separated(Matrix::Identity(4, 4)).separated); // Dirichlet is separated
}

TEST_CASE("separated_conditions equals canonical_to_linear on diag(K_a, K_b)") {
    std::mt19937_64 rng(17);
    for (BCVariant variant : {BCVariant::LK, BCVariant::LUpperK}) {
        const Matrix Ka = random_matrix(3, rng), Kb = random_matrix(3, rng);
        Matrix K = Matrix::Zero(6, 6);
        K.topLeftCorner(3, 3) = Ka;
        K.bottomRightCorner(3, 3) = Kb;
        const LinearBC direct = separated_conditions(Ka, Kb, variant);
        const LinearBC via_K = canonical_to_linear({K, variant});
        CHECK((direct.alpha - via_K.alpha).cwiseAbs().maxCoeff() == 0.0);
        CHECK((direct.beta - via_K.beta).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("mixed Dirichlet-Neumann from scalar K_a = 1, K_b = -1") {
    const LinearBC bc = separated_conditions(Matrix::Identity(1, 1), -Matrix::Identity(1, 1),
                                             BCVariant::LK);
    Vector wa(2), wb(2);
    wa << 0.0, 3.7;  // y(a) = 0, any D1y(a)
    wb << -2.1, 0.0; // any y(b), D1y(b) = 0
    CHECK((bc.alpha * wa + bc.beta * wb).norm() <= 1e-15);
    Vector wa_bad(2);
    wa_bad << 1.0, 0.0;
    CHECK((bc.alpha * wa_bad + bc.beta * wb).norm() > 0.1);
}

TEST_CASE("canonical_to_linear encodes M G1 + N G2 = 0 exactly") {
    // for any state pair, alpha w(a) + beta w(b) must reproduce
    // (K - I) G1 + (+/- i)(K + I) G2 applied to the boundary maps
    std::mt19937_64 rng(71);
    for (int rep = 0; rep < 50; ++rep) {
        const Index s = 1 + rep % 3;
        const Matrix K = random_matrix(2 * s, rng);
        for (BCVariant variant : {BCVariant::LK, BCVariant::LUpperK}) {
            const LinearBC bc = canonical_to_linear({K, variant});
            const Vector w_a = random_vector(2 * s, rng), w_b = random_vector(2 * s, rng);
            const auto [g1, g2] = boundary_maps(w_a, w_b);
            const Complex unit = (variant == BCVariant::LK) ? Complex(0, 1) : Complex(0, -1);
            const Vector canonical = (K - Matrix::Identity(2 * s, 2 * s)) * g1 +
                                     unit * ((K + Matrix::Identity(2 * s, 2 * s)) * g2);
            const Vector linear = bc.alpha * w_a + bc.beta * w_b;
            CAPTURE(rep);
            CHECK((canonical - linear).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("abstract Green identity at the boundary") {
    // (G1 w, G2 z) - (G2 w, G1 z) = [D1y.conj(z) - y.conj(D1z)](a) - [...](b)
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const Index s = 1 + rep % 3;
        const Vector w_a = random_vector(2 * s, rng), w_b = random_vector(2 * s, rng);
        const Vector z_a = random_vector(2 * s, rng), z_b = random_vector(2 * s, rng);
        const auto [g1w, g2w] = boundary_maps(w_a, w_b);
        const auto [g1z, g2z] = boundary_maps(z_a, z_b);
        const Complex lhs = g2z.dot(g1w) - g1z.dot(g2w);
        auto bterm = [s](const Vector& w, const Vector& z) {
            return Vector(z.head(s)).dot(Vector(w.tail(s))) -
                   Vector(z.tail(s)).dot(Vector(w.head(s)));
        };
        const Complex rhs = bterm(w_a, z_a) - bterm(w_b, z_b);
        CAPTURE(rep);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}
