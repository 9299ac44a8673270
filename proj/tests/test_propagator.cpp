#include "slq/propagator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace slq;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix m1(Complex v) { return Matrix::Constant(1, 1, v); }

CoefficientSet free_particle(double a, double b) {
    return make_coefficients(PiecewiseMatrixPoly::constant(a, b, Matrix::Identity(1, 1)),
                             PiecewiseMatrixPoly::zero(a, b, 1), true);
}

CoefficientSet random_set(std::mt19937_64& rng, Index s, bool hermitian) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> degree_dist(0, 2);
    std::uniform_int_distribution<int> breaks_dist(0, 2);
    auto random_poly = [&](bool make_herm) {
        std::vector<double> bps{0.0};
        const int extra = breaks_dist(rng);
        for (int k = 1; k <= extra; ++k) bps.push_back(double(k) / double(extra + 1) + 0.1 * unif(rng) / (extra + 1));
        bps.push_back(1.0);
        std::vector<PiecewiseMatrixPoly::Piece> pieces;
        for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
            PiecewiseMatrixPoly::Piece piece;
            const int deg = degree_dist(rng);
            for (int d = 0; d <= deg; ++d) {
                Matrix c(s, s);
                for (Index i = 0; i < s; ++i)
                    for (Index j = 0; j < s; ++j) c(i, j) = Complex(unif(rng), unif(rng));
                if (make_herm) c = ((c + c.adjoint()) / 2.0).eval();
                piece.coeff.push_back(c);
            }
            pieces.push_back(piece);
        }
        return PiecewiseMatrixPoly(bps, pieces);
    };
    return make_coefficients(random_poly(hermitian), random_poly(hermitian), hermitian);
}

} // namespace

TEST_CASE("free particle fundamental matrix is [[1,t],[0,1]]") {
    const CoefficientSet c = free_particle(0, 1);
    const Mesh mesh = Mesh::refine({0.0, 1.0}, 0.25);
    const FundamentalSolution Z = propagate(shin_zettl(c, 0.0), mesh);
    for (std::size_t k = 0; k < mesh.size(); ++k) {
        const double t = mesh.nodes()[k];
        Matrix want(2, 2);
        want << 1, t, 0, 1;
        CHECK((Z.at_node(k) - want).norm() <= 1e-14);
    }
    // off-node evaluation matches the closed form too
    Matrix want(2, 2);
    want << 1, 0.37, 0, 1;
    CHECK((Z.eval(0.37) - want).norm() <= 1e-14);
}

TEST_CASE("rotation system lands on -I at pi") {
    const CoefficientSet c = free_particle(0, kPi);
    const Mesh mesh = Mesh::refine({0.0, kPi}, 0.5);
    const FundamentalSolution Z = propagate(shin_zettl(c, 1.0), mesh);
    CHECK((Z.endpoint() + Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("determinant stays one for random coefficient sets") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 10; ++rep) {
        const Index s = 1 + rep % 3;
        const CoefficientSet c = random_set(rng, s, rep % 2 == 0);
        const ShinZettlMatrix A = shin_zettl(c, 0.0);
        const Mesh mesh = Mesh::refine(A.system().breakpoints(), 1.0 / 64);
        const FundamentalSolution Z = propagate(A, mesh);
        for (const auto& sample : Z.samples()) {
            CAPTURE(rep);
            CHECK(std::abs(sample.determinant() - Complex(1, 0)) <= 1e-10);
        }
    }
}

TEST_CASE("hermitian coefficients and real lambda preserve the symplectic form") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 5; ++rep) {
        const Index s = 1 + rep % 2;
        const CoefficientSet c = random_set(rng, s, true);
        const ShinZettlMatrix A = shin_zettl(c, -0.7 + rep);
        const Mesh mesh = Mesh::refine(A.system().breakpoints(), 1.0 / 64);
        const FundamentalSolution Z = propagate(A, mesh);
        Matrix J = Matrix::Zero(2 * s, 2 * s);
        J.topRightCorner(s, s) = -Matrix::Identity(s, s);
        J.bottomLeftCorner(s, s) = Matrix::Identity(s, s);
        for (const auto& sample : Z.samples())
            CHECK(spectral_norm(Matrix(sample.adjoint() * J * sample - J)) <= 1e-9);
    }
}

TEST_CASE("cocycle: full propagation equals composition of halves") {
    // Q(t) = q0 + q1 t globally, split at 0.5 with re-expanded local pieces
    const Complex q0(0.4, 0.0), q1(-1.3, 0.0);
    const PiecewiseMatrixPoly Q_full({0.0, 1.0}, {PiecewiseMatrixPoly::Piece{{m1(q0), m1(q1)}}});
    const PiecewiseMatrixPoly Q_left({0.0, 0.5}, {PiecewiseMatrixPoly::Piece{{m1(q0), m1(q1)}}});
    const PiecewiseMatrixPoly Q_right({0.5, 1.0},
                                      {PiecewiseMatrixPoly::Piece{{m1(q0 + 0.5 * q1), m1(q1)}}});
    auto one = [](double a, double b) {
        return PiecewiseMatrixPoly::constant(a, b, Matrix::Identity(1, 1));
    };
    const ShinZettlMatrix A_full = shin_zettl(make_coefficients(one(0, 1), Q_full, true), 0.0);
    const ShinZettlMatrix A_left = shin_zettl(make_coefficients(one(0, 0.5), Q_left, true), 0.0);
    const ShinZettlMatrix A_right = shin_zettl(make_coefficients(one(0.5, 1), Q_right, true), 0.0);

    const Matrix Z_full =
        propagate(A_full, Mesh::refine({0.0, 0.5, 1.0}, 1.0 / 128)).endpoint();
    const Matrix Z_left = propagate(A_left, Mesh::refine({0.0, 0.5}, 1.0 / 128)).endpoint();
    const Matrix Z_right = propagate(A_right, Mesh::refine({0.5, 1.0}, 1.0 / 128)).endpoint();
    CHECK((Z_full - Z_right * Z_left).norm() <= 1e-10);
}

TEST_CASE("CF4 step shows fourth-order self-convergence") {
    // smooth, non-commuting system via a quadratic potential
    const PiecewiseMatrixPoly Q({0.0, 1.0},
                                {PiecewiseMatrixPoly::Piece{{m1(1.0), m1(2.0), m1(3.0)}}});
    const CoefficientSet c = make_coefficients(
        PiecewiseMatrixPoly::constant(0, 1, Matrix::Identity(1, 1)), Q, true);
    const ShinZettlMatrix A = shin_zettl(c, 0.0);

    const FundamentalSolution ref = propagate(A, Mesh::refine({0.0, 1.0}, 1.0 / 512));
    auto err = [&](double h) {
        const FundamentalSolution Z = propagate(A, Mesh::refine({0.0, 1.0}, h));
        return (Z.endpoint() - ref.endpoint()).norm();
    };
    const double e1 = err(1.0 / 16), e2 = err(1.0 / 32);
    CHECK(e1 / e2 > 10.0);
    CHECK(e1 / e2 < 26.0);
}

TEST_CASE("mesh refinement self-consistency") {
    const PiecewiseMatrixPoly Q({0.0, 1.0}, {PiecewiseMatrixPoly::Piece{{m1(0.5), m1(1.0)}}});
    const CoefficientSet c = make_coefficients(
        PiecewiseMatrixPoly::constant(0, 1, Matrix::Identity(1, 1)), Q, true);
    const ShinZettlMatrix A = shin_zettl(c, 0.0);
    const FundamentalSolution Z1 = propagate(A, Mesh::refine({0.0, 1.0}, 1.0 / 128));
    const FundamentalSolution Z2 = propagate(A, Mesh::refine({0.0, 1.0}, 1.0 / 256));
    CHECK(sup_distance(Z1, Z2) <= 1e-9);
    CHECK(sup_distance(Z1, Z1) == 0.0);
}

TEST_CASE("sup_distance against the identity solution") {
    const CoefficientSet c = free_particle(0, 1);
    const Mesh mesh = Mesh::refine({0.0, 1.0}, 0.125);
    const FundamentalSolution Z = propagate(shin_zettl(c, 0.0), mesh);
    const FundamentalSolution I =
        propagate(PiecewiseMatrixPoly::zero(0, 1, 2), Mesh::refine({0.0, 1.0}, 0.25));
    // Z(t) - I = [[0, t], [0, 0]], spectral norm t, maximal at t = 1
    CHECK(sup_distance(Z, I) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup_deviation_from_identity(Z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("propagate validates the mesh") {
    const CoefficientSet c = make_coefficients(
        PiecewiseMatrixPoly::constant(0, 1, Matrix::Identity(1, 1)),
        PiecewiseMatrixPoly({0.0, 0.3, 1.0}, {PiecewiseMatrixPoly::Piece{{m1(0.0)}},
                                              PiecewiseMatrixPoly::Piece{{m1(1.0)}}}),
        true);
    const ShinZettlMatrix A = shin_zettl(c, 0.0);
    CHECK_THROWS_AS(propagate(A, Mesh::refine({0.0, 1.0}, 0.6)), std::invalid_argument);
    CHECK_NOTHROW(propagate(A, Mesh::refine({0.0, 0.3, 1.0}, 0.6)));
}

TEST_CASE("solve_inhomogeneous oracles") {
    const CoefficientSet c = free_particle(0, 1);
    const ShinZettlMatrix A = shin_zettl(c, 0.0);
    const Mesh mesh = Mesh::refine({0.0, 1.0}, 1.0 / 200);
    const LinearBC bc = dirichlet_bc(1);

    SUBCASE("-y'' = 1 gives t(1-t)/2") {
        const Trajectory w =
            solve_inhomogeneous(A, [](double) { return Vector::Ones(1); }, bc, mesh);
        double worst = 0.0, worst_d1 = 0.0;
        for (std::size_t k = 0; k < mesh.size(); ++k) {
            const double t = mesh.nodes()[k];
            worst = std::max(worst, std::abs(w.w[k](0) - Complex(0.5 * t * (1 - t))));
            // Q = 0, so the quasi-derivative is plain y' = (1 - 2t)/2
            worst_d1 = std::max(worst_d1, std::abs(w.w[k](1) - Complex(0.5 * (1 - 2 * t))));
        }
        CHECK(worst <= 1e-8);
        CHECK(worst_d1 <= 1e-8);
    }
    SUBCASE("zero right side gives the zero trajectory") {
        const Trajectory w =
            solve_inhomogeneous(A, [](double) { return Vector::Zero(1); }, bc, mesh);
        for (const auto& wk : w.w) CHECK(wk.norm() <= 1e-14);
    }
    SUBCASE("-y'' = pi^2 sin(pi t) gives sin(pi t)") {
        auto f = [](double t) { return Vector(m1(kPi * kPi * std::sin(kPi * t))); };
        const Trajectory w = solve_inhomogeneous(A, f, bc, mesh);
        double worst = 0.0;
        for (std::size_t k = 0; k < mesh.size(); ++k)
            worst = std::max(worst,
                             std::abs(w.w[k](0) - Complex(std::sin(kPi * mesh.nodes()[k]))));
        CHECK(worst <= 1e-8);
    }
    SUBCASE("singular boundary matrix is rejected") {
        // Neumann at mu = 0 has the constants in its kernel
        CHECK_THROWS_AS(
            solve_inhomogeneous(A, [](double) { return Vector::Ones(1); }, neumann_bc(1), mesh),
            NumericalError);
    }
}

TEST_CASE("quasi-derivative extraction and the delta jump relation") {
    // Q = c 1(t > 1/2): D1y = y' - Q y, so y' jumps by c y(1/2) while the
    // trajectory state stays continuous
    const double cval = 2.0;
    const PiecewiseMatrixPoly Q({0.0, 0.5, 1.0}, {PiecewiseMatrixPoly::Piece{{m1(0.0)}},
                                                  PiecewiseMatrixPoly::Piece{{m1(cval)}}});
    const CoefficientSet c = make_coefficients(
        PiecewiseMatrixPoly::constant(0, 1, Matrix::Identity(1, 1)), Q, true);
    const ShinZettlMatrix A = shin_zettl(c, 0.0);
    const Mesh mesh = Mesh::refine({0.0, 0.5, 1.0}, 1.0 / 512);
    const Trajectory w =
        solve_inhomogeneous(A, [](double) { return Vector::Ones(1); }, dirichlet_bc(1), mesh);

    const auto y = quasi_derivative(w, 0);
    const auto d1y = quasi_derivative(w, 1);
    CHECK_THROWS_AS(quasi_derivative(w, 2), std::invalid_argument);
    CHECK(y.size() == mesh.size());

    const std::size_t mid = mesh.locate(0.5);
    REQUIRE(mesh.nodes()[mid] == doctest::Approx(0.5));
    const double h = mesh.nodes()[mid + 1] - mesh.nodes()[mid];
    // second-order one-sided difference quotients of y on each side
    const Complex yprime_right =
        (-3.0 * y[mid](0) + 4.0 * y[mid + 1](0) - y[mid + 2](0)) / (2 * h);
    const Complex yprime_left =
        (3.0 * y[mid](0) - 4.0 * y[mid - 1](0) + y[mid - 2](0)) / (2 * h);
    const Complex jump_observed = yprime_right - yprime_left;
    const Complex jump_expected = cval * y[mid](0);
    CHECK(std::abs(jump_observed - jump_expected) <= 1e-4 * std::abs(jump_expected));

    // and the quasi-derivative itself reconstructs y' via D1y + Q y
    const Complex yprime_from_state_left = d1y[mid](0) + 0.0 * y[mid](0);
    const Complex yprime_from_state_right = d1y[mid](0) + cval * y[mid](0);
    CHECK(std::abs(yprime_from_state_left - yprime_left) <= 1e-4 * (1 + std::abs(yprime_left)));
    CHECK(std::abs(yprime_from_state_right - yprime_right) <=
          1e-4 * (1 + std::abs(yprime_right)));
}

TEST_CASE("smooth test function: D1y jumps by minus the Q jump times y") {
    // direct evaluation of the definition on y(t) = t^2 + 1
    const double cval = 1.0;
    auto yfun = [](double t) { return t * t + 1.0; };
    auto yprime = [](double t) { return 2.0 * t; };
    const double t0 = 0.5;
    const double d1_left = yprime(t0) - 0.0 * yfun(t0);
    const double d1_right = yprime(t0) - cval * yfun(t0);
    CHECK(d1_right - d1_left == doctest::Approx(-cval * yfun(t0)));
}
