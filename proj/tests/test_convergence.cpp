#include "slq/convergence.hpp"

#include "slq/propagator.hpp"

#include <doctest.h>

#include <cmath>

using namespace slq;

namespace {

Matrix m1(Complex v) { return Matrix::Constant(1, 1, v); }

// dense-quadrature oracle for the scalar L1 distance of two piecewise
// functions (independent of l1_norm's Gauss rule)
double l1_dist_brute(const PiecewiseMatrixPoly& f, const PiecewiseMatrixPoly& g, int n = 400001) {
    const double a = f.left(), b = f.right();
    double acc = 0.0;
    auto val = [&](double t) { return std::abs((f.eval(t) - g.eval(t))(0, 0)); };
    double prev = val(a);
    for (int k = 1; k < n; ++k) {
        const double t = a + (b - a) * double(k) / double(n - 1);
        const double cur = val(t);
        acc += 0.5 * (prev + cur) * (b - a) / double(n - 1);
        prev = cur;
    }
    return acc;
}

} // namespace

TEST_CASE("mollified delta family: closed-form hypothesis distances") {
    const double c = 1.0;
    const std::vector<double> widths{0.2, 0.1, 0.05};
    const Family fam = make_mollified_delta_family(0.5, c, widths, dirichlet_bc(1), -1.0);

    for (std::size_t k = 0; k < widths.size(); ++k) {
        const double eps = widths[k];
        const HypothesisDistances d = hypothesis_distances(fam, k);
        CAPTURE(eps);
        // p_inv is shared, boundary matrices are shared
        CHECK(d.p_inv == 0.0);
        CHECK(d.alpha == 0.0);
        CHECK(d.beta == 0.0);
        // int |Q_eps - Q_0| = c eps / 4 (two triangles of area c eps / 8)
        CHECK(d.p_inv_Q == doctest::Approx(c * eps / 4).epsilon(1e-10));
        CHECK(d.Q_p_inv == doctest::Approx(c * eps / 4).epsilon(1e-10));
        // int |Q_eps^2 - Q_0^2| = c^2 eps / 4 (c^2 eps/24 left + 5 c^2 eps/24 right)
        CHECK(d.Q_p_inv_Q == doctest::Approx(c * c * eps / 4).epsilon(1e-10));

        // cross-check both against the dense quadrature oracle
        const auto& Qe = fam.members[k].coeffs.Q;
        const auto& Q0 = fam.limit.coeffs.Q;
        CHECK(d.p_inv_Q == doctest::Approx(l1_dist_brute(Qe, Q0)).epsilon(1e-6));
        const auto& Qe2 = fam.members[k].coeffs.Q_p_inv_Q;
        const auto& Q02 = fam.limit.coeffs.Q_p_inv_Q;
        CHECK(d.Q_p_inv_Q == doctest::Approx(l1_dist_brute(Qe2, Q02)).epsilon(1e-6));
    }
}

TEST_CASE("zero-strength family is constant: all distances vanish") {
    const Family fam = make_mollified_delta_family(0.5, 0.0, {0.2, 0.1}, dirichlet_bc(1), -1.0);
    const HypothesisDistances d = hypothesis_distances(fam, 0);
    CHECK(d.p_inv == 0.0);
    CHECK(d.p_inv_Q == 0.0);
    CHECK(d.Q_p_inv == 0.0);
    CHECK(d.Q_p_inv_Q == 0.0);
    CHECK(mm_deviation(fam, 0, 1e-2) == 0.0);

    const ConvergenceReport report = resolvent_distances(fam, 101, 0.01, 0.01);
    for (const auto& row : report.rows) {
        CHECK(row.hs_dist == 0.0);
        CHECK(row.sup_dist == 0.0);
        CHECK(row.status == "ok");
    }
}

TEST_CASE("boundary matrix perturbation shows up in condition (5)") {
    Family fam = make_mollified_delta_family(0.5, 1.0, {0.1}, dirichlet_bc(1), -1.0);
    const double eps = 0.25;
    Matrix alpha = fam.members[0].bc.alpha;
    alpha(0, 0) += eps;
    fam.members[0].bc = LinearBC(alpha, fam.members[0].bc.beta);
    const HypothesisDistances d = hypothesis_distances(fam, 0);
    CHECK(d.alpha == doctest::Approx(eps).epsilon(1e-12));
    CHECK(d.beta == 0.0);
}

TEST_CASE("mm_deviation oracles") {
    SUBCASE("scalar constant deviation: sup |e^{eps t} - 1| = e^eps - 1") {
        for (double eps : {0.5, 0.1, 0.01}) {
            const PiecewiseMatrixPoly R = PiecewiseMatrixPoly::constant(0, 1, m1(eps));
            const FundamentalSolution Z = propagate(R, Mesh::refine({0.0, 1.0}, 0.05));
            CHECK(sup_deviation_from_identity(Z) ==
                  doctest::Approx(std::exp(eps) - 1).epsilon(1e-12));
        }
    }
    SUBCASE("family deviation decreases along the ladder") {
        const Family fam =
            make_mollified_delta_family(0.5, 1.0, {0.2, 0.1, 0.05}, dirichlet_bc(1), -1.0);
        std::vector<double> dev;
        for (std::size_t k = 0; k < fam.epsilons.size(); ++k)
            dev.push_back(mm_deviation(fam, k, 5e-3));
        CHECK(dev[0] > dev[1]);
        CHECK(dev[1] > dev[2]);
    }
}

TEST_CASE("resolvent distances decrease for the delta family") {
    const Family fam =
        make_mollified_delta_family(0.5, 1.0, {0.2, 0.1, 0.05}, dirichlet_bc(1), -1.0);
    const ConvergenceReport report = resolvent_distances(fam, 101, 0.01, 0.01);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        CHECK(row.status == "ok");
        // the proof's chain: HS <= (b - a) * sup, here b - a = 1
        CHECK(row.hs_dist <= row.sup_dist + 1e-12);
    }
    CHECK(report.rows[0].hs_dist > report.rows[1].hs_dist);
    CHECK(report.rows[1].hs_dist > report.rows[2].hs_dist);
}

TEST_CASE("negative control: violated condition (5) blocks convergence") {
    const std::vector<double> widths{0.2, 0.1, 0.05};
    const Family fam = make_condition5_violation_family(0.5, 1.0, widths, dirichlet_bc(1), -1.0,
                                                        std::atan(1.0)); // pi/4
    for (std::size_t k = 0; k < widths.size(); ++k) {
        const HypothesisDistances d = hypothesis_distances(fam, k);
        CHECK(d.alpha > 0.1); // condition (5) genuinely fails
    }
    const ConvergenceReport report = resolvent_distances(fam, 101, 0.01, 0.01);
    CHECK(report.rows.back().hs_dist > 1e-2);
}

TEST_CASE("mu outside the limit resolvent set aborts with a diagnostic") {
    // Dirichlet free on (0,1): pi^2 is an eigenvalue of the limit problem
    const Family fam = make_mollified_delta_family(0.5, 0.0, {0.1}, dirichlet_bc(1),
                                                   std::numbers::pi * std::numbers::pi);
    CHECK_THROWS_AS(resolvent_distances(fam, 33, 0.02, 0.02), NumericalError);
}

TEST_CASE("reports are deterministic") {
    const Family fam =
        make_mollified_delta_family(0.5, 1.0, {0.2, 0.1}, dirichlet_bc(1), -1.0);
    const ConvergenceReport r1 = resolvent_distances(fam, 65, 0.02, 0.02);
    const ConvergenceReport r2 = resolvent_distances(fam, 65, 0.02, 0.02);
    for (std::size_t k = 0; k < r1.rows.size(); ++k) {
        CHECK(r1.rows[k].hs_dist == r2.rows[k].hs_dist);
        CHECK(r1.rows[k].sup_dist == r2.rows[k].sup_dist);
        CHECK(r1.rows[k].mm_dev == r2.rows[k].mm_dev);
    }
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(make_mollified_delta_family(0.05, 1.0, {0.2}, dirichlet_bc(1), -1.0),
                    std::invalid_argument); // ramp escapes the interval
    CHECK_THROWS_AS(make_mollified_delta_family(0.5, 1.0, {0.1, 0.2}, dirichlet_bc(1), -1.0),
                    std::invalid_argument); // widths must decrease
    Family fam = make_mollified_delta_family(0.5, 1.0, {0.2, 0.1}, dirichlet_bc(1), -1.0);
    std::swap(fam.epsilons[0], fam.epsilons[1]);
    CHECK_THROWS_AS(fam.validate(), std::invalid_argument);
    CHECK_THROWS_AS(hypothesis_distances(fam, 5), std::out_of_range);
}
