#include "slq/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace slq {

namespace {

// Gauss(2) nodes and the CF4 combination weights.
constexpr double kGaussOffset = 0.28867513459481288225; // sqrt(3)/6
constexpr double kAlpha1 = 0.25 + kGaussOffset;
constexpr double kAlpha2 = 0.25 - kGaussOffset;

} // namespace

Matrix step_transfer(const PiecewiseMatrixPoly& A, std::size_t piece, double t0, double t1) {
    const double h = t1 - t0;
    if (h <= 0.0) throw std::invalid_argument("step_transfer: step size must be positive");
    if (A.piece_is_constant(piece)) {
        return Matrix(h * A.piece(piece).coeff[0]).exp();
    }
    const double c1 = t0 + h * (0.5 - kGaussOffset);
    const double c2 = t0 + h * (0.5 + kGaussOffset);
    const Matrix A1 = A.eval_piece(piece, c1);
    const Matrix A2 = A.eval_piece(piece, c2);
    const Matrix sigma_right = h * (kAlpha1 * A1 + kAlpha2 * A2);
    const Matrix sigma_left = h * (kAlpha2 * A1 + kAlpha1 * A2);
    return sigma_left.exp() * sigma_right.exp();
}

FundamentalSolution::FundamentalSolution(Mesh mesh, PiecewiseMatrixPoly system, Complex lambda,
                                         std::vector<Matrix> samples, std::vector<Matrix> steps)
    : mesh_(std::move(mesh)), system_(std::move(system)), lambda_(lambda),
      samples_(std::move(samples)), steps_(std::move(steps)) {}

Matrix FundamentalSolution::eval(double t) const {
    const std::size_t k = mesh_.locate(t);
    const double tk = mesh_.nodes()[k];
    if (t == tk) return samples_[k];
    if (k + 1 < mesh_.nodes().size() && t == mesh_.nodes()[k + 1]) return samples_[k + 1];
    const std::size_t piece = system_.piece_index(0.5 * (tk + t));
    return step_transfer(system_, piece, tk, t) * samples_[k];
}

static void check_mesh_against(const PiecewiseMatrixPoly& A, const Mesh& mesh) {
    const double tol = 1e-12 * std::max(1.0, A.right() - A.left());
    if (std::abs(mesh.front() - A.left()) > tol || std::abs(mesh.back() - A.right()) > tol)
        throw std::invalid_argument("propagate: mesh does not cover the coefficient interval");
    for (double bp : A.breakpoints())
        if (!mesh.contains_node(bp, tol))
            throw std::invalid_argument("propagate: mesh is missing a coefficient breakpoint");
}

static FundamentalSolution propagate_impl(const PiecewiseMatrixPoly& A, const Mesh& mesh,
                                          Complex lambda) {
    check_mesh_against(A, mesh);
    const auto& nodes = mesh.nodes();
    std::vector<Matrix> samples;
    std::vector<Matrix> steps;
    samples.reserve(nodes.size());
    steps.reserve(nodes.size() - 1);
    samples.push_back(Matrix::Identity(A.dim(), A.dim()));
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const std::size_t piece = A.piece_index(0.5 * (nodes[k] + nodes[k + 1]));
        steps.push_back(step_transfer(A, piece, nodes[k], nodes[k + 1]));
        samples.push_back(steps.back() * samples.back());
    }
    return FundamentalSolution(mesh, A, lambda, std::move(samples), std::move(steps));
}

FundamentalSolution propagate(const PiecewiseMatrixPoly& A, const Mesh& mesh) {
    return propagate_impl(A, mesh, Complex(0, 0));
}

FundamentalSolution propagate(const ShinZettlMatrix& A, const Mesh& mesh) {
    return propagate_impl(A.system(), mesh, A.lambda());
}

Trajectory solve_inhomogeneous(const ShinZettlMatrix& A, const std::function<Vector(double)>& f,
                               const LinearBC& bc, const Mesh& mesh) {
    const Index s = A.dim();
    if (bc.dim != s) throw std::invalid_argument("solve_inhomogeneous: boundary dimension mismatch");
    const PiecewiseMatrixPoly& sys = A.system();
    FundamentalSolution Z = propagate(sys, mesh);

    const Matrix Zb = Z.endpoint();
    const Matrix D = bc.alpha + bc.beta * Zb;
    if (condition_number(D) >= 1e12)
        throw NumericalError("lambda is not in the resolvent set for this boundary condition");

    auto phi = [&](double t) {
        Vector v = Vector::Zero(2 * s);
        v.tail(s) = -f(t);
        return v;
    };

    // v(t) = int_a^t Z^{-1} phi, two Gauss nodes per step
    const auto& nodes = mesh.nodes();
    std::vector<Vector> v(nodes.size(), Vector::Zero(2 * s));
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double h = nodes[k + 1] - nodes[k];
        const std::size_t piece = sys.piece_index(0.5 * (nodes[k] + nodes[k + 1]));
        Vector acc = Vector::Zero(2 * s);
        for (double offset : {0.5 - kGaussOffset, 0.5 + kGaussOffset}) {
            const double tq = nodes[k] + h * offset;
            const Matrix Zq = step_transfer(sys, piece, nodes[k], tq) * Z.at_node(k);
            acc += (0.5 * h) * Zq.partialPivLu().solve(phi(tq));
        }
        v[k + 1] = v[k] + acc;
    }

    const Vector c = -D.partialPivLu().solve(bc.beta * (Zb * v.back()));
    Trajectory traj{mesh, s, {}};
    traj.w.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) traj.w.push_back(Z.at_node(k) * (c + v[k]));
    return traj;
}

std::vector<Vector> quasi_derivative(const Trajectory& traj, int k) {
    if (k != 0 && k != 1) throw std::invalid_argument("quasi_derivative: k must be 0 or 1");
    std::vector<Vector> out;
    out.reserve(traj.w.size());
    for (const auto& w : traj.w)
        out.push_back(k == 0 ? Vector(w.head(traj.dim)) : Vector(w.tail(traj.dim)));
    return out;
}

double sup_distance(const FundamentalSolution& Z1, const FundamentalSolution& Z2) {
    const double tol = 1e-12;
    if (std::abs(Z1.mesh().front() - Z2.mesh().front()) > tol ||
        std::abs(Z1.mesh().back() - Z2.mesh().back()) > tol)
        throw std::invalid_argument("sup_distance: interval mismatch");
    double best = 0.0;
    for (double t : merged_nodes(Z1.mesh(), Z2.mesh()))
        best = std::max(best, spectral_norm(Matrix(Z1.eval(t) - Z2.eval(t))));
    return best;
}

double sup_deviation_from_identity(const FundamentalSolution& Z) {
    const Index n = Z.size();
    double best = 0.0;
    for (const auto& sample : Z.samples())
        best = std::max(best, spectral_norm(Matrix(sample - Matrix::Identity(n, n))));
    return best;
}

} // namespace slq
