#pragma once

#include "slq/boundary.hpp"
#include "slq/coeffs.hpp"
#include "slq/mesh.hpp"

#include <functional>
#include <vector>

namespace slq {

/// Fundamental matrix Z(t) of w' = A(t) w with Z(a) = I, sampled on a mesh.
/// Constant pieces propagate by the exact matrix exponential; polynomial
/// pieces use a fourth-order commutator-free Magnus step on two Gauss nodes.
class FundamentalSolution {
public:
    FundamentalSolution(Mesh mesh, PiecewiseMatrixPoly system, Complex lambda,
                        std::vector<Matrix> samples, std::vector<Matrix> steps);

    const Mesh& mesh() const { return mesh_; }
    Complex lambda() const { return lambda_; }
    Index size() const { return samples_.front().rows(); } // 2s

    const Matrix& at_node(std::size_t k) const { return samples_[k]; }
    const Matrix& endpoint() const { return samples_.back(); }
    const std::vector<Matrix>& samples() const { return samples_; }
    /// Per-step transfer: Z(t_{k+1}) = step(k) * Z(t_k).
    const Matrix& step(std::size_t k) const { return steps_[k]; }

    /// Z at an arbitrary point of [a, b]; off-node values are produced by a
    /// single integrator step from the preceding node.
    Matrix eval(double t) const;

    const PiecewiseMatrixPoly& system() const { return system_; }

private:
    Mesh mesh_;
    PiecewiseMatrixPoly system_;
    Complex lambda_;
    std::vector<Matrix> samples_;
    std::vector<Matrix> steps_;
};

/// Transfer matrix over [t0, t1], which must lie inside one piece of A.
Matrix step_transfer(const PiecewiseMatrixPoly& A, std::size_t piece, double t0, double t1);

FundamentalSolution propagate(const PiecewiseMatrixPoly& A, const Mesh& mesh);
FundamentalSolution propagate(const ShinZettlMatrix& A, const Mesh& mesh);

/// Sampled solution trajectory w(t_k) = (y, D1y) of the boundary-value
/// problem w' = A w + (0, -f), alpha w(a) + beta w(b) = 0.
struct Trajectory {
    Mesh mesh;
    Index dim; // s
    std::vector<Vector> w;

    std::size_t size() const { return w.size(); }
};

/// Variation of parameters against the fundamental matrix; the particular
/// integral accumulates per step with the propagator's Gauss nodes. Throws
/// NumericalError when D = alpha + beta Z(b) fails the 1e12 condition bound.
Trajectory solve_inhomogeneous(const ShinZettlMatrix& A, const std::function<Vector(double)>& f,
                               const LinearBC& bc, const Mesh& mesh);

/// Top (k = 0) or bottom (k = 1) s-block of the trajectory; the
/// quasi-derivative is read off the state, never differenced numerically.
std::vector<Vector> quasi_derivative(const Trajectory& traj, int k);

/// max over the union of both node sets of || Z1(t) - Z2(t) || (spectral
/// norm). Off-node values come from FundamentalSolution::eval.
double sup_distance(const FundamentalSolution& Z1, const FundamentalSolution& Z2);

/// sup over the mesh of || Z(t_k) - I ||.
double sup_deviation_from_identity(const FundamentalSolution& Z);

} // namespace slq
