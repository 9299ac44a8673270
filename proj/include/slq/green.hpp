#pragma once

#include "slq/propagator.hpp"

#include <functional>
#include <vector>

namespace slq {

/// Rectangular sample grid over [a,b] x [a,b].
struct TensorGrid {
    std::vector<double> t;
    std::vector<double> tau;

    static TensorGrid uniform(double a, double b, int n);
    bool same_as(const TensorGrid& other, double tol = 1e-12) const;
};

/// D(lambda) = alpha + beta * Z_lambda(b).
Matrix boundary_matrix(const ShinZettlMatrix& A, const LinearBC& bc, const Mesh& mesh);

/// Green matrix of w' = A w + phi under alpha w(a) + beta w(b) = 0:
///
///   G(t,tau) = Z(t) D^{-1} alpha Z(tau)^{-1}          (tau <= t)
///   G(t,tau) = -Z(t) D^{-1} beta Z(b) Z(tau)^{-1}     (tau > t)
///
/// with the unit jump G(t,t+) - G(t,t-) = -I across the diagonal. Samples
/// are stored cell by cell, row-major in (t, tau), each cell a (2s)^2
/// row-major complex block.
class GreenMatrix {
public:
    GreenMatrix(TensorGrid grid, Complex mu, Index s);

    const TensorGrid& grid() const { return grid_; }
    Complex mu() const { return mu_; }
    Index dim() const { return s_; } // s; cells are 2s x 2s

    Matrix cell(std::size_t i, std::size_t j) const;
    const Complex* data() const { return values_.data(); }

    /// || G(t_i, t_i^+) - G(t_i, t_i^-) + I || straight from the stored
    /// one-sided factors (diagnostic for the jump invariant).
    double jump_residual(std::size_t i) const;

private:
    friend GreenMatrix green_matrix(const ShinZettlMatrix&, const LinearBC&, const TensorGrid&,
                                    double);
    TensorGrid grid_;
    Complex mu_;
    Index s_;
    std::vector<Complex> values_;
    std::vector<Matrix> left_lower_;  // Z(t_i) D^{-1} alpha
    std::vector<Matrix> left_upper_;  // -Z(t_i) D^{-1} beta Z(b)
    std::vector<Matrix> right_;       // Z(tau_j)^{-1}
};

/// s x s resolvent kernel Gamma = -g_12 (upper-right block of G, negated).
class GreenKernel {
public:
    GreenKernel(TensorGrid grid, Complex mu, Index s);

    const TensorGrid& grid() const { return grid_; }
    Complex mu() const { return mu_; }
    Index dim() const { return s_; }

    Matrix cell(std::size_t i, std::size_t j) const;
    const Complex* data() const { return values_.data(); }
    Complex* data() { return values_.data(); }

private:
    TensorGrid grid_;
    Complex mu_;
    Index s_;
    std::vector<Complex> values_;
};

/// Assemble the Green matrix; A carries the spectral parameter mu. Throws
/// NumericalError when D = alpha + beta Z(b) fails the condition bound.
GreenMatrix green_matrix(const ShinZettlMatrix& A, const LinearBC& bc, const TensorGrid& grid,
                         double max_step);

GreenKernel green_kernel(const GreenMatrix& gm);

/// Convenience: kernel of (L - mu)^{-1} in one call.
GreenKernel resolvent_kernel(const CoefficientSet& c, const LinearBC& bc, Complex mu,
                             const TensorGrid& grid, double max_step);

/// y(t_i) = sum_j w_j Gamma(t_i, tau_j) f(tau_j), trapezoid weights.
std::vector<Vector> apply_resolvent(const GreenKernel& kernel, const std::vector<Vector>& f);

/// Tensor-trapezoid Hilbert-Schmidt norm ( iint ||Gamma||_F^2 )^{1/2}.
double hs_norm(const GreenKernel& kernel);

/// Hilbert-Schmidt norm of the difference; grids must coincide.
double hs_distance(const GreenKernel& k1, const GreenKernel& k2);

/// max over the grid of || Gamma_1 - Gamma_2 || (spectral norm per cell).
double sup_distance(const GreenKernel& k1, const GreenKernel& k2);

/// max-entry defect of Gamma(t,tau) = Gamma(tau,t)^* (square grids only).
double hermitian_symmetry_defect(const GreenKernel& kernel);

/// Residual of the Lagrange identity
///   int_a^b ( D2y . conj(z) - y . conj(D2z) ) dt
///     = ( D1y . conj(z) - y . conj(D1z) ) |_a^b
/// where y solves l[y] = f_y for coefficients c and z solves the formally
/// adjoint problem with right side f_z (so D2y = -f_y, D2z = -f_z exactly).
Complex greens_formula_residual(const CoefficientSet& c, const Trajectory& y,
                                const std::function<Vector(double)>& f_y, const Trajectory& z,
                                const std::function<Vector(double)>& f_z);

struct ResolventMembership {
    bool in_set;
    double condition; // cond of D(mu)
};

/// mu is declared inside the resolvent set when cond(D(mu)) < 1e12.
ResolventMembership in_resolvent_set(const ShinZettlMatrix& A_mu, const LinearBC& bc,
                                     double max_step);

} // namespace slq
