#pragma once

#include "slq/green.hpp"

#include <string>
#include <vector>

namespace slq {

struct Eigenvalue {
    Complex lambda;
    int multiplicity;  // geometric, from the SVD null space of D(lambda)
    double residual;   // smallest singular value of D(lambda)
};

struct Eigenfunction {
    Complex lambda;
    Trajectory traj; // w = (y, D1y), ||y||_{L2} = 1, leading phase real positive
};

struct SpectralOptions {
    double max_step = 5e-3;        // propagation cap on non-constant pieces
    double sigma_rel_tol = 1e-8;   // accept sigma_min <= tol * sigma_max
    double refine_rel_width = 1e-10;
};

/// det(alpha + beta Z_lambda(b)); zeros are exactly the eigenvalues.
Complex char_det(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                 const SpectralOptions& opt = {});

/// D(lambda) = alpha + beta Z_lambda(b) on a spectral mesh (constant pieces
/// propagate in a single exact step).
Matrix characteristic_matrix(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                             const SpectralOptions& opt = {});

struct ScanOutcome {
    std::vector<Eigenvalue> eigenvalues; // sorted by Re lambda
    std::vector<std::string> warnings;
};

/// Real-axis search: sample sigma_min(D(lambda)) on a uniform scan grid,
/// bracket local minima, refine each by golden section, accept against the
/// sigma_min threshold.
ScanOutcome eigenvalues_real_scan(const CoefficientSet& c, const LinearBC& bc, double lambda_lo,
                                  double lambda_hi, int scan_points,
                                  const SpectralOptions& opt = {});

struct ComplexRect {
    double re_lo, re_hi, im_lo, im_hi;
};

/// Argument-principle search: winding number of det D along the rectangle
/// boundary, recursive quadrisection until roots are isolated, Newton
/// polish with a finite-difference derivative.
std::vector<Eigenvalue> eigenvalues_complex(const CoefficientSet& c, const LinearBC& bc,
                                            const ComplexRect& rect, int max_depth = 14,
                                            const SpectralOptions& opt = {});

/// One eigenfunction per (numerical) null vector of D(lambda). Each is
/// normalized to unit L2 norm with the first significant component of y at
/// the earliest grid point rotated to the positive real axis.
std::vector<Eigenfunction> eigenfunction_basis(const CoefficientSet& c, const LinearBC& bc,
                                               const Eigenvalue& ev,
                                               const SpectralOptions& opt = {});

/// Simpson-weighted L2 inner product int g(t)^* f(t) dt of sampled
/// s-vector functions on a common mesh.
Complex l2_inner(const Mesh& mesh, const std::vector<Vector>& f, const std::vector<Vector>& g);

} // namespace slq
