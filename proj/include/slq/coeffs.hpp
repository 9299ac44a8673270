#pragma once

#include "slq/piecewise.hpp"

#include <memory>

namespace slq {

/// The pair (p^{-1}, Q) together with the cached products p^{-1}Q, Qp^{-1},
/// Qp^{-1}Q on a common breakpoint mesh. The user supplies p^{-1} directly;
/// p itself is never formed. q = Q' is never evaluated pointwise - it lives
/// only in the jumps of Q across breakpoints.
struct CoefficientSet {
    PiecewiseMatrixPoly p_inv;
    PiecewiseMatrixPoly Q;
    PiecewiseMatrixPoly p_inv_Q;
    PiecewiseMatrixPoly Q_p_inv;
    PiecewiseMatrixPoly Q_p_inv_Q;
    bool hermitian = false;

    Index dim() const { return p_inv.dim(); }
    double left() const { return p_inv.left(); }
    double right() const { return p_inv.right(); }
};

/// Validates interval/dimension agreement, forms the products on the merged
/// mesh and, when `hermitian` is set, verifies p^{-1} = (p^{-1})* and
/// Q = Q* at piece-interior sample points (tolerance 1e-12).
CoefficientSet make_coefficients(const PiecewiseMatrixPoly& p_inv, const PiecewiseMatrixPoly& Q,
                                 bool hermitian);

/// Coefficient set of the formally adjoint expression: ((p^{-1})*, Q*).
CoefficientSet adjoint_coefficients(const CoefficientSet& c);

/// First-order system matrix of size 2s:
///
///   A(t; lambda) = [ p^{-1}Q              p^{-1}   ]
///                  [ -Qp^{-1}Q - lambda   -Qp^{-1} ]
///
/// tr A(t; 0) vanishes identically (tr p^{-1}Q = tr Qp^{-1}); the lambda
/// shift folds the spectral parameter of l[y] = lambda y + f into the
/// lower-left block.
class ShinZettlMatrix {
public:
    ShinZettlMatrix(std::shared_ptr<const CoefficientSet> source, Complex lambda);

    const PiecewiseMatrixPoly& system() const { return system_; }
    Complex lambda() const { return lambda_; }
    Index dim() const { return dim_; } // s (system size is 2s)
    bool hermitian_coefficients() const { return hermitian_; }
    const CoefficientSet& source() const { return *source_; }

    Matrix eval(double t) const { return system_.eval(t); }

private:
    std::shared_ptr<const CoefficientSet> source_;
    PiecewiseMatrixPoly system_;
    Complex lambda_;
    Index dim_;
    bool hermitian_;
};

ShinZettlMatrix shin_zettl(const CoefficientSet& c, Complex lambda);
ShinZettlMatrix shin_zettl(std::shared_ptr<const CoefficientSet> c, Complex lambda);

} // namespace slq
