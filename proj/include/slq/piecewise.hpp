#pragma once

#include "slq/types.hpp"

#include <vector>

namespace slq {

/// Matrix-valued function on an interval [a, b]: a breakpoint mesh with one
/// matrix polynomial per subinterval, written in the local variable
/// (t - left endpoint of the piece). Values at interior breakpoints follow
/// the right-limit convention; at b the last piece applies.
class PiecewiseMatrixPoly {
public:
    /// Polynomial piece: coeff[k] multiplies (t - left)^k.
    struct Piece {
        std::vector<Matrix> coeff;
    };

    PiecewiseMatrixPoly(std::vector<double> breakpoints, std::vector<Piece> pieces);

    static PiecewiseMatrixPoly constant(double a, double b, const Matrix& value);
    static PiecewiseMatrixPoly zero(double a, double b, Index dim);

    double left() const { return breakpoints_.front(); }
    double right() const { return breakpoints_.back(); }
    Index dim() const { return dim_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    std::size_t piece_count() const { return pieces_.size(); }
    const Piece& piece(std::size_t i) const { return pieces_[i]; }

    int degree(std::size_t piece) const { return static_cast<int>(pieces_[piece].coeff.size()) - 1; }
    int max_degree() const;
    bool piece_is_constant(std::size_t i) const { return pieces_[i].coeff.size() == 1; }

    /// Index of the piece active at t (right-limit convention; t == b maps
    /// to the last piece). Throws std::out_of_range outside [a, b].
    std::size_t piece_index(double t) const;

    Matrix eval(double t) const;

    /// Evaluate the polynomial of a given piece at t (t need not lie inside
    /// the piece; used by integrators for one-sided limits).
    Matrix eval_piece(std::size_t piece, double t) const;

    /// Same values, finer mesh. Extra points outside (a, b) are ignored.
    PiecewiseMatrixPoly refined(const std::vector<double>& extra_breakpoints) const;

    PiecewiseMatrixPoly adjoint() const;

    /// integral of the pointwise spectral norm, per-piece Gauss-Legendre
    /// with deg+3 points (exact when the norm is a polynomial of degree
    /// <= 2 deg + 5 on the piece).
    double l1_norm() const;

    PiecewiseMatrixPoly& operator+=(const PiecewiseMatrixPoly& rhs);
    PiecewiseMatrixPoly& operator-=(const PiecewiseMatrixPoly& rhs);

    friend PiecewiseMatrixPoly operator+(PiecewiseMatrixPoly a, const PiecewiseMatrixPoly& b);
    friend PiecewiseMatrixPoly operator-(PiecewiseMatrixPoly a, const PiecewiseMatrixPoly& b);
    /// Pointwise matrix product a(t) * b(t); degrees add, meshes merge.
    friend PiecewiseMatrixPoly operator*(const PiecewiseMatrixPoly& a, const PiecewiseMatrixPoly& b);
    friend PiecewiseMatrixPoly operator*(Complex s, PiecewiseMatrixPoly f);

    /// True when both functions share interval endpoints to within tol.
    bool same_interval(const PiecewiseMatrixPoly& other, double tol = 1e-12) const;

private:
    std::vector<double> breakpoints_;
    std::vector<Piece> pieces_;
    Index dim_ = 0;

    void trim();
};

/// Union of the two breakpoint sets (deduplicated to a relative tolerance).
std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b);

} // namespace slq
