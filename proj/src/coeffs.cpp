#include "slq/coeffs.hpp"

#include <cmath>
#include <stdexcept>

namespace slq {

namespace {

void check_hermitian_samples(const PiecewiseMatrixPoly& f, const char* name) {
    // three interior samples per piece catch any non-Hermitian polynomial
    // coefficient up to degree 2
    const auto& bp = f.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const int nsamp = std::max(3, f.degree(i) + 1);
        for (int k = 0; k < nsamp; ++k) {
            const double t = bp[i] + (bp[i + 1] - bp[i]) * (k + 0.5) / nsamp;
            const Matrix v = f.eval(t);
            if ((v - v.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
                throw std::invalid_argument(std::string("make_coefficients: ") + name +
                                            " violates the Hermitian flag");
        }
    }
}

} // namespace

CoefficientSet make_coefficients(const PiecewiseMatrixPoly& p_inv, const PiecewiseMatrixPoly& Q,
                                 bool hermitian) {
    if (p_inv.dim() != Q.dim())
        throw std::invalid_argument("make_coefficients: dimension mismatch between p_inv and Q");
    if (!p_inv.same_interval(Q))
        throw std::invalid_argument("make_coefficients: interval mismatch between p_inv and Q");
    if (hermitian) {
        check_hermitian_samples(p_inv, "p_inv");
        check_hermitian_samples(Q, "Q");
    }
    // common refinement so all five functions share one mesh
    PiecewiseMatrixPoly pi = p_inv.refined(Q.breakpoints());
    PiecewiseMatrixPoly q = Q.refined(p_inv.breakpoints());
    PiecewiseMatrixPoly piq = pi * q;
    PiecewiseMatrixPoly qpi = q * pi;
    PiecewiseMatrixPoly qpiq = qpi * q;
    return CoefficientSet{std::move(pi), std::move(q), std::move(piq), std::move(qpi),
                          std::move(qpiq), hermitian};
}

CoefficientSet adjoint_coefficients(const CoefficientSet& c) {
    return make_coefficients(c.p_inv.adjoint(), c.Q.adjoint(), c.hermitian);
}

ShinZettlMatrix::ShinZettlMatrix(std::shared_ptr<const CoefficientSet> source, Complex lambda)
    : source_(std::move(source)), system_(PiecewiseMatrixPoly::zero(0, 1, 1)), lambda_(lambda) {
    const CoefficientSet& c = *source_;
    dim_ = c.dim();
    hermitian_ = c.hermitian;
    const Index s = dim_;

    // All products already live on one mesh, but refine defensively so the
    // block assembly can zip pieces index-by-index.
    PiecewiseMatrixPoly ul = c.p_inv_Q.refined(c.Q_p_inv_Q.breakpoints());
    PiecewiseMatrixPoly ur = c.p_inv.refined(ul.breakpoints());
    PiecewiseMatrixPoly ll = c.Q_p_inv_Q.refined(ul.breakpoints());
    PiecewiseMatrixPoly lr = c.Q_p_inv.refined(ul.breakpoints());

    std::vector<PiecewiseMatrixPoly::Piece> pieces;
    pieces.reserve(ul.piece_count());
    for (std::size_t i = 0; i < ul.piece_count(); ++i) {
        std::size_t deg = std::max({ul.piece(i).coeff.size(), ur.piece(i).coeff.size(),
                                    ll.piece(i).coeff.size(), lr.piece(i).coeff.size()});
        PiecewiseMatrixPoly::Piece piece;
        piece.coeff.assign(deg, Matrix::Zero(2 * s, 2 * s));
        auto put = [&](const PiecewiseMatrixPoly& src, Index r0, Index c0, Complex scale) {
            const auto& cf = src.piece(i).coeff;
            for (std::size_t k = 0; k < cf.size(); ++k)
                piece.coeff[k].block(r0, c0, s, s) += scale * cf[k];
        };
        put(ul, 0, 0, 1.0);
        put(ur, 0, s, 1.0);
        put(ll, s, 0, -1.0);
        put(lr, s, s, -1.0);
        piece.coeff[0].block(s, 0, s, s) -= lambda * Matrix::Identity(s, s);
        pieces.push_back(std::move(piece));
    }
    system_ = PiecewiseMatrixPoly(ul.breakpoints(), std::move(pieces));
}

ShinZettlMatrix shin_zettl(const CoefficientSet& c, Complex lambda) {
    return ShinZettlMatrix(std::make_shared<CoefficientSet>(c), lambda);
}

ShinZettlMatrix shin_zettl(std::shared_ptr<const CoefficientSet> c, Complex lambda) {
    return ShinZettlMatrix(std::move(c), lambda);
}

} // namespace slq
