#include "slq/piecewise.hpp"

#include "slq/quadrature.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slq {

double spectral_norm(const Matrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double condition_number(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

PiecewiseMatrixPoly::PiecewiseMatrixPoly(std::vector<double> breakpoints, std::vector<Piece> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (breakpoints_.size() < 2)
        throw std::invalid_argument("PiecewiseMatrixPoly: need at least two breakpoints");
    if (pieces_.size() + 1 != breakpoints_.size())
        throw std::invalid_argument("PiecewiseMatrixPoly: piece/breakpoint count mismatch");
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
        if (!(breakpoints_[k] < breakpoints_[k + 1]))
            throw std::invalid_argument("PiecewiseMatrixPoly: breakpoints must be strictly increasing");
    for (const auto& p : pieces_) {
        if (p.coeff.empty())
            throw std::invalid_argument("PiecewiseMatrixPoly: empty piece");
        for (const auto& c : p.coeff) {
            if (c.rows() != c.cols())
                throw std::invalid_argument("PiecewiseMatrixPoly: coefficients must be square");
            if (dim_ == 0) dim_ = c.rows();
            if (c.rows() != dim_)
                throw std::invalid_argument("PiecewiseMatrixPoly: inconsistent coefficient dimension");
        }
    }
    trim();
}

void PiecewiseMatrixPoly::trim() {
    for (auto& p : pieces_)
        while (p.coeff.size() > 1 && p.coeff.back().isZero(0.0)) p.coeff.pop_back();
}

PiecewiseMatrixPoly PiecewiseMatrixPoly::constant(double a, double b, const Matrix& value) {
    return PiecewiseMatrixPoly({a, b}, {Piece{{value}}});
}

PiecewiseMatrixPoly PiecewiseMatrixPoly::zero(double a, double b, Index dim) {
    return constant(a, b, Matrix::Zero(dim, dim));
}

int PiecewiseMatrixPoly::max_degree() const {
    int d = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) d = std::max(d, degree(i));
    return d;
}

std::size_t PiecewiseMatrixPoly::piece_index(double t) const {
    const double a = left(), b = right();
    const double tol = 1e-12 * std::max(1.0, std::abs(b - a));
    if (t < a - tol || t > b + tol)
        throw std::out_of_range("PiecewiseMatrixPoly: evaluation point outside interval");
    if (t >= b) return pieces_.size() - 1;
    // first breakpoint strictly greater than t, then step back
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it == breakpoints_.begin()) return 0;
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Matrix PiecewiseMatrixPoly::eval_piece(std::size_t piece, double t) const {
    const auto& c = pieces_[piece].coeff;
    const double x = t - breakpoints_[piece];
    Matrix v = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) v = (v * x + c[k]).eval();
    return v;
}

Matrix PiecewiseMatrixPoly::eval(double t) const { return eval_piece(piece_index(t), t); }

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    const double span = std::max(std::abs(out.back() - out.front()), 1.0);
    const double tol = 1e-13 * span;
    std::vector<double> dedup;
    for (double t : out)
        if (dedup.empty() || t - dedup.back() > tol) dedup.push_back(t);
    return dedup;
}

PiecewiseMatrixPoly PiecewiseMatrixPoly::refined(const std::vector<double>& extra) const {
    std::vector<double> inside;
    for (double t : extra)
        if (t > left() && t < right()) inside.push_back(t);
    std::sort(inside.begin(), inside.end());
    std::vector<double> mesh = merge_breakpoints(breakpoints_, inside);

    std::vector<Piece> pieces;
    pieces.reserve(mesh.size() - 1);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double mid = 0.5 * (mesh[k] + mesh[k + 1]);
        const std::size_t src = piece_index(mid);
        const auto& c = pieces_[src].coeff;
        const double shift = mesh[k] - breakpoints_[src];
        // re-expand around the new left endpoint: (x + shift)^j binomials
        std::vector<Matrix> nc(c.size(), Matrix::Zero(dim_, dim_));
        for (std::size_t j = 0; j < c.size(); ++j) {
            double pow = 1.0, binom = 1.0;
            for (std::size_t i = 0; i <= j; ++i) {
                std::size_t lo = j - i; // target degree
                nc[lo] += binom * pow * c[j];
                pow *= shift;
                binom = binom * double(j - i) / double(i + 1);
            }
        }
        pieces.push_back(Piece{std::move(nc)});
    }
    return PiecewiseMatrixPoly(std::move(mesh), std::move(pieces));
}

PiecewiseMatrixPoly PiecewiseMatrixPoly::adjoint() const {
    std::vector<Piece> pieces = pieces_;
    for (auto& p : pieces)
        for (auto& c : p.coeff) c = c.adjoint().eval();
    return PiecewiseMatrixPoly(breakpoints_, std::move(pieces));
}

bool PiecewiseMatrixPoly::same_interval(const PiecewiseMatrixPoly& other, double tol) const {
    return std::abs(left() - other.left()) <= tol && std::abs(right() - other.right()) <= tol;
}

namespace {

template <typename Op>
PiecewiseMatrixPoly combine(const PiecewiseMatrixPoly& a, const PiecewiseMatrixPoly& b, Op op) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("PiecewiseMatrixPoly: dimension mismatch");
    if (!a.same_interval(b))
        throw std::invalid_argument("PiecewiseMatrixPoly: interval mismatch");
    PiecewiseMatrixPoly ra = a.refined(b.breakpoints());
    PiecewiseMatrixPoly rb = b.refined(a.breakpoints());
    std::vector<PiecewiseMatrixPoly::Piece> pieces;
    pieces.reserve(ra.piece_count());
    for (std::size_t i = 0; i < ra.piece_count(); ++i)
        pieces.push_back(op(ra.piece(i), rb.piece(i)));
    return PiecewiseMatrixPoly(ra.breakpoints(), std::move(pieces));
}

} // namespace

PiecewiseMatrixPoly operator+(PiecewiseMatrixPoly a, const PiecewiseMatrixPoly& b) {
    a += b;
    return a;
}

PiecewiseMatrixPoly operator-(PiecewiseMatrixPoly a, const PiecewiseMatrixPoly& b) {
    a -= b;
    return a;
}

PiecewiseMatrixPoly& PiecewiseMatrixPoly::operator+=(const PiecewiseMatrixPoly& rhs) {
    const Index d = dim_;
    *this = combine(*this, rhs, [d](const Piece& x, const Piece& y) {
        Piece out;
        out.coeff.assign(std::max(x.coeff.size(), y.coeff.size()), Matrix::Zero(d, d));
        for (std::size_t k = 0; k < x.coeff.size(); ++k) out.coeff[k] += x.coeff[k];
        for (std::size_t k = 0; k < y.coeff.size(); ++k) out.coeff[k] += y.coeff[k];
        return out;
    });
    return *this;
}

PiecewiseMatrixPoly& PiecewiseMatrixPoly::operator-=(const PiecewiseMatrixPoly& rhs) {
    const Index d = dim_;
    *this = combine(*this, rhs, [d](const Piece& x, const Piece& y) {
        Piece out;
        out.coeff.assign(std::max(x.coeff.size(), y.coeff.size()), Matrix::Zero(d, d));
        for (std::size_t k = 0; k < x.coeff.size(); ++k) out.coeff[k] += x.coeff[k];
        for (std::size_t k = 0; k < y.coeff.size(); ++k) out.coeff[k] -= y.coeff[k];
        return out;
    });
    return *this;
}

PiecewiseMatrixPoly operator*(const PiecewiseMatrixPoly& a, const PiecewiseMatrixPoly& b) {
    const Index d = a.dim();
    return combine(a, b, [d](const PiecewiseMatrixPoly::Piece& x, const PiecewiseMatrixPoly::Piece& y) {
        PiecewiseMatrixPoly::Piece out;
        out.coeff.assign(x.coeff.size() + y.coeff.size() - 1, Matrix::Zero(d, d));
        for (std::size_t i = 0; i < x.coeff.size(); ++i)
            for (std::size_t j = 0; j < y.coeff.size(); ++j) out.coeff[i + j] += x.coeff[i] * y.coeff[j];
        return out;
    });
}

PiecewiseMatrixPoly operator*(Complex s, PiecewiseMatrixPoly f) {
    for (auto& p : f.pieces_)
        for (auto& c : p.coeff) c *= s;
    f.trim();
    return f;
}

double PiecewiseMatrixPoly::l1_norm() const {
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double lo = breakpoints_[i], hi = breakpoints_[i + 1];
        const auto& rule = gauss_legendre(degree(i) + 3);
        double piece_sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
            piece_sum += rule.weights[q] * spectral_norm(eval_piece(i, t));
        }
        total += 0.5 * (hi - lo) * piece_sum;
    }
    return total;
}

} // namespace slq
