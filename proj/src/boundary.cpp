#include "slq/boundary.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace slq {

LinearBC::LinearBC(Matrix alpha_, Matrix beta_) : alpha(std::move(alpha_)), beta(std::move(beta_)) {
    if (alpha.rows() != alpha.cols() || beta.rows() != beta.cols() || alpha.rows() != beta.rows())
        throw std::invalid_argument("LinearBC: alpha and beta must be square of equal size");
    if (alpha.rows() % 2 != 0)
        throw std::invalid_argument("LinearBC: matrices must have even size 2s");
    dim = alpha.rows() / 2;
}

const char* extension_kind_name(ExtensionKind k) {
    switch (k) {
        case ExtensionKind::SelfAdjoint: return "SelfAdjoint";
        case ExtensionKind::MaximalDissipative: return "MaximalDissipative";
        case ExtensionKind::MaximalAccumulative: return "MaximalAccumulative";
        case ExtensionKind::OutsideTheorem: return "OutsideTheorem";
    }
    return "?";
}

std::pair<Vector, Vector> boundary_maps(const Vector& w_a, const Vector& w_b) {
    if (w_a.size() != w_b.size() || w_a.size() % 2 != 0)
        throw std::invalid_argument("boundary_maps: states must share an even size 2s");
    const Index s = w_a.size() / 2;
    Vector g1(2 * s), g2(2 * s);
    g1.head(s) = w_a.tail(s);
    g1.tail(s) = -w_b.tail(s);
    g2.head(s) = w_a.head(s);
    g2.tail(s) = w_b.head(s);
    return {g1, g2};
}

LinearBC canonical_to_linear(const CanonicalBC& bc) {
    if (bc.K.rows() != bc.K.cols() || bc.K.rows() % 2 != 0)
        throw std::invalid_argument("canonical_to_linear: K must be square of even size 2s");
    const Index s = bc.K.rows() / 2;
    const Complex unit = (bc.variant == BCVariant::LK) ? Complex(0, 1) : Complex(0, -1);
    const Matrix M = bc.K - Matrix::Identity(2 * s, 2 * s);
    const Matrix N = unit * (bc.K + Matrix::Identity(2 * s, 2 * s));
    Matrix alpha = Matrix::Zero(2 * s, 2 * s), beta = Matrix::Zero(2 * s, 2 * s);
    alpha.block(0, 0, s, s) = N.block(0, 0, s, s);
    alpha.block(0, s, s, s) = M.block(0, 0, s, s);
    alpha.block(s, 0, s, s) = N.block(s, 0, s, s);
    alpha.block(s, s, s, s) = M.block(s, 0, s, s);
    beta.block(0, 0, s, s) = N.block(0, s, s, s);
    beta.block(0, s, s, s) = -M.block(0, s, s, s);
    beta.block(s, 0, s, s) = N.block(s, s, s, s);
    beta.block(s, s, s, s) = -M.block(s, s, s, s);
    return LinearBC(std::move(alpha), std::move(beta));
}

ExtensionClass classify(const CanonicalBC& bc, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("classify: tol must be positive");
    const Index n = bc.K.rows();
    const double norm_K = spectral_norm(bc.K);
    const double defect = spectral_norm(Matrix(bc.K.adjoint() * bc.K - Matrix::Identity(n, n)));
    ExtensionKind kind;
    constexpr double contraction_slack = 1e-12;
    if (defect <= tol) {
        kind = ExtensionKind::SelfAdjoint;
    } else if (norm_K <= 1.0 + contraction_slack) {
        kind = (bc.variant == BCVariant::LK) ? ExtensionKind::MaximalDissipative
                                             : ExtensionKind::MaximalAccumulative;
    } else {
        kind = ExtensionKind::OutsideTheorem;
    }
    return {kind, norm_K, defect};
}

SeparationResult is_separated(const Matrix& K, double tol) {
    if (K.rows() != K.cols() || K.rows() % 2 != 0)
        throw std::invalid_argument("is_separated: K must be square of even size 2s");
    const Index s = K.rows() / 2;
    const double r12 = spectral_norm(K.block(0, s, s, s));
    const double r21 = spectral_norm(K.block(s, 0, s, s));
    const double res = std::max(r12, r21);
    return {res <= tol, res};
}

LinearBC separated_conditions(const Matrix& K_a, const Matrix& K_b, BCVariant variant) {
    if (K_a.rows() != K_a.cols() || K_b.rows() != K_b.cols() || K_a.rows() != K_b.rows())
        throw std::invalid_argument("separated_conditions: K_a, K_b must be square of equal size");
    const Index s = K_a.rows();
    const Complex unit = (variant == BCVariant::LK) ? Complex(0, 1) : Complex(0, -1);
    const Matrix I = Matrix::Identity(s, s);
    Matrix alpha = Matrix::Zero(2 * s, 2 * s), beta = Matrix::Zero(2 * s, 2 * s);
    alpha.block(0, 0, s, s) = unit * (K_a + I);
    alpha.block(0, s, s, s) = K_a - I;
    beta.block(s, 0, s, s) = unit * (K_b + I);
    beta.block(s, s, s, s) = -(K_b - I);
    return LinearBC(std::move(alpha), std::move(beta));
}

LinearBC dirichlet_bc(Index s) {
    return canonical_to_linear({Matrix::Identity(2 * s, 2 * s), BCVariant::LK});
}

LinearBC neumann_bc(Index s) {
    return canonical_to_linear({-Matrix::Identity(2 * s, 2 * s), BCVariant::LK});
}

LinearBC periodic_bc(Index s) {
    return LinearBC(Matrix::Identity(2 * s, 2 * s), -Matrix::Identity(2 * s, 2 * s));
}

} // namespace slq
