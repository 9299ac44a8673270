#pragma once

#include "slq/types.hpp"

#include <utility>

namespace slq {

/// Two-point condition alpha * w(a) + beta * w(b) = 0 on the stacked state
/// w = (y, D1y), y on top.
struct LinearBC {
    Matrix alpha; // 2s x 2s
    Matrix beta;  // 2s x 2s
    Index dim;    // s

    LinearBC(Matrix alpha_, Matrix beta_);
};

enum class BCVariant { LK, LUpperK };

/// Canonical parametrization (K - I) G1 y +/- i (K + I) G2 y = 0;
/// variant LK takes +i, LUpperK takes -i.
struct CanonicalBC {
    Matrix K; // 2s x 2s, unrestricted at construction
    BCVariant variant = BCVariant::LK;
};

enum class ExtensionKind { SelfAdjoint, MaximalDissipative, MaximalAccumulative, OutsideTheorem };

struct ExtensionClass {
    ExtensionKind kind;
    double norm_K;        // sigma_max(K)
    double unitary_defect; // ||K*K - I||
};

const char* extension_kind_name(ExtensionKind k);

/// Boundary maps of the triplet: G1 = (D1y(a), -D1y(b)), G2 = (y(a), y(b)),
/// extracted from the endpoint states w(a), w(b).
std::pair<Vector, Vector> boundary_maps(const Vector& w_a, const Vector& w_b);

/// Rewrite the canonical condition M G1 y + N G2 y = 0 as a LinearBC, where
/// M = K - I and N = +/- i (K + I).
LinearBC canonical_to_linear(const CanonicalBC& bc);

/// Classification per the contraction/unitary dichotomy. The unitary defect
/// is tested against tol; the contraction bound carries a fixed 1e-12 slack.
ExtensionClass classify(const CanonicalBC& bc, double tol = 1e-10);

struct SeparationResult {
    bool separated;
    double residual; // max of the two off-diagonal block norms
};

/// Separated boundary conditions correspond exactly to block-diagonal K.
SeparationResult is_separated(const Matrix& K, double tol = 1e-12);

/// Conditions (K_a - I) D1y(a) + i (K_a + I) y(a) = 0 and
/// -(K_b - I) D1y(b) + i (K_b + I) y(b) = 0 (sign of i flips for LUpperK).
/// Identical to canonical_to_linear on diag(K_a, K_b).
LinearBC separated_conditions(const Matrix& K_a, const Matrix& K_b, BCVariant variant);

LinearBC dirichlet_bc(Index s); // K = I
LinearBC neumann_bc(Index s);   // K = -I
LinearBC periodic_bc(Index s);  // alpha = I, beta = -I

} // namespace slq
