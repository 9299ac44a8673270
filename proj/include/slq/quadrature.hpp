#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace slq {

/// Gauss-Legendre rule on [-1, 1]. Nodes ascending, weights sum to 2.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule with n points (exact for polynomials of degree 2n-1).
const GaussRule& gauss_legendre(int n);

/// Composite trapezoid weights for an arbitrary ascending node vector.
std::vector<double> trapezoid_weights(std::span<const double> nodes);

/// Composite Simpson over uniformly spaced nodes (even interval count).
/// Falls back to trapezoid on the last interval when the count is odd.
std::vector<double> simpson_weights(std::span<const double> nodes);

} // namespace slq
