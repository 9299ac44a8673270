#include "slq/mesh.hpp"

#include "slq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace slq {

Mesh::Mesh(std::vector<double> nodes, std::vector<double> segments)
    : nodes_(std::move(nodes)), segments_(std::move(segments)) {
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
        if (!(nodes_[k] < nodes_[k + 1]))
            throw std::invalid_argument("Mesh: nodes must be strictly increasing");
        max_step_ = std::max(max_step_, nodes_[k + 1] - nodes_[k]);
    }
}

Mesh Mesh::refine(const std::vector<double>& breakpoints, double max_step,
                  const std::vector<double>& required) {
    if (max_step <= 0.0) throw std::invalid_argument("Mesh: max_step must be positive");
    std::vector<double> req;
    for (double t : required)
        if (t > breakpoints.front() && t < breakpoints.back()) req.push_back(t);
    std::sort(req.begin(), req.end());
    std::vector<double> segs = merge_breakpoints(breakpoints, req);

    std::vector<double> nodes;
    nodes.push_back(segs.front());
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        const double lo = segs[i], hi = segs[i + 1];
        std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / max_step));
        if (n == 0) n = 1;
        if (n % 2 != 0) ++n; // even count per segment
        for (std::size_t k = 1; k < n; ++k) nodes.push_back(lo + (hi - lo) * double(k) / double(n));
        nodes.push_back(hi);
    }
    return Mesh(std::move(nodes), std::move(segs));
}

Mesh Mesh::spectral(const PiecewiseMatrixPoly& A, double max_step) {
    if (max_step <= 0.0) throw std::invalid_argument("Mesh: max_step must be positive");
    const auto& bp = A.breakpoints();
    std::vector<double> nodes;
    nodes.push_back(bp.front());
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double lo = bp[i], hi = bp[i + 1];
        if (A.piece_is_constant(i)) {
            nodes.push_back(hi);
            continue;
        }
        std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / max_step));
        if (n == 0) n = 1;
        for (std::size_t k = 1; k < n; ++k) nodes.push_back(lo + (hi - lo) * double(k) / double(n));
        nodes.push_back(hi);
    }
    return Mesh(std::move(nodes), bp);
}

std::size_t Mesh::locate(double t) const {
    if (t < nodes_.front() || t > nodes_.back())
        throw std::out_of_range("Mesh: point outside interval");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    if (it == nodes_.begin()) return 0;
    std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(k, nodes_.size() - 2);
}

bool Mesh::contains_node(double t, double tol) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t - tol);
    return it != nodes_.end() && std::abs(*it - t) <= tol;
}

std::vector<double> Mesh::simpson_weights() const {
    std::vector<double> w(nodes_.size(), 0.0);
    std::size_t lo = 0;
    for (std::size_t s = 1; s < segments_.size(); ++s) {
        std::size_t hi = lo;
        while (hi + 1 < nodes_.size() && nodes_[hi] < segments_[s] - 1e-12) ++hi;
        const auto part = slq::simpson_weights(
            std::span<const double>(nodes_.data() + lo, hi - lo + 1));
        for (std::size_t k = 0; k < part.size(); ++k) w[lo + k] += part[k];
        lo = hi;
    }
    return w;
}

std::vector<double> Mesh::trapezoid_weights() const {
    return slq::trapezoid_weights(std::span<const double>(nodes_.data(), nodes_.size()));
}

std::vector<double> merged_nodes(const Mesh& a, const Mesh& b) {
    return merge_breakpoints(a.nodes(), b.nodes());
}

} // namespace slq
