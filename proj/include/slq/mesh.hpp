#pragma once

#include "slq/piecewise.hpp"

#include <vector>

namespace slq {

/// Discretization of [a, b]: strictly increasing nodes containing every
/// coefficient breakpoint. Segments between consecutive breakpoints are
/// subdivided uniformly with an even step count (so composite Simpson
/// applies piecewise).
class Mesh {
public:
    /// Uniform-per-segment refinement of the given breakpoints. `required`
    /// points (e.g. output grid nodes) are inserted as segment boundaries
    /// first.
    static Mesh refine(const std::vector<double>& breakpoints, double max_step,
                       const std::vector<double>& required = {});

    /// Mesh for pure endpoint propagation: constant pieces of A are kept as
    /// single steps (the exponential there is exact at any step size);
    /// non-constant pieces are refined to max_step.
    static Mesh spectral(const PiecewiseMatrixPoly& A, double max_step);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& segment_boundaries() const { return segments_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t steps() const { return nodes_.size() - 1; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    double max_step() const { return max_step_; }

    /// Index of the last node <= t (nodes_[k] <= t < nodes_[k+1]).
    std::size_t locate(double t) const;

    bool contains_node(double t, double tol = 1e-12) const;

    /// Composite Simpson weights, restarted at each segment boundary.
    std::vector<double> simpson_weights() const;
    std::vector<double> trapezoid_weights() const;

private:
    Mesh(std::vector<double> nodes, std::vector<double> segments);

    std::vector<double> nodes_;
    std::vector<double> segments_;
    double max_step_ = 0.0;
};

/// Sorted union of both node sets.
std::vector<double> merged_nodes(const Mesh& a, const Mesh& b);

} // namespace slq
