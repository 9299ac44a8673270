#pragma once

#include "slq/boundary.hpp"
#include "slq/piecewise.hpp"
#include "slq/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace slq {

struct SeparatedSpec {
    Matrix K_a, K_b;
    BCVariant variant = BCVariant::LK;
};

using BoundarySpec = std::variant<CanonicalBC, LinearBC, SeparatedSpec>;

struct EigTask {
    std::optional<std::pair<double, double>> window; // real-axis scan
    int scan_points = 600;
    std::optional<ComplexRect> rectangle; // argument-principle search
    int max_depth = 14;
    bool eigenfunctions = false;
};

struct GreenTask {
    Complex mu = 0.0;
    std::optional<int> grid_n; // falls back to mesh controls
};

struct ClassifyTask {
    double tol = 1e-10;
};

struct ConvergeTask {
    double t0 = 0.5;
    double strength = 1.0;
    std::vector<double> widths;
    Complex mu = -1.0;
    std::optional<int> grid_n;
    double violation_angle = 0.0; // non-zero: negative control on condition (5)
};

struct CheckTask {
    std::vector<std::string> suites;
};

using TaskSpec = std::variant<EigTask, GreenTask, ClassifyTask, ConvergeTask, CheckTask>;

struct MeshControls {
    double max_step = 5e-3;
    int grid_n = 200;
};

struct ProblemConfig {
    double a;
    double b;
    Index s;
    PiecewiseMatrixPoly p_inv;
    PiecewiseMatrixPoly Q;
    bool hermitian;
    BoundarySpec boundary;
    MeshControls mesh;
    std::vector<TaskSpec> tasks;

    /// Resolve whichever boundary spec is present into (alpha, beta).
    LinearBC linear_bc() const;
    /// The canonical K when the spec is canonical or separated.
    std::optional<CanonicalBC> canonical_bc() const;
    CoefficientSet coefficients() const;
};

ProblemConfig parse_config(const std::filesystem::path& path);
ProblemConfig parse_config_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ProblemConfig& config);

const char* task_name(const TaskSpec& task);

} // namespace slq
