#include "slq/config.hpp"

#include "slq/coeffs.hpp"

#include <fstream>

namespace slq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError("config field '" + field + "': " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

Complex as_complex(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(path, "expected [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

/// Row-major flat list of s*s [re, im] pairs; "identity" and "-identity"
/// are accepted as sugar.
Matrix as_matrix(const json& j, Index n, const std::string& path) {
    if (j.is_string()) {
        const std::string v = j.get<std::string>();
        if (v == "identity") return Matrix::Identity(n, n);
        if (v == "-identity") return -Matrix::Identity(n, n);
        fail(path, "unknown matrix literal '" + v + "'");
    }
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n * n))
        fail(path, "expected " + std::to_string(n * n) + " row-major complex entries");
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c)
            m(r, c) = as_complex(j[static_cast<std::size_t>(r * n + c)],
                                 path + "[" + std::to_string(r * n + c) + "]");
    return m;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
    return out;
}

json complex_to_json(Complex z) { return json{z.real(), z.imag()}; }

PiecewiseMatrixPoly as_piecewise(const json& j, double a, double b, Index s,
                                 const std::string& path) {
    if (j.is_object() && j.contains("constant"))
        return PiecewiseMatrixPoly::constant(a, b, as_matrix(j["constant"], s, path + ".constant"));

    const json& bp = require(j, "breakpoints", path);
    if (!bp.is_array() || bp.size() < 2) fail(path + ".breakpoints", "expected >= 2 numbers");
    std::vector<double> breakpoints;
    for (std::size_t k = 0; k < bp.size(); ++k)
        breakpoints.push_back(as_number(bp[k], path + ".breakpoints[" + std::to_string(k) + "]"));
    const double tol = 1e-12 * std::max(1.0, std::abs(b - a));
    if (std::abs(breakpoints.front() - a) > tol || std::abs(breakpoints.back() - b) > tol)
        fail(path + ".breakpoints", "must start at the interval's a and end at b");

    const json& pieces = require(j, "pieces", path);
    if (!pieces.is_array() || pieces.size() + 1 != breakpoints.size())
        fail(path + ".pieces", "expected one piece per subinterval");
    std::vector<PiecewiseMatrixPoly::Piece> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string ppath = path + ".pieces[" + std::to_string(i) + "]";
        const int degree = as_int(require(pieces[i], "degree", ppath), ppath + ".degree");
        if (degree < 0) fail(ppath + ".degree", "must be non-negative");
        const json& coeffs = require(pieces[i], "coeffs", ppath);
        if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(degree + 1))
            fail(ppath + ".coeffs", "expected degree + 1 coefficient matrices");
        PiecewiseMatrixPoly::Piece piece;
        for (int k = 0; k <= degree; ++k)
            piece.coeff.push_back(
                as_matrix(coeffs[static_cast<std::size_t>(k)], s,
                          ppath + ".coeffs[" + std::to_string(k) + "]"));
        out.push_back(std::move(piece));
    }
    try {
        return PiecewiseMatrixPoly(std::move(breakpoints), std::move(out));
    } catch (const std::invalid_argument& err) {
        fail(path, err.what());
    }
}

json piecewise_to_json(const PiecewiseMatrixPoly& f) {
    json out;
    out["breakpoints"] = f.breakpoints();
    out["pieces"] = json::array();
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        json piece;
        piece["degree"] = f.degree(i);
        piece["coeffs"] = json::array();
        for (const auto& c : f.piece(i).coeff) piece["coeffs"].push_back(matrix_to_json(c));
        out["pieces"].push_back(std::move(piece));
    }
    return out;
}

BCVariant as_variant(const json& j, const std::string& path) {
    const std::string v = j.is_string() ? j.get<std::string>() : "";
    if (v == "LK") return BCVariant::LK;
    if (v == "LUpperK") return BCVariant::LUpperK;
    fail(path, "expected \"LK\" or \"LUpperK\"");
}

BoundarySpec as_boundary(const json& j, Index s, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    int specs = 0;
    for (const char* key : {"canonical", "linear", "separated", "preset"})
        if (j.contains(key)) ++specs;
    if (specs != 1) fail(path, "exactly one boundary spec (canonical | linear | separated | preset) required");

    if (j.contains("preset")) {
        const std::string p = j["preset"].is_string() ? j["preset"].get<std::string>() : "";
        if (p == "dirichlet")
            return CanonicalBC{Matrix::Identity(2 * s, 2 * s), BCVariant::LK};
        if (p == "neumann")
            return CanonicalBC{-Matrix::Identity(2 * s, 2 * s), BCVariant::LK};
        if (p == "periodic")
            return LinearBC(Matrix::Identity(2 * s, 2 * s), -Matrix::Identity(2 * s, 2 * s));
        fail(path + ".preset", "expected dirichlet | neumann | periodic");
    }
    if (j.contains("canonical")) {
        const json& cj = j["canonical"];
        CanonicalBC bc;
        bc.K = as_matrix(require(cj, "K", path + ".canonical"), 2 * s, path + ".canonical.K");
        bc.variant = cj.contains("variant") ? as_variant(cj["variant"], path + ".canonical.variant")
                                            : BCVariant::LK;
        return bc;
    }
    if (j.contains("separated")) {
        const json& sj = j["separated"];
        SeparatedSpec spec;
        spec.K_a = as_matrix(require(sj, "K_a", path + ".separated"), s, path + ".separated.K_a");
        spec.K_b = as_matrix(require(sj, "K_b", path + ".separated"), s, path + ".separated.K_b");
        spec.variant = sj.contains("variant") ? as_variant(sj["variant"], path + ".separated.variant")
                                              : BCVariant::LK;
        return spec;
    }
    const json& lj = j["linear"];
    Matrix alpha = as_matrix(require(lj, "alpha", path + ".linear"), 2 * s, path + ".linear.alpha");
    Matrix beta = as_matrix(require(lj, "beta", path + ".linear"), 2 * s, path + ".linear.beta");
    return LinearBC(std::move(alpha), std::move(beta));
}

TaskSpec as_task(const json& j, const std::string& path) {
    const std::string type = require(j, "type", path).is_string() ? j["type"].get<std::string>() : "";
    if (type == "eig") {
        EigTask t;
        if (j.contains("window")) {
            const json& w = j["window"];
            if (!w.is_array() || w.size() != 2) fail(path + ".window", "expected [lo, hi]");
            t.window = {as_number(w[0], path + ".window[0]"), as_number(w[1], path + ".window[1]")};
        }
        if (j.contains("rectangle")) {
            const json& r = j["rectangle"];
            if (!r.is_array() || r.size() != 4)
                fail(path + ".rectangle", "expected [re_lo, re_hi, im_lo, im_hi]");
            t.rectangle = ComplexRect{as_number(r[0], path), as_number(r[1], path),
                                      as_number(r[2], path), as_number(r[3], path)};
        }
        if (!t.window.has_value() && !t.rectangle.has_value())
            fail(path, "eig task needs a window or a rectangle");
        if (t.window.has_value() && t.rectangle.has_value())
            fail(path, "eig task takes either a window or a rectangle, not both");
        if (j.contains("scan_points")) t.scan_points = as_int(j["scan_points"], path + ".scan_points");
        if (j.contains("max_depth")) t.max_depth = as_int(j["max_depth"], path + ".max_depth");
        if (j.contains("eigenfunctions")) t.eigenfunctions = j["eigenfunctions"].get<bool>();
        return t;
    }
    if (type == "green") {
        GreenTask t;
        t.mu = as_complex(require(j, "mu", path), path + ".mu");
        if (j.contains("grid_n")) t.grid_n = as_int(j["grid_n"], path + ".grid_n");
        return t;
    }
    if (type == "classify") {
        ClassifyTask t;
        if (j.contains("tol")) t.tol = as_number(j["tol"], path + ".tol");
        return t;
    }
    if (type == "converge") {
        ConvergeTask t;
        const json& fj = require(j, "family", path);
        const std::string ftype =
            require(fj, "type", path + ".family").is_string() ? fj["type"].get<std::string>() : "";
        if (ftype != "mollified_delta")
            fail(path + ".family.type", "only \"mollified_delta\" is available");
        t.t0 = as_number(require(fj, "t0", path + ".family"), path + ".family.t0");
        t.strength = as_number(require(fj, "strength", path + ".family"), path + ".family.strength");
        const json& wj = require(fj, "widths", path + ".family");
        if (!wj.is_array() || wj.empty()) fail(path + ".family.widths", "expected a non-empty list");
        for (std::size_t k = 0; k < wj.size(); ++k)
            t.widths.push_back(as_number(wj[k], path + ".family.widths[" + std::to_string(k) + "]"));
        if (fj.contains("violation_angle"))
            t.violation_angle = as_number(fj["violation_angle"], path + ".family.violation_angle");
        t.mu = as_complex(require(j, "mu", path), path + ".mu");
        if (j.contains("grid_n")) t.grid_n = as_int(j["grid_n"], path + ".grid_n");
        return t;
    }
    if (type == "check") {
        CheckTask t;
        const json& sj = require(j, "suites", path);
        if (!sj.is_array()) fail(path + ".suites", "expected a list");
        for (const auto& e : sj) t.suites.push_back(e.get<std::string>());
        return t;
    }
    fail(path + ".type", "unknown task type '" + type + "'");
}

json task_to_json(const TaskSpec& task);

} // namespace

ProblemConfig parse_config_json(const json& j) {
    const json& ij = require(j, "interval", "config");
    if (!ij.is_array() || ij.size() != 2) fail("interval", "expected [a, b]");
    const double a = as_number(ij[0], "interval[0]");
    const double b = as_number(ij[1], "interval[1]");
    if (!(a < b)) fail("interval", "a < b required");

    const Index s = as_int(require(j, "dim", "config"), "dim");
    if (s < 1) fail("dim", "s >= 1 required");

    const json& cj = require(j, "coefficients", "config");
    PiecewiseMatrixPoly p_inv = as_piecewise(require(cj, "p_inv", "coefficients"), a, b, s,
                                             "coefficients.p_inv");
    PiecewiseMatrixPoly Q = as_piecewise(require(cj, "Q", "coefficients"), a, b, s,
                                         "coefficients.Q");
    bool hermitian = cj.contains("hermitian") ? cj["hermitian"].get<bool>() : false;

    BoundarySpec boundary = as_boundary(require(j, "boundary", "config"), s, "boundary");

    MeshControls mesh;
    if (j.contains("mesh")) {
        const json& mj = j["mesh"];
        if (mj.contains("max_step")) mesh.max_step = as_number(mj["max_step"], "mesh.max_step");
        if (mj.contains("grid_n")) mesh.grid_n = as_int(mj["grid_n"], "mesh.grid_n");
    }
    if (mesh.max_step <= 0) fail("mesh.max_step", "must be positive");
    if (mesh.grid_n < 2) fail("mesh.grid_n", "must be at least 2");

    std::vector<TaskSpec> tasks;
    if (j.contains("tasks")) {
        const json& tj = j["tasks"];
        if (!tj.is_array()) fail("tasks", "expected a list");
        for (std::size_t k = 0; k < tj.size(); ++k)
            tasks.push_back(as_task(tj[k], "tasks[" + std::to_string(k) + "]"));
    }

    return ProblemConfig{a, b, s, std::move(p_inv), std::move(Q), hermitian, std::move(boundary),
                         mesh, std::move(tasks)};
}

ProblemConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    return parse_config_json(j);
}

LinearBC ProblemConfig::linear_bc() const {
    if (std::holds_alternative<LinearBC>(boundary)) return std::get<LinearBC>(boundary);
    if (std::holds_alternative<CanonicalBC>(boundary))
        return canonical_to_linear(std::get<CanonicalBC>(boundary));
    const auto& sep = std::get<SeparatedSpec>(boundary);
    return separated_conditions(sep.K_a, sep.K_b, sep.variant);
}

std::optional<CanonicalBC> ProblemConfig::canonical_bc() const {
    if (std::holds_alternative<CanonicalBC>(boundary)) return std::get<CanonicalBC>(boundary);
    if (std::holds_alternative<SeparatedSpec>(boundary)) {
        const auto& sep = std::get<SeparatedSpec>(boundary);
        Matrix K = Matrix::Zero(2 * s, 2 * s);
        K.topLeftCorner(s, s) = sep.K_a;
        K.bottomRightCorner(s, s) = sep.K_b;
        return CanonicalBC{std::move(K), sep.variant};
    }
    return std::nullopt;
}

CoefficientSet ProblemConfig::coefficients() const { return make_coefficients(p_inv, Q, hermitian); }

namespace {

json task_to_json(const TaskSpec& task) {
    json out;
    if (const auto* t = std::get_if<EigTask>(&task)) {
        out["type"] = "eig";
        if (t->window) out["window"] = {t->window->first, t->window->second};
        if (t->rectangle)
            out["rectangle"] = {t->rectangle->re_lo, t->rectangle->re_hi, t->rectangle->im_lo,
                                t->rectangle->im_hi};
        out["scan_points"] = t->scan_points;
        out["max_depth"] = t->max_depth;
        out["eigenfunctions"] = t->eigenfunctions;
    } else if (const auto* t = std::get_if<GreenTask>(&task)) {
        out["type"] = "green";
        out["mu"] = complex_to_json(t->mu);
        if (t->grid_n) out["grid_n"] = *t->grid_n;
    } else if (const auto* t = std::get_if<ClassifyTask>(&task)) {
        out["type"] = "classify";
        out["tol"] = t->tol;
    } else if (const auto* t = std::get_if<ConvergeTask>(&task)) {
        out["type"] = "converge";
        out["family"] = {{"type", "mollified_delta"},
                         {"t0", t->t0},
                         {"strength", t->strength},
                         {"widths", t->widths},
                         {"violation_angle", t->violation_angle}};
        out["mu"] = complex_to_json(t->mu);
        if (t->grid_n) out["grid_n"] = *t->grid_n;
    } else if (const auto* t = std::get_if<CheckTask>(&task)) {
        out["type"] = "check";
        out["suites"] = t->suites;
    }
    return out;
}

} // namespace

json config_to_json(const ProblemConfig& config) {
    json j;
    j["interval"] = {config.a, config.b};
    j["dim"] = config.s;
    j["coefficients"] = {{"p_inv", piecewise_to_json(config.p_inv)},
                         {"Q", piecewise_to_json(config.Q)},
                         {"hermitian", config.hermitian}};
    if (const auto* c = std::get_if<CanonicalBC>(&config.boundary)) {
        j["boundary"] = {{"canonical",
                          {{"K", matrix_to_json(c->K)},
                           {"variant", c->variant == BCVariant::LK ? "LK" : "LUpperK"}}}};
    } else if (const auto* l = std::get_if<LinearBC>(&config.boundary)) {
        j["boundary"] = {
            {"linear", {{"alpha", matrix_to_json(l->alpha)}, {"beta", matrix_to_json(l->beta)}}}};
    } else {
        const auto& sep = std::get<SeparatedSpec>(config.boundary);
        j["boundary"] = {{"separated",
                          {{"K_a", matrix_to_json(sep.K_a)},
                           {"K_b", matrix_to_json(sep.K_b)},
                           {"variant", sep.variant == BCVariant::LK ? "LK" : "LUpperK"}}}};
    }
    j["mesh"] = {{"max_step", config.mesh.max_step}, {"grid_n", config.mesh.grid_n}};
    j["tasks"] = json::array();
    for (const auto& task : config.tasks) j["tasks"].push_back(task_to_json(task));
    return j;
}

const char* task_name(const TaskSpec& task) {
    if (std::holds_alternative<EigTask>(task)) return "eig";
    if (std::holds_alternative<GreenTask>(task)) return "green";
    if (std::holds_alternative<ClassifyTask>(task)) return "classify";
    if (std::holds_alternative<ConvergeTask>(task)) return "converge";
    return "check";
}

} // namespace slq
