#include "slq/runner.hpp"

#include "slq/convergence.hpp"
#include "slq/parallel.hpp"
#include "slq/spectral.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace slq {

using nlohmann::json;

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open " + tmp.string());
        out << content;
        if (!out) throw std::ios_base::failure("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string csv_complex(Complex z) { return format_g17(z.real()) + "," + format_g17(z.imag()); }

std::string run_eig(const ProblemConfig& config, const EigTask& task,
                    const std::filesystem::path& out_dir, const std::string& stem) {
    const CoefficientSet coeffs = config.coefficients();
    const LinearBC bc = config.linear_bc();
    SpectralOptions opt;
    opt.max_step = config.mesh.max_step;

    std::vector<Eigenvalue> eigenvalues;
    if (task.window) {
        ScanOutcome scan = eigenvalues_real_scan(coeffs, bc, task.window->first,
                                                 task.window->second, task.scan_points, opt);
        eigenvalues = std::move(scan.eigenvalues);
        for (const auto& w : scan.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else {
        eigenvalues = eigenvalues_complex(coeffs, bc, *task.rectangle, task.max_depth, opt);
    }

    std::ostringstream csv;
    csv << "index,re_lambda,im_lambda,multiplicity,residual\n";
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
        csv << k << "," << csv_complex(eigenvalues[k].lambda) << "," << eigenvalues[k].multiplicity
            << "," << format_g17(eigenvalues[k].residual) << "\n";

    if (task.eigenfunctions) {
        for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
            const auto basis = eigenfunction_basis(coeffs, bc, eigenvalues[k], opt);
            for (std::size_t m = 0; m < basis.size(); ++m) {
                std::ostringstream fn;
                fn << "t";
                for (Index c = 0; c < 2 * config.s; ++c)
                    fn << ",re_w" << c << ",im_w" << c;
                fn << "\n";
                const auto& traj = basis[m].traj;
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    fn << format_g17(traj.mesh.nodes()[i]);
                    for (Index c = 0; c < 2 * config.s; ++c)
                        fn << "," << csv_complex(traj.w[i](c));
                    fn << "\n";
                }
                char name[64];
                std::snprintf(name, sizeof(name), "-fn-%03zu-%02zu.csv", k, m);
                atomic_write(out_dir / (stem + name), fn.str());
            }
        }
    }
    return csv.str();
}

std::string run_green(const ProblemConfig& config, const GreenTask& task) {
    const CoefficientSet coeffs = config.coefficients();
    const LinearBC bc = config.linear_bc();
    const int n = task.grid_n.value_or(config.mesh.grid_n);
    const TensorGrid grid = TensorGrid::uniform(config.a, config.b, n);
    const GreenKernel kernel =
        resolvent_kernel(coeffs, bc, task.mu, grid, config.mesh.max_step);

    std::ostringstream csv;
    csv << "t,tau";
    for (Index r = 0; r < config.s; ++r)
        for (Index c = 0; c < config.s; ++c) csv << ",re_" << r << c << ",im_" << r << c;
    csv << "\n";
    for (std::size_t i = 0; i < grid.t.size(); ++i)
        for (std::size_t j = 0; j < grid.tau.size(); ++j) {
            csv << format_g17(grid.t[i]) << "," << format_g17(grid.tau[j]);
            const Matrix cell = kernel.cell(i, j);
            for (Index r = 0; r < config.s; ++r)
                for (Index c = 0; c < config.s; ++c) csv << "," << csv_complex(cell(r, c));
            csv << "\n";
        }
    return csv.str();
}

std::string run_classify(const ProblemConfig& config, const ClassifyTask& task) {
    const auto canonical = config.canonical_bc();
    if (!canonical)
        throw ConfigError("classify task requires a canonical or separated boundary spec");
    const ExtensionClass cls = classify(*canonical, task.tol);
    const SeparationResult sep = is_separated(canonical->K, task.tol);

    std::ostringstream csv;
    csv << "class,norm_K,unitary_defect,separated,offdiag_residual\n";
    csv << extension_kind_name(cls.kind) << "," << format_g17(cls.norm_K) << ","
        << format_g17(cls.unitary_defect) << "," << (sep.separated ? 1 : 0) << ","
        << format_g17(sep.residual) << "\n";
    return csv.str();
}

std::string run_converge(const ProblemConfig& config, const ConvergeTask& task) {
    if (config.s != 1)
        throw ConfigError("converge task: the mollified delta family is scalar (dim = 1)");
    const LinearBC bc = config.linear_bc();
    std::vector<double> widths = task.widths;
    std::sort(widths.begin(), widths.end(), std::greater<>());
    const Family fam =
        task.violation_angle != 0.0
            ? make_condition5_violation_family(task.t0, task.strength, widths, bc, task.mu,
                                               task.violation_angle, config.a, config.b)
            : make_mollified_delta_family(task.t0, task.strength, widths, bc, task.mu, config.a,
                                          config.b);
    const int grid_n = task.grid_n.value_or(config.mesh.grid_n);
    const ConvergenceReport report =
        resolvent_distances(fam, grid_n, config.mesh.max_step, config.mesh.max_step);

    std::ostringstream csv;
    csv << "eps,cond1,cond2,cond3,cond4,cond5_alpha,cond5_beta,mm_dev,hs_dist,sup_dist,status\n";
    for (const auto& row : report.rows) {
        csv << format_g17(row.eps) << "," << format_g17(row.hyp.p_inv) << ","
            << format_g17(row.hyp.p_inv_Q) << "," << format_g17(row.hyp.Q_p_inv) << ","
            << format_g17(row.hyp.Q_p_inv_Q) << "," << format_g17(row.hyp.alpha) << ","
            << format_g17(row.hyp.beta) << "," << format_g17(row.mm_dev) << ","
            << format_g17(row.hs_dist) << "," << format_g17(row.sup_dist) << "," << row.status
            << "\n";
    }
    return csv.str();
}

struct CheckRow {
    std::string suite;
    double value;
    double threshold;
    std::string verdict; // pass / fail / skip
};

CheckRow check_liouville(const ProblemConfig& config) {
    const CoefficientSet coeffs = config.coefficients();
    const ShinZettlMatrix A = shin_zettl(coeffs, 0.0);
    const Mesh mesh = Mesh::refine(A.system().breakpoints(), config.mesh.max_step);
    const FundamentalSolution Z = propagate(A, mesh);
    double worst = 0.0;
    for (const auto& sample : Z.samples())
        worst = std::max(worst, std::abs(sample.determinant() - Complex(1, 0)));
    return {"liouville", worst, 1e-10, worst <= 1e-10 ? "pass" : "fail"};
}

CheckRow check_symplectic(const ProblemConfig& config) {
    if (!config.hermitian) return {"symplectic", 0.0, 1e-9, "skip"};
    const CoefficientSet coeffs = config.coefficients();
    const ShinZettlMatrix A = shin_zettl(coeffs, 0.0);
    const Mesh mesh = Mesh::refine(A.system().breakpoints(), config.mesh.max_step);
    const FundamentalSolution Z = propagate(A, mesh);
    const Index s = config.s;
    Matrix J = Matrix::Zero(2 * s, 2 * s);
    J.topRightCorner(s, s) = -Matrix::Identity(s, s);
    J.bottomLeftCorner(s, s) = Matrix::Identity(s, s);
    double worst = 0.0;
    for (const auto& sample : Z.samples())
        worst = std::max(worst, spectral_norm(Matrix(sample.adjoint() * J * sample - J)));
    return {"symplectic", worst, 1e-9, worst <= 1e-9 ? "pass" : "fail"};
}

CheckRow check_trace(const ProblemConfig& config) {
    const CoefficientSet coeffs = config.coefficients();
    const ShinZettlMatrix A = shin_zettl(coeffs, 0.0);
    double worst = 0.0;
    const auto& bp = A.system().breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        for (int k = 0; k < 7; ++k) {
            const double t = bp[i] + (bp[i + 1] - bp[i]) * (k + 0.5) / 7;
            const Matrix At = A.eval(t);
            worst = std::max(worst, std::abs(At.trace()) / (1.0 + At.norm()));
        }
    return {"trace", worst, 1e-13, worst <= 1e-13 ? "pass" : "fail"};
}

CheckRow check_jump(const ProblemConfig& config) {
    const CoefficientSet coeffs = config.coefficients();
    const LinearBC bc = config.linear_bc();
    Complex mu(0.0, 1.0); // nonreal default keeps self-adjoint problems safe
    for (const auto& task : config.tasks)
        if (const auto* g = std::get_if<GreenTask>(&task)) mu = g->mu;
    const TensorGrid grid = TensorGrid::uniform(config.a, config.b, 33);
    const GreenMatrix gm = green_matrix(shin_zettl(coeffs, mu), bc, grid, config.mesh.max_step);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.t.size(); ++i)
        worst = std::max(worst, gm.jump_residual(i));
    return {"jump", worst, 1e-9, worst <= 1e-9 ? "pass" : "fail"};
}

CheckRow check_lagrange(const ProblemConfig& config) {
    const CoefficientSet coeffs = config.coefficients();
    const CoefficientSet adj = adjoint_coefficients(coeffs);
    const LinearBC bc = dirichlet_bc(config.s);
    const ShinZettlMatrix A = shin_zettl(coeffs, 0.0);
    const ShinZettlMatrix Aplus = shin_zettl(adj, 0.0);
    const Mesh mesh = Mesh::refine(A.system().breakpoints(), config.mesh.max_step);

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const Index s = config.s;
    const double a = config.a, b = config.b;
    Vector cy(s), cz(s);
    for (Index i = 0; i < s; ++i) {
        cy(i) = Complex(unif(rng), unif(rng));
        cz(i) = Complex(unif(rng), unif(rng));
    }
    auto f_y = [&](double t) { return Vector(std::sin(3 * (t - a) / (b - a)) * cy); };
    auto f_z = [&](double t) { return Vector(std::cos(2 * (t - a) / (b - a)) * cz); };
    const Trajectory y = solve_inhomogeneous(A, f_y, bc, mesh);
    const Trajectory z = solve_inhomogeneous(Aplus, f_z, bc, mesh);
    const double worst = std::abs(greens_formula_residual(coeffs, y, f_y, z, f_z));
    return {"lagrange", worst, 1e-7, worst <= 1e-7 ? "pass" : "fail"};
}

CheckRow check_symmetry(const ProblemConfig& config) {
    const auto canonical = config.canonical_bc();
    if (!config.hermitian || !canonical) return {"symmetry", 0.0, 1e-8, "skip"};
    if (classify(*canonical).kind != ExtensionKind::SelfAdjoint)
        return {"symmetry", 0.0, 1e-8, "skip"};
    const CoefficientSet coeffs = config.coefficients();
    const LinearBC bc = config.linear_bc();
    double mu = -1.0;
    for (int tries = 0; tries < 6; ++tries) {
        if (in_resolvent_set(shin_zettl(coeffs, mu), bc, config.mesh.max_step).in_set) break;
        mu *= 4.0;
    }
    const TensorGrid grid = TensorGrid::uniform(config.a, config.b, 65);
    const GreenKernel kernel = resolvent_kernel(coeffs, bc, mu, grid, config.mesh.max_step);
    const double worst = hermitian_symmetry_defect(kernel);
    return {"symmetry", worst, 1e-8, worst <= 1e-8 ? "pass" : "fail"};
}

struct CheckOutcome {
    std::string csv;
    bool failed = false;
};

CheckOutcome run_check(const ProblemConfig& config, const CheckTask& task) {
    std::vector<std::string> suites = task.suites;
    if (suites.empty())
        suites = {"liouville", "symplectic", "trace", "jump", "lagrange", "symmetry"};
    std::ostringstream csv;
    csv << "suite,value,threshold,verdict\n";
    bool failed = false;
    for (const auto& name : suites) {
        CheckRow row;
        if (name == "liouville") row = check_liouville(config);
        else if (name == "symplectic") row = check_symplectic(config);
        else if (name == "trace") row = check_trace(config);
        else if (name == "jump") row = check_jump(config);
        else if (name == "lagrange") row = check_lagrange(config);
        else if (name == "symmetry") row = check_symmetry(config);
        else throw ConfigError("check task: unknown suite '" + name + "'");
        failed = failed || row.verdict == "fail";
        csv << row.suite << "," << format_g17(row.value) << "," << format_g17(row.threshold) << ","
            << row.verdict << "\n";
    }
    return {csv.str(), failed};
}

} // namespace

int run_tasks(const ProblemConfig& config, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s\n", out_dir.c_str());
        return 3;
    }

    json manifest;
    manifest["version"] = "0.1.0";
    manifest["config"] = config_to_json(config);
    manifest["tolerances"] = {{"condition_bound", 1e12},
                              {"sigma_rel_tol", 1e-8},
                              {"classify_tol_default", 1e-10}};
    manifest["threads"] = num_threads();
    manifest["tasks"] = json::array();

    int exit_code = 0;
    for (std::size_t idx = 0; idx < config.tasks.size(); ++idx) {
        const TaskSpec& task = config.tasks[idx];
        char stem[64];
        std::snprintf(stem, sizeof(stem), "task-%03zu-%s", idx, task_name(task));
        json entry{{"name", task_name(task)}, {"output", std::string(stem) + ".csv"}};
        const auto started = std::chrono::steady_clock::now();
        try {
            std::string csv;
            bool check_failed = false;
            if (const auto* t = std::get_if<EigTask>(&task))
                csv = run_eig(config, *t, out_dir, stem);
            else if (const auto* t = std::get_if<GreenTask>(&task))
                csv = run_green(config, *t);
            else if (const auto* t = std::get_if<ClassifyTask>(&task))
                csv = run_classify(config, *t);
            else if (const auto* t = std::get_if<ConvergeTask>(&task))
                csv = run_converge(config, *t);
            else {
                CheckOutcome outcome = run_check(config, std::get<CheckTask>(task));
                csv = std::move(outcome.csv);
                check_failed = outcome.failed;
            }
            atomic_write(out_dir / (std::string(stem) + ".csv"), csv);
            if (check_failed)
                throw NumericalError("check task: an invariant suite failed (see " +
                                     std::string(stem) + ".csv)");
            entry["status"] = "ok";
        } catch (const ConfigError& err) {
            entry["status"] = std::string("config error: ") + err.what();
            std::fprintf(stderr, "error: %s\n", err.what());
            exit_code = 1;
        } catch (const NumericalError& err) {
            entry["status"] = std::string("numerical error: ") + err.what();
            std::fprintf(stderr, "error: %s\n", err.what());
            exit_code = 2;
        } catch (const std::ios_base::failure& err) {
            entry["status"] = std::string("io error: ") + err.what();
            std::fprintf(stderr, "error: %s\n", err.what());
            exit_code = 3;
        }
        const auto elapsed = std::chrono::steady_clock::now() - started;
        entry["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        manifest["tasks"].push_back(std::move(entry));
        if (exit_code != 0) break; // keep partial results, stop the batch
    }

    try {
        atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    }
    return exit_code;
}

} // namespace slq
