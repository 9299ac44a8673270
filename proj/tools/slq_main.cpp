#include "slq/parallel.hpp"
#include "slq/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    double mesh_max_step = 0.0; // 0 = keep config value
    int grid_n = 0;
    double tol = 0.0;
    int threads = 1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("config", args.config_path, "problem configuration (JSON)")->required();
    sub->add_option("--out", args.out_dir, "output directory (default: out)");
    sub->add_option("--mesh-max-step", args.mesh_max_step, "override mesh.max_step");
    sub->add_option("--grid-n", args.grid_n, "override mesh.grid_n");
    sub->add_option("--tol", args.tol, "override task tolerance where one applies");
    sub->add_option("--threads", args.threads, "worker threads for grid assembly");
}

int dispatch(const CommonArgs& args, std::optional<slq::TaskSpec> single_task) {
    slq::set_num_threads(args.threads);
    slq::ProblemConfig config = slq::parse_config(args.config_path);
    if (args.mesh_max_step > 0) config.mesh.max_step = args.mesh_max_step;
    if (args.grid_n > 0) config.mesh.grid_n = args.grid_n;
    if (single_task) {
        if (args.tol > 0) {
            if (auto* t = std::get_if<slq::ClassifyTask>(&*single_task)) t->tol = args.tol;
        }
        config.tasks = {*single_task};
    }
    if (config.tasks.empty()) {
        std::fprintf(stderr, "error: config has no tasks\n");
        return 1;
    }
    return slq::run_tasks(config, args.out_dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slq: matrix Sturm-Liouville operators with distributional potentials"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* cmd_run = app.add_subcommand("run", "run every task listed in the config");
    add_common(cmd_run, args);

    auto* cmd_eig = app.add_subcommand("eig", "eigenvalue search");
    add_common(cmd_eig, args);
    std::vector<double> window, rectangle;
    int scan_points = 600, max_depth = 14;
    bool eigenfunctions = false;
    cmd_eig->add_option("--window", window, "real scan window: lo hi")->expected(2);
    cmd_eig->add_option("--rectangle", rectangle, "complex search: re_lo re_hi im_lo im_hi")
        ->expected(4);
    cmd_eig->add_option("--scan-points", scan_points, "scan grid size (default 600)");
    cmd_eig->add_option("--max-depth", max_depth, "contour subdivision depth (default 14)");
    cmd_eig->add_flag("--eigenfunctions", eigenfunctions, "also dump eigenfunction trajectories");

    auto* cmd_green = app.add_subcommand("green", "Green kernel dump");
    add_common(cmd_green, args);
    std::vector<double> mu_green{0.0, 0.0};
    cmd_green->add_option("--mu", mu_green, "spectral point: re im")->expected(2);

    auto* cmd_classify = app.add_subcommand("classify", "boundary-condition classification");
    add_common(cmd_classify, args);

    auto* cmd_converge = app.add_subcommand("converge", "run the config's convergence study");
    add_common(cmd_converge, args);

    auto* cmd_check = app.add_subcommand("check", "invariant check suites");
    add_common(cmd_check, args);
    std::vector<std::string> suites;
    cmd_check->add_option("--suites", suites, "subset of suites to run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return dispatch(args, std::nullopt);
        if (cmd_eig->parsed()) {
            slq::EigTask t;
            if (!window.empty()) t.window = {window[0], window[1]};
            if (!rectangle.empty())
                t.rectangle = slq::ComplexRect{rectangle[0], rectangle[1], rectangle[2], rectangle[3]};
            if (!t.window && !t.rectangle) {
                std::fprintf(stderr, "error: eig needs --window or --rectangle\n");
                return 1;
            }
            t.scan_points = scan_points;
            t.max_depth = max_depth;
            t.eigenfunctions = eigenfunctions;
            return dispatch(args, slq::TaskSpec{t});
        }
        if (cmd_green->parsed()) {
            slq::GreenTask t;
            t.mu = slq::Complex(mu_green[0], mu_green[1]);
            if (args.grid_n > 0) t.grid_n = args.grid_n;
            return dispatch(args, slq::TaskSpec{t});
        }
        if (cmd_classify->parsed()) return dispatch(args, slq::TaskSpec{slq::ClassifyTask{}});
        if (cmd_converge->parsed()) {
            // the family spec is structural; reuse the converge task from the config
            slq::ProblemConfig config = slq::parse_config(args.config_path);
            for (const auto& task : config.tasks)
                if (std::holds_alternative<slq::ConvergeTask>(task))
                    return dispatch(args, task);
            std::fprintf(stderr, "error: config contains no converge task\n");
            return 1;
        }
        if (cmd_check->parsed()) return dispatch(args, slq::TaskSpec{slq::CheckTask{suites}});
    } catch (const slq::ConfigError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const slq::NumericalError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    }
    return 0;
}
