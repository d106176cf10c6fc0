#include <clocale>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracwin/csv.hpp"
#include "fracwin/operators.hpp"
#include "fracwin/scenario.hpp"

namespace {

using namespace fracwin;

int status_code(RunStatus s) { return static_cast<int>(s); }

struct GlobalOpts {
    std::string out_dir = ".";
    std::optional<double> step;
    std::optional<double> horizon;
    std::uint64_t seed = kStructuralDefaultSeed;
    bool quiet = false;
};

RunOptions to_run_options(const GlobalOpts& g) {
    RunOptions opts;
    opts.out_dir = g.out_dir;
    opts.step = g.step;
    opts.horizon = g.horizon;
    opts.seed = g.seed;
    opts.quiet = g.quiet;
    return opts;
}

int run_scenario_command(const std::string& target, const GlobalOpts& g,
                         const char* only_check = nullptr,
                         std::optional<double> compare_a = std::nullopt,
                         std::optional<double> lambda = std::nullopt) {
    ScenarioConfig cfg;
    try {
        cfg = load_scenario(target);
        const std::string check = only_check ? only_check : "scenario";
        if (check == "compare") {
            cfg.lyapunov_expr.reset();
            cfg.lyapunov_lambda.reset();
            cfg.structural.reset();
            if (compare_a) cfg.compare_a = compare_a;
            if (!cfg.compare_a)
                throw std::runtime_error("comparison needs compare.a in the config or --a");
        } else if (check == "lyapunov") {
            cfg.compare_a.reset();
            cfg.structural.reset();
            if (lambda) cfg.lyapunov_lambda = lambda;
            if (!cfg.lyapunov_expr)
                throw std::runtime_error("lyapunov check needs lyapunov.v in the config");
        } else if (check == "theorem5") {
            cfg.compare_a.reset();
            cfg.lyapunov_expr.reset();
            cfg.lyapunov_lambda.reset();
            if (!cfg.structural)
                throw std::runtime_error(
                    "structural check needs structural.m and structural.phi in the config");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const ScenarioOutcome outcome = run_scenario(cfg, to_run_options(g));
    if (outcome.status == RunStatus::Error) {
        std::cerr << "error: " << outcome.message << "\n";
        if (!g.quiet && !outcome.report_text.empty()) std::cout << outcome.report_text;
        return 2;
    }
    if (!g.quiet) std::cout << outcome.report_text;
    return status_code(outcome.status);
}

int run_operator_command(const std::string& kind, double alpha_v, std::optional<double> omega,
                         const std::string& expr_text, double t0, double h, double at,
                         bool series, const GlobalOpts& g) {
    try {
        if (kind != "caputo" && kind != "rlint" && kind != "short")
            throw std::runtime_error("operator kind must be caputo, rlint or short");
        const Order alpha(alpha_v);
        auto parsed = dsl::parse_expression(expr_text, 0);
        if (!parsed.ok()) throw std::runtime_error("--expr: " + parsed.error.render());

        if (!(at > t0)) throw std::runtime_error("--at must exceed --t0");
        const UniformGrid probe(t0, h, 1);
        const std::size_t n = aligned_steps(at - t0, probe, "evaluation span at - t0");
        const UniformGrid grid(t0, h, n);

        const dsl::Expr expr = *parsed.value;
        const Trajectory x = Trajectory::sample_scalar(
            grid, [&expr](double t) { return expr.evaluate({}, t); });
        if (!x.valid()) throw std::runtime_error("expression produced non-finite samples");

        double value = 0.0;
        std::vector<double> all(grid.size(), 0.0);
        if (kind == "caputo") {
            all = caputo_l1_series(x, alpha);
            value = all[n];
        } else if (kind == "short") {
            if (!omega) throw std::runtime_error("kind=short requires --omega");
            const Window win(*omega, t0);
            all = short_memory_l1_series(x, alpha, win);
            value = all[n];
        } else {
            for (std::size_t k = 0; k < grid.size(); ++k) all[k] = rl_integral(x, alpha, k);
            value = all[n];
        }

        std::cout << format_value(value) << "\n";
        if (series) {
            std::filesystem::create_directories(g.out_dir);
            const auto path = std::filesystem::path(g.out_dir) / ("operator_" + kind + ".csv");
            write_columns_csv(path, grid, {kind}, {all});
            if (!g.quiet) std::cerr << "series written to " << path.string() << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_sweep_command(const std::string& target, const std::string& axis_name,
                      const std::vector<double>& values, const GlobalOpts& g) {
    try {
        const auto axis = parse_sweep_axis(axis_name);
        if (!axis) throw std::runtime_error("--axis must be alpha, omega or lambda");
        if (values.empty()) throw std::runtime_error("--values must not be empty");
        const ScenarioConfig cfg = load_scenario(target);
        const SweepOutcome outcome = run_sweep(cfg, *axis, values, to_run_options(g));
        if (!g.quiet) {
            std::cout << "axis,value,threshold,verdict,final_norm,note\n";
            for (const auto& row : outcome.rows)
                std::cout << axis_name << ',' << format_value(row.value) << ','
                          << format_value(row.threshold) << ',' << row.verdict << ','
                          << format_value(row.final_norm) << ',' << row.note << "\n";
            if (!outcome.csv_path.empty())
                std::cerr << "summary written to " << outcome.csv_path.string() << "\n";
        }
        return status_code(outcome.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"fracwin: sliding-window fractional derivative toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory (default: FRACWIN_OUT_DIR or '.')")
        ->envname("FRACWIN_OUT_DIR");
    double step_v = 0.0, horizon_v = 0.0;
    auto* step_opt = app.add_option("--step", step_v, "override the grid step h");
    auto* horizon_opt = app.add_option("--horizon", horizon_v, "override the horizon t_end");
    app.add_option("--seed", g.seed, "seed for sampled checks");
    app.add_flag("--quiet", g.quiet, "suppress report output on stdout");

    std::string target = "example1";
    std::string config_path;

    auto add_target = [&](CLI::App* sub) {
        sub->add_option("scenario", target,
                        "built-in scenario (example1..example3) or config file path");
        sub->add_option("--config", config_path, "config file path (alternative to the positional)");
    };

    auto* sc = app.add_subcommand("scenario", "solve a scenario and run its checks");
    add_target(sc);

    auto* cmp = app.add_subcommand("compare", "comparison bound for a scalar scenario");
    add_target(cmp);
    double cmp_a = 0.0;
    auto* cmp_a_opt = cmp->add_option("--a", cmp_a, "decay coefficient of the comparison bound");

    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov decay certificate");
    add_target(lyap);
    double lambda_v = 0.0;
    auto* lambda_opt = lyap->add_option("--lambda", lambda_v, "decay rate of the candidate");

    auto* t5 = app.add_subcommand("theorem5", "structural decay certificate");
    add_target(t5);

    auto* sw = app.add_subcommand("sweep", "parameter sweep with a summary CSV");
    add_target(sw);
    std::string axis;
    std::vector<double> values;
    sw->add_option("--axis", axis, "alpha | omega | lambda")->required();
    sw->add_option("--values", values, "comma-separated list of values")
        ->required()
        ->delimiter(',');

    auto* op = app.add_subcommand("operator", "evaluate a fractional operator on an expression");
    std::string kind, expr_text = "t";
    double alpha_v = 0.5, omega_v = 0.0, t0_v = 0.0, h_v = 0.01, at_v = 1.0;
    bool series = false;
    op->add_option("--kind", kind, "caputo | rlint | short")->required();
    op->add_option("--alpha", alpha_v, "fractional order in (0,1)")->required();
    auto* omega_opt = op->add_option("--omega", omega_v, "window length (kind=short)");
    op->add_option("--expr", expr_text, "scalar expression in t")->required();
    op->add_option("--t0", t0_v, "grid origin");
    op->add_option("--at", at_v, "evaluation time (must lie on the grid)")->required();
    op->add_flag("--series", series, "also write the whole per-node sequence as CSV");

    CLI11_PARSE(app, argc, argv);

    if (step_opt->count()) g.step = step_v;
    if (horizon_opt->count()) g.horizon = horizon_v;
    if (!config_path.empty()) target = config_path;

    if (sc->parsed()) return run_scenario_command(target, g, "scenario");
    if (cmp->parsed())
        return run_scenario_command(target, g, "compare",
                                    cmp_a_opt->count() ? std::optional<double>(cmp_a)
                                                       : std::nullopt);
    if (lyap->parsed())
        return run_scenario_command(target, g, "lyapunov", std::nullopt,
                                    lambda_opt->count() ? std::optional<double>(lambda_v)
                                                        : std::nullopt);
    if (t5->parsed()) return run_scenario_command(target, g, "theorem5");
    if (sw->parsed()) return run_sweep_command(target, axis, values, g);
    if (op->parsed()) {
        const double step = g.step.value_or(h_v);
        return run_operator_command(kind, alpha_v, omega_opt->count()
                                                        ? std::optional<double>(omega_v)
                                                        : std::nullopt,
                                    expr_text, t0_v, step, at_v, series, g);
    }
    return 2;
}
