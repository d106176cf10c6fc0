#include "fracwin/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fracwin/csv.hpp"
#include "fracwin/numeric.hpp"
#include "fracwin/operators.hpp"
#include "fracwin/report.hpp"
#include "fracwin/tolerances.hpp"

namespace fracwin {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_vector(std::span<const double> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s + ")";
}

double parse_number_or_throw(const dsl::KeyValue& kv) {
    char* end = nullptr;
    const double v = std::strtod(kv.value.c_str(), &end);
    if (end != kv.value.c_str() + kv.value.size() || !std::isfinite(v))
        throw std::runtime_error("line " + std::to_string(kv.pos.line) + ": key '" + kv.key +
                                 "': expected a number, got '" + kv.value + "'");
    return v;
}

std::vector<double> parse_number_list(const dsl::KeyValue& kv) {
    std::vector<double> out;
    std::stringstream ss(kv.value);
    std::string part;
    while (std::getline(ss, part, ',')) {
        char* end = nullptr;
        const double v = std::strtod(part.c_str(), &end);
        while (end && *end == ' ') ++end;
        if (end != part.c_str() + part.size() || part.empty())
            throw std::runtime_error("line " + std::to_string(kv.pos.line) + ": key '" + kv.key +
                                     "': expected a comma-separated number list");
        out.push_back(v);
    }
    return out;
}

const std::map<std::string, std::string>& builtin_sources() {
    static const std::map<std::string, std::string> sources = {
        {"example1",
         "name = example1\n"
         "alpha = 0.95\n"
         "omega = 5\n"
         "t0 = 0\n"
         "h = 0.01\n"
         "t_end = 50\n"
         "x0 = 3\n"
         "field.1 = -x1\n"
         "compare.a = 1\n"},
        {"example2",
         "name = example2\n"
         "alpha = 0.95\n"
         "omega = 5\n"
         "t0 = 0\n"
         "h = 0.01\n"
         "t_end = 50\n"
         "x0 = 7, -3\n"
         "field.1 = x2\n"
         "field.2 = -x1 - x2\n"
         "lyapunov.v = 3*x1^2 + 2*x1*x2 + 2*x2^2\n"
         "lyapunov.lambda = 0.5\n"},
        {"example3",
         "name = example3\n"
         "alpha = 0.95\n"
         "omega = 5\n"
         "t0 = 0\n"
         "h = 0.01\n"
         "t_end = 50\n"
         "x0 = 3, -5\n"
         "field.1 = -x1 + x2^3\n"
         "field.2 = -x1 - x2\n"
         "structural.m = 1, 2\n"
         "structural.phi = 1\n"}};
    return sources;
}

}  // namespace

SolveConfig ScenarioConfig::solve_config() const {
    SolveConfig cfg;
    cfg.t0 = t0;
    cfg.h = h;
    cfg.t_end = t_end;
    cfg.corrector_sweeps = corrector_sweeps;
    return cfg;
}

VectorField ScenarioConfig::make_field() const {
    VectorField f;
    f.dim = dim();
    const auto exprs = field_exprs;
    // evaluation faults surface as NaN so the solver can flag the node
    f.fn = [exprs](double t, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < exprs.size(); ++i) {
            try {
                out[i] = exprs[i].evaluate(x, t);
            } catch (const dsl::EvalError&) {
                out[i] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    return f;
}

ScalarField ScenarioConfig::make_lyapunov() const {
    if (!lyapunov_expr) throw std::runtime_error("scenario has no Lyapunov candidate");
    ScalarField v;
    v.dim = dim();
    const auto expr = *lyapunov_expr;
    v.fn = [expr](double t, std::span<const double> x) { return expr.evaluate(x, t); };
    return v;
}

ShortMemorySystem ScenarioConfig::make_system() const {
    return ShortMemorySystem{make_field(), order(), window(), x0};
}

SampleBox ScenarioConfig::make_box() const {
    return SampleBox::centered(dim(), box_half_width,
                               {t0, t0 + (t_end - t0) / 2.0, t_end});
}

void ScenarioConfig::validate() const {
    if (field_exprs.empty()) throw std::runtime_error("scenario '" + name + "': no field components");
    if (x0.size() != field_exprs.size())
        throw std::runtime_error("scenario '" + name + "': x0 dimension " +
                                 std::to_string(x0.size()) + " does not match field dimension " +
                                 std::to_string(field_exprs.size()));
    Order ord(alpha);                       // throws outside (0,1)
    Window win(omega, t0);                  // throws for omega <= 0
    const UniformGrid grid = solve_config().make_grid();
    aligned_steps(omega, grid, "window length omega");
    if (lyapunov_expr.has_value() != lyapunov_lambda.has_value())
        throw std::runtime_error("scenario '" + name +
                                 "': lyapunov.v and lyapunov.lambda must be given together");
    if (lyapunov_lambda && !(*lyapunov_lambda > 0.0))
        throw std::runtime_error("scenario '" + name + "': lyapunov.lambda must be positive");
    if (structural) structural->validate(dim());
    if (compare_a) {
        if (dim() != 1)
            throw std::runtime_error("scenario '" + name +
                                     "': compare.a applies to scalar systems only");
        if (!(*compare_a > 0.0))
            throw std::runtime_error("scenario '" + name + "': compare.a must be positive");
    }
    if (!(box_half_width > 0.0))
        throw std::runtime_error("scenario '" + name + "': structural.box must be positive");
    if (corrector_sweeps < 1)
        throw std::runtime_error("scenario '" + name + "': sweeps must be >= 1");
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : builtin_sources()) names.push_back(k);
    return names;
}

bool is_builtin_scenario(const std::string& name) { return builtin_sources().count(name) > 0; }

std::string builtin_scenario_source(const std::string& name) {
    auto it = builtin_sources().find(name);
    if (it == builtin_sources().end())
        throw std::runtime_error("unknown built-in scenario '" + name + "'");
    return it->second;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
    std::string source;
    std::string origin;
    if (is_builtin_scenario(name_or_path)) {
        source = builtin_scenario_source(name_or_path);
        origin = name_or_path;
    } else {
        std::ifstream in(name_or_path);
        if (!in)
            throw std::runtime_error("'" + name_or_path +
                                     "' is neither a built-in scenario (example1..example3) nor a "
                                     "readable config file");
        std::ostringstream ss;
        ss << in.rdbuf();
        source = ss.str();
        origin = name_or_path;
    }

    auto parsed = dsl::parse_system(source);
    if (!parsed.ok())
        throw std::runtime_error(origin + ": " + parsed.error.render());
    const dsl::ParsedSystem& sys = *parsed.value;

    ScenarioConfig cfg;
    cfg.name = sys.name.empty() ? "scenario" : sys.name;
    cfg.alpha = sys.alpha;
    cfg.omega = sys.omega;
    cfg.t0 = sys.t0;
    cfg.x0 = sys.x0;
    cfg.t_end = sys.horizon;
    cfg.field_exprs = sys.components;
    cfg.lyapunov_expr = sys.lyapunov;

    std::optional<std::vector<double>> structural_m;
    std::optional<double> structural_phi;
    for (const auto& kv : sys.extras) {
        if (kv.key == "h") {
            cfg.h = parse_number_or_throw(kv);
        } else if (kv.key == "sweeps") {
            cfg.corrector_sweeps = static_cast<int>(parse_number_or_throw(kv));
        } else if (kv.key == "lyapunov.lambda") {
            cfg.lyapunov_lambda = parse_number_or_throw(kv);
        } else if (kv.key == "structural.m") {
            structural_m = parse_number_list(kv);
        } else if (kv.key == "structural.phi") {
            structural_phi = parse_number_or_throw(kv);
        } else if (kv.key == "structural.box") {
            cfg.box_half_width = parse_number_or_throw(kv);
        } else if (kv.key == "compare.a") {
            cfg.compare_a = parse_number_or_throw(kv);
        } else {
            throw std::runtime_error(origin + ": line " + std::to_string(kv.pos.line) +
                                     ": unknown key '" + kv.key + "'");
        }
    }
    if (structural_m.has_value() != structural_phi.has_value())
        throw std::runtime_error(origin +
                                 ": structural.m and structural.phi must be given together");
    if (structural_m) {
        StructuralSpec spec;
        for (double v : *structural_m) {
            if (v != std::rint(v))
                throw std::runtime_error(origin + ": structural.m entries must be integers");
            spec.m.push_back(static_cast<int>(v));
        }
        spec.phi = *structural_phi;
        cfg.structural = spec;
    }

    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    return cfg;
}

namespace {

// Everything a scenario produces before any file is written.
struct Computation {
    SolveResult solve{Trajectory(UniformGrid(0, 1, 0), 1), SolveStatus::Completed, 0};
    std::optional<ComparisonReport> comparison;
    std::optional<StabilityReport> lyapunov;
    std::optional<StabilityReport> structural;
    double final_norm = 0.0;
    bool any_verdict_failed = false;
};

Computation compute_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
    Computation out;
    const ShortMemorySystem sys = cfg.make_system();
    out.solve = solve_short_memory(sys, cfg.solve_config());
    const Trajectory& traj = out.solve.trajectory;
    out.final_norm = euclidean_norm(traj.node_values(traj.grid().n_steps));

    if (cfg.compare_a) {
        if (out.solve.ok()) {
            out.comparison = compare_theorem3(traj.component(0), cfg.order(), cfg.window(),
                                              *cfg.compare_a, cfg.solve_config());
        } else {
            ComparisonReport rep{ComparisonVerdict::Inapplicable,
                                 std::string("windowed solve aborted (") +
                                     to_string(out.solve.status) + ")",
                                 scheme_tolerance(cfg.h, cfg.order()),
                                 0.0,
                                 0,
                                 traj,
                                 traj,
                                 {},
                                 {}};
            out.comparison = std::move(rep);
        }
        if (out.comparison->verdict != ComparisonVerdict::Holds) out.any_verdict_failed = true;
    }

    if (cfg.lyapunov_expr) {
        if (out.solve.ok()) {
            const LyapunovCandidate cand{cfg.make_lyapunov(), *cfg.lyapunov_lambda};
            out.lyapunov = check_theorem4(sys, cand, traj, cfg.make_box());
        } else {
            StabilityReport rep;
            rep.criterion = "lyapunov decay certificate";
            rep.verdict = StabilityVerdict::NotCertified;
            rep.reason = std::string("trajectory aborted (") + to_string(out.solve.status) +
                         " at node " + std::to_string(out.solve.first_bad_index) +
                         "); flagged run counts as unstable evidence";
            rep.threshold = memory_threshold(cfg.order(), cfg.window());
            out.lyapunov = std::move(rep);
        }
        if (out.lyapunov->verdict != StabilityVerdict::Certified) out.any_verdict_failed = true;
    }

    if (cfg.structural) {
        out.structural = check_theorem5(sys.field, *cfg.structural, cfg.order(), cfg.window(),
                                        cfg.make_box(), seed);
        if (!out.solve.ok()) {
            out.structural->notes.push_back("trajectory aborted (" +
                                            std::string(to_string(out.solve.status)) +
                                            "); flagged run counts as unstable evidence");
            out.structural->verdict = StabilityVerdict::NotCertified;
            if (out.structural->reason.empty())
                out.structural->reason = "trajectory aborted during the solve";
        }
        if (out.structural->verdict != StabilityVerdict::Certified) out.any_verdict_failed = true;
    }
    return out;
}

void stability_section(Report& report, const std::string& prefix, const StabilityReport& rep) {
    for (const auto& [k, v] : rep.inputs) report.input(prefix + ": " + k, v);
    report.threshold(prefix + ": memory threshold", fmt(rep.threshold));
    report.margin(prefix + ": threshold margin", fmt(rep.threshold_margin));
    report.margin(prefix + ": condition margin", fmt(rep.condition_margin));
    if (!rep.worst_sample.empty()) report.margin(prefix + ": worst sample", rep.worst_sample);
    std::string v = std::string(to_string(rep.verdict));
    if (!rep.reason.empty()) v += " (" + rep.reason + ")";
    report.verdict(prefix + ": " + v);
    for (const auto& n : rep.notes) report.note(prefix + ": " + n);
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& base_cfg, const RunOptions& opts) {
    ScenarioOutcome outcome;
    try {
        ScenarioConfig cfg = base_cfg;
        if (opts.step) cfg.h = *opts.step;
        if (opts.horizon) cfg.t_end = *opts.horizon;
        cfg.validate();

        const Computation comp = compute_scenario(cfg, opts.seed);

        Report report(cfg.name);
        report.input("alpha", fmt(cfg.alpha));
        report.input("omega", fmt(cfg.omega));
        report.input("t0", fmt(cfg.t0));
        report.input("x0", fmt_vector(cfg.x0));
        report.input("h", fmt(cfg.h));
        report.input("t_end", fmt(cfg.t_end));
        for (int i = 0; i < cfg.dim(); ++i)
            report.input("field." + std::to_string(i + 1),
                         cfg.field_exprs[static_cast<std::size_t>(i)].pretty());
        report.threshold("memory threshold 1/(omega^alpha*Gamma(1-alpha))",
                         fmt(memory_threshold(cfg.order(), cfg.window())));
        report.margin("final state norm", fmt(comp.final_norm));

        bool solver_failed = false;
        if (!comp.solve.ok()) {
            solver_failed = true;
            report.verdict(std::string("solver: aborted (") + to_string(comp.solve.status) +
                           " at node " + std::to_string(comp.solve.first_bad_index) + ")");
        } else {
            report.verdict("solver: completed");
        }

        if (comp.comparison) {
            const ComparisonReport& rep = *comp.comparison;
            for (const auto& [k, v] : rep.inputs) report.input("comparison: " + k, v);
            report.threshold("comparison: tolerance", fmt(rep.tolerance));
            report.margin("comparison: max violation", fmt(rep.max_violation));
            std::string v = std::string(to_string(rep.verdict));
            if (!rep.reason.empty()) v += " (" + rep.reason + ")";
            report.verdict("comparison: " + v);
            for (const auto& n : rep.notes) report.note("comparison: " + n);
        }
        if (comp.lyapunov) stability_section(report, "lyapunov", *comp.lyapunov);
        if (comp.structural) stability_section(report, "structural", *comp.structural);

        if (opts.write_files) {
            std::filesystem::create_directories(opts.out_dir);
            const auto traj_path = opts.out_dir / (cfg.name + ".csv");
            write_trajectory_csv(traj_path, comp.solve.trajectory);
            outcome.files.push_back(traj_path);

            if (comp.comparison && comp.comparison->lhs.nodes() == comp.comparison->rhs.nodes() &&
                comp.comparison->lhs.nodes() > 0) {
                const auto& rep = *comp.comparison;
                std::vector<double> xs(rep.lhs.nodes()), ys(rep.lhs.nodes()), viol(rep.lhs.nodes());
                for (std::size_t k = 0; k < rep.lhs.nodes(); ++k) {
                    xs[k] = rep.lhs.value(k, 0);
                    ys[k] = rep.rhs.value(k, 0);
                    viol[k] = xs[k] - ys[k];
                }
                const auto cmp_path = opts.out_dir / (cfg.name + "_compare.csv");
                write_columns_csv(cmp_path, rep.lhs.grid(), {"x_short", "y_bound", "violation"},
                                  {xs, ys, viol});
                outcome.files.push_back(cmp_path);
            }

            const auto report_path = opts.out_dir / (cfg.name + "_report.txt");
            report.write(report_path);
            outcome.files.push_back(report_path);
        }

        outcome.report_text = report.render();
        if (comp.any_verdict_failed)
            outcome.status = RunStatus::VerdictFailed;
        else if (solver_failed)
            outcome.status = RunStatus::Error;   // no check requested could absorb the abort
        else
            outcome.status = RunStatus::Ok;
        if (solver_failed)
            outcome.message = std::string("solver aborted: ") + to_string(comp.solve.status);
    } catch (const std::exception& e) {
        outcome.status = RunStatus::Error;
        outcome.message = e.what();
    }
    return outcome;
}

std::optional<SweepAxis> parse_sweep_axis(const std::string& name) {
    if (name == "alpha") return SweepAxis::Alpha;
    if (name == "omega") return SweepAxis::Omega;
    if (name == "lambda") return SweepAxis::Lambda;
    return std::nullopt;
}

namespace {

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Alpha: return "alpha";
        case SweepAxis::Omega: return "omega";
        case SweepAxis::Lambda: return "lambda";
    }
    return "?";
}

SweepRow sweep_cell(const ScenarioConfig& base, SweepAxis axis, double value,
                    std::uint64_t seed) {
    SweepRow row;
    row.value = value;
    try {
        ScenarioConfig cfg = base;
        switch (axis) {
            case SweepAxis::Alpha: cfg.alpha = value; break;
            case SweepAxis::Omega: cfg.omega = value; break;
            case SweepAxis::Lambda:
                if (!cfg.lyapunov_expr)
                    throw std::runtime_error("lambda sweep needs a scenario with lyapunov.v");
                cfg.lyapunov_lambda = value;
                break;
        }
        cfg.validate();
        row.threshold = memory_threshold(cfg.order(), cfg.window());

        const Computation comp = compute_scenario(cfg, seed);
        row.final_norm = comp.final_norm;

        std::vector<std::string> verdicts;
        if (!comp.solve.ok())
            verdicts.push_back(std::string("aborted-") + to_string(comp.solve.status));
        if (comp.comparison) verdicts.push_back(to_string(comp.comparison->verdict));
        if (comp.lyapunov) verdicts.push_back(to_string(comp.lyapunov->verdict));
        if (comp.structural) verdicts.push_back(to_string(comp.structural->verdict));
        if (verdicts.empty()) verdicts.push_back("no-checks");
        std::string joined;
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            if (i) joined += "+";
            joined += verdicts[i];
        }
        row.verdict = joined;
    } catch (const std::exception& e) {
        row.verdict = "error";
        row.note = e.what();
    }
    return row;
}

}  // namespace

SweepOutcome run_sweep(const ScenarioConfig& base, SweepAxis axis,
                       const std::vector<double>& values, const RunOptions& opts) {
    SweepOutcome outcome;
    outcome.rows.resize(values.size());
    if (values.empty()) {
        outcome.status = RunStatus::Error;
        return outcome;
    }

    // bounded worker pool; each cell writes only its own slot, and the CSV
    // is emitted in input order afterwards
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>({values.size(), hw, 8});
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= values.size()) return;
                outcome.rows[i] = sweep_cell(base, axis, values[i], opts.seed);
            }
        });
    }
    for (auto& th : pool) th.join();

    bool any_error = false, any_failed = false;
    for (const auto& row : outcome.rows) {
        if (row.verdict == "error") {
            any_error = true;
            continue;
        }
        if (row.verdict.find("not-certified") != std::string::npos ||
            row.verdict.find("violated") != std::string::npos ||
            row.verdict.find("inapplicable") != std::string::npos ||
            row.verdict.find("aborted") != std::string::npos)
            any_failed = true;
    }
    outcome.status = any_error ? RunStatus::Error
                               : (any_failed ? RunStatus::VerdictFailed : RunStatus::Ok);

    if (opts.write_files) {
        std::filesystem::create_directories(opts.out_dir);
        outcome.csv_path = opts.out_dir / (base.name + "_sweep_" + axis_name(axis) + ".csv");
        std::ofstream out(outcome.csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + outcome.csv_path.string());
        out << "axis,value,threshold,verdict,final_norm,note\n";
        for (const auto& row : outcome.rows) {
            out << axis_name(axis) << ',' << format_value(row.value) << ','
                << format_value(row.threshold) << ',' << row.verdict << ','
                << format_value(row.final_norm) << ',' << row.note << "\n";
        }
    }
    return outcome;
}

}  // namespace fracwin
