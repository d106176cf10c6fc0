#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracwin/analysis.hpp"
#include "fracwin/dsl.hpp"
#include "fracwin/field.hpp"
#include "fracwin/solver.hpp"

namespace fracwin {

/// A fully validated scenario: system definition plus whichever checks the
/// document requested.
struct ScenarioConfig {
    std::string name;
    double alpha = 0.0;
    double omega = 0.0;
    double t0 = 0.0;
    std::vector<double> x0;
    double t_end = 50.0;
    double h = 0.01;
    int corrector_sweeps = 1;
    double box_half_width = 3.0;

    std::vector<dsl::Expr> field_exprs;
    std::optional<dsl::Expr> lyapunov_expr;
    std::optional<double> lyapunov_lambda;
    std::optional<StructuralSpec> structural;
    std::optional<double> compare_a;    // comparison request, scalar systems only

    int dim() const { return static_cast<int>(field_exprs.size()); }

    Order order() const { return Order(alpha); }
    Window window() const { return Window(omega, t0); }
    SolveConfig solve_config() const;
    VectorField make_field() const;
    ScalarField make_lyapunov() const;
    ShortMemorySystem make_system() const;
    SampleBox make_box() const;

    /// Alignment and consistency checks with actionable messages.
    void validate() const;
};

/// Names of the built-in scenarios, in registry order.
std::vector<std::string> builtin_scenario_names();

/// True when `name` is a built-in scenario.
bool is_builtin_scenario(const std::string& name);

/// The config-document source of a built-in scenario (also what
/// `load_scenario` parses), so the shipped scenarios exercise the same
/// parser as user files.
std::string builtin_scenario_source(const std::string& name);

/// Loads a scenario by built-in name or from a config file path. Throws
/// std::runtime_error with a positioned message on parse or validation
/// failure.
ScenarioConfig load_scenario(const std::string& name_or_path);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<double> step;         // overrides h
    std::optional<double> horizon;      // overrides t_end
    std::uint64_t seed = kStructuralDefaultSeed;
    bool quiet = false;
    bool write_files = true;
};

/// Exit-status contract shared by all commands: 0 all requested checks
/// certified/holding, 1 some verdict failed, 2 configuration or runtime
/// error.
enum class RunStatus : int { Ok = 0, VerdictFailed = 1, Error = 2 };

struct ScenarioOutcome {
    RunStatus status = RunStatus::Ok;
    std::string report_text;
    std::vector<std::filesystem::path> files;
    std::string message;                // set on Error
};

/// Solves the scenario, writes the trajectory CSV and report (plus the
/// comparison CSV when a comparison is requested), and runs every check the
/// config carries.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const RunOptions& opts);

enum class SweepAxis { Alpha, Omega, Lambda };

std::optional<SweepAxis> parse_sweep_axis(const std::string& name);

struct SweepRow {
    double value = 0.0;
    double threshold = 0.0;
    std::string verdict;
    double final_norm = 0.0;
    std::string note;                   // per-cell failure text, row kept
};

struct SweepOutcome {
    RunStatus status = RunStatus::Ok;
    std::vector<SweepRow> rows;         // input order
    std::filesystem::path csv_path;
};

/// Runs one solve-and-check per value (cells run on a bounded worker pool;
/// rows are assembled in input order) and writes a summary CSV.
SweepOutcome run_sweep(const ScenarioConfig& base, SweepAxis axis,
                       const std::vector<double>& values, const RunOptions& opts);

}  // namespace fracwin
