#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracwin/field.hpp"
#include "fracwin/grid.hpp"

namespace fracwin {

/// Step-size, horizon and policy knobs shared by all solvers.
struct SolveConfig {
    double t0 = 0.0;
    double h = 0.01;
    double t_end = 1.0;
    int corrector_sweeps = 1;      // PECE when 1
    double blowup_bound = 1e8;

    void validate() const;
    UniformGrid make_grid() const;
};

enum class SolveStatus { Completed, BlowUp, NonFinite };

const char* to_string(SolveStatus s) noexcept;

/// Outcome of a solve. On abort the trajectory is truncated to the last
/// fully valid node and `first_bad_index` names the step that failed.
struct SolveResult {
    Trajectory trajectory;
    SolveStatus status = SolveStatus::Completed;
    std::size_t first_bad_index = 0;

    bool ok() const noexcept { return status == SolveStatus::Completed; }
};

/// Scalar linear system with one discrete delay:
///   D^a x(t) = -a_coef * x(t) + b_coef * x(t - q),  x = history on [t0-q, t0].
struct DelayLinearSystem {
    double a = 0.0;
    double b = 0.0;
    double q = 1.0;
    std::function<double(double)> history;

    static DelayLinearSystem constant_history(double a, double b, double q, double x0);
    void validate() const;
};

/// Windowed-derivative system D~^a x = f(x, t), x(t0) = x0.
struct ShortMemorySystem {
    VectorField field;
    Order order;
    Window window;
    std::vector<double> x0;

    void validate() const;
};

/// Adams-Bashforth-Moulton predictor-corrector for D^a x = f(x, t).
///
/// Predictor: x0 + h^a/Gamma(a+1) * sum b_{j,n+1} f_j,
///   b_{j,n+1} = (n+1-j)^a - (n-j)^a.
/// Corrector: x0 + h^a/Gamma(a+2) * [f(t_{n+1}, x^P) + sum a_{j,n+1} f_j],
///   a_{0,n+1} = n^(a+1) - (n-a)(n+1)^a,
///   a_{j,n+1} = (n-j+2)^(a+1) + (n-j)^(a+1) - 2(n-j+1)^(a+1),  1 <= j <= n.
/// The corrector is applied cfg.corrector_sweeps times; stored f values are
/// taken at the accepted states.
SolveResult solve_caputo(const VectorField& field, const Order& alpha,
                         std::span<const double> x0, const SolveConfig& cfg);

/// ABM stepping for the delayed system. The lag q must be an exact multiple
/// of cfg.h; the delayed value is read from the history function while
/// t_j - q <= t0 and from grid index j - N_q afterwards.
SolveResult solve_caputo_delay(const DelayLinearSystem& sys, const Order& alpha,
                               const SolveConfig& cfg);

/// Integrates the windowed system through its equivalent Caputo form: the
/// right-hand side is f while the window has not started sliding, and
///
///   f(x,t) + 1/Gamma(1-a) * [ x(t-w)/w^a - x0/(t-t0)^a
///                             - a * int_{t0}^{t-w} (t-tau)^(-a-1) x(tau) dtau ]
///
/// afterwards, with x(t-w) read from the stored grid and the tail integral
/// taken by the composite trapezoid over stored nodes (the integrand is
/// bounded by w^(-a-1)*max|x| there). The node exactly at t0 + w uses the
/// plain branch. cfg.t0 must match sys.window.t0.
SolveResult solve_short_memory(const ShortMemorySystem& sys, const SolveConfig& cfg);

/// A-posteriori defect of a trajectory against the windowed derivative:
/// r_j,i = short_memory_l1(x_i)_j - f_i(x_j, t_j), returned on traj's grid.
/// Node 0 carries the empty-operator convention (the L1 value there is 0),
/// so its residual equals |f_i(x0, t0)| and does not shrink with h; measure
/// convergence away from the initial node.
Trajectory residual_check(const ShortMemorySystem& sys, const Trajectory& traj);

/// Max |r_j,i| over nodes with t_j >= from_time (all components).
double max_abs_residual(const Trajectory& residual, double from_time);

}  // namespace fracwin
