#include "fracwin/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "fracwin/gamma.hpp"
#include "fracwin/numeric.hpp"
#include "fracwin/operators.hpp"

namespace fracwin {

const char* to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Completed: return "completed";
        case SolveStatus::BlowUp: return "blow-up";
        case SolveStatus::NonFinite: return "non-finite";
    }
    return "unknown";
}

void SolveConfig::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("SolveConfig: step h must be positive");
    if (!(t_end > t0)) throw std::invalid_argument("SolveConfig: t_end must exceed t0");
    if (corrector_sweeps < 1)
        throw std::invalid_argument("SolveConfig: corrector_sweeps must be >= 1");
    if (!(blowup_bound > 0.0))
        throw std::invalid_argument("SolveConfig: blowup_bound must be positive");
}

UniformGrid SolveConfig::make_grid() const {
    validate();
    const double span = t_end - t0;
    const auto n = static_cast<long long>(std::llround(span / h));
    if (n < 1 || std::abs(static_cast<double>(n) * h - span) > 1e-9 * span)
        throw std::invalid_argument(
            "SolveConfig: t_end - t0 = " + std::to_string(span) +
            " is not an integer multiple of h = " + std::to_string(h));
    return UniformGrid(t0, h, static_cast<std::size_t>(n));
}

DelayLinearSystem DelayLinearSystem::constant_history(double a, double b, double q, double x0) {
    DelayLinearSystem sys;
    sys.a = a;
    sys.b = b;
    sys.q = q;
    sys.history = [x0](double) { return x0; };
    return sys;
}

void DelayLinearSystem::validate() const {
    if (!(q > 0.0)) throw std::invalid_argument("DelayLinearSystem: delay q must be positive");
    if (!history) throw std::invalid_argument("DelayLinearSystem: history function not set");
}

void ShortMemorySystem::validate() const {
    if (field.dim < 1 || !field.fn)
        throw std::invalid_argument("ShortMemorySystem: field not set");
    if (static_cast<int>(x0.size()) != field.dim)
        throw std::invalid_argument("ShortMemorySystem: x0 has dimension " +
                                    std::to_string(x0.size()) + ", field expects " +
                                    std::to_string(field.dim));
}

namespace {

// Right-hand side callback for the ABM core. `past` is the trajectory under
// construction: nodes with index < node are final when the callback runs;
// `state` is the current iterate for `node` itself.
struct Rhs {
    virtual void operator()(const Trajectory& past, std::size_t node, double t,
                            std::span<const double> state, std::span<double> out) const = 0;
    virtual ~Rhs() = default;
};

SolveResult make_truncated(const Trajectory& full, std::size_t last_valid, SolveStatus status,
                           std::size_t first_bad) {
    UniformGrid grid(full.grid().t0, full.grid().h, last_valid);
    Trajectory out(grid, full.dim());
    for (std::size_t k = 0; k <= last_valid; ++k)
        for (int i = 0; i < full.dim(); ++i) out.value(k, i) = full.value(k, i);
    return SolveResult{std::move(out), status, first_bad};
}

// Predictor-corrector core. Weights come from tables of k^a and k^(a+1);
// every history sum runs j = 0..n in index order, which keeps repeated
// solves bit-identical.
SolveResult abm_integrate(int dim, std::span<const double> x0, const Order& alpha,
                          const SolveConfig& cfg, const Rhs& rhs) {
    const UniformGrid grid = cfg.make_grid();
    const double a = alpha.alpha();
    const std::size_t n_steps = grid.n_steps;
    const auto d = static_cast<std::size_t>(dim);

    Trajectory traj(grid, dim);
    for (std::size_t i = 0; i < d; ++i) traj.value(0, static_cast<int>(i)) = x0[i];

    std::vector<double> pow_a(n_steps + 2), pow_a1(n_steps + 2);
    for (std::size_t k = 0; k < pow_a.size(); ++k) {
        pow_a[k] = std::pow(static_cast<double>(k), a);
        pow_a1[k] = std::pow(static_cast<double>(k), a + 1.0);
    }
    const double pred_scale = std::pow(grid.h, a) / gamma(a + 1.0);
    const double corr_scale = std::pow(grid.h, a) / gamma(a + 2.0);

    std::vector<double> f_hist((n_steps + 1) * d, 0.0);
    std::vector<double> x_work(d), f_work(d), corr_sum(d);

    rhs(traj, 0, grid.t0, traj.node_values(0), std::span<double>(f_hist.data(), d));
    if (!all_finite({f_hist.data(), d}))
        return make_truncated(traj, 0, SolveStatus::NonFinite, 0);

    for (std::size_t n = 0; n < n_steps; ++n) {
        const std::size_t next = n + 1;
        const double t_next = grid.node(next);

        // predictor: b_{j,n+1} = (n+1-j)^a - (n-j)^a
        for (std::size_t i = 0; i < d; ++i) x_work[i] = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double b = pow_a[next - j] - pow_a[n - j];
            const double* fj = f_hist.data() + j * d;
            for (std::size_t i = 0; i < d; ++i) x_work[i] += b * fj[i];
        }
        for (std::size_t i = 0; i < d; ++i) x_work[i] = x0[i] + pred_scale * x_work[i];
        if (!all_finite(x_work)) return make_truncated(traj, n, SolveStatus::NonFinite, next);

        // corrector history sum: a_{0,n+1} = n^(a+1) - (n-a)(n+1)^a,
        // a_{j,n+1} = (n-j+2)^(a+1) + (n-j)^(a+1) - 2 (n-j+1)^(a+1)
        {
            const double a0 = pow_a1[n] - (static_cast<double>(n) - a) * pow_a[next];
            const double* f0 = f_hist.data();
            for (std::size_t i = 0; i < d; ++i) corr_sum[i] = a0 * f0[i];
        }
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t m = n - j;
            const double aj = pow_a1[m + 2] + pow_a1[m] - 2.0 * pow_a1[m + 1];
            const double* fj = f_hist.data() + j * d;
            for (std::size_t i = 0; i < d; ++i) corr_sum[i] += aj * fj[i];
        }

        bool bad_eval = false;
        for (int sweep = 0; sweep < cfg.corrector_sweeps; ++sweep) {
            rhs(traj, next, t_next, x_work, f_work);
            if (!all_finite(f_work)) {
                bad_eval = true;
                break;
            }
            for (std::size_t i = 0; i < d; ++i)
                x_work[i] = x0[i] + corr_scale * (f_work[i] + corr_sum[i]);
        }
        if (bad_eval || !all_finite(x_work))
            return make_truncated(traj, n, SolveStatus::NonFinite, next);
        if (max_abs(x_work) > cfg.blowup_bound)
            return make_truncated(traj, n, SolveStatus::BlowUp, next);

        for (std::size_t i = 0; i < d; ++i) traj.value(next, static_cast<int>(i)) = x_work[i];

        // stored f for later sums is taken at the accepted state
        rhs(traj, next, t_next, traj.node_values(next), {f_hist.data() + next * d, d});
        if (!all_finite({f_hist.data() + next * d, d}))
            return make_truncated(traj, n, SolveStatus::NonFinite, next);
    }

    return SolveResult{std::move(traj), SolveStatus::Completed, 0};
}

struct PlainRhs final : Rhs {
    const VectorField* field;
    void operator()(const Trajectory&, std::size_t, double t, std::span<const double> state,
                    std::span<double> out) const override {
        field->fn(t, state, out);
    }
};

struct DelayRhs final : Rhs {
    const DelayLinearSystem* sys;
    std::size_t n_q;
    void operator()(const Trajectory& past, std::size_t node, double t,
                    std::span<const double> state, std::span<double> out) const override {
        const double lag =
            (node <= n_q) ? sys->history(t - sys->q) : past.value(node - n_q, 0);
        out[0] = -sys->a * state[0] + sys->b * lag;
    }
};

struct WindowedRhs final : Rhs {
    const ShortMemorySystem* sys;
    std::size_t n_w;
    double inv_gamma_1ma;            // 1/Gamma(1-a)
    double inv_omega_a;              // omega^(-a)
    std::vector<double> pow_neg;     // m^(-a-1), m = 0..n_steps (entry 0 unused)

    void operator()(const Trajectory& past, std::size_t node, double t,
                    std::span<const double> state, std::span<double> out) const override {
        sys->field.fn(t, state, out);
        if (node <= n_w) return;

        const double a = sys->order.alpha();
        const double t0 = sys->window.t0();
        const double h = past.grid().h;
        const std::size_t lag_node = node - n_w;
        const double dt0 = t - t0;
        if (!(dt0 >= sys->window.omega()))
            throw std::logic_error("solve_short_memory: t - t0 < omega on the sliding branch");
        const double start_decay = std::pow(dt0, -a);
        const double tail_scale = std::pow(h, -a);  // h * (m h)^(-a-1) summed below

        for (int i = 0; i < sys->field.dim; ++i) {
            // composite trapezoid over stored nodes [t0, t - omega]
            double tail = 0.5 * (pow_neg[node] * past.value(0, i) +
                                 pow_neg[n_w] * past.value(lag_node, i));
            for (std::size_t k = 1; k < lag_node; ++k)
                tail += pow_neg[node - k] * past.value(k, i);
            tail *= tail_scale;

            out[i] += inv_gamma_1ma * (past.value(lag_node, i) * inv_omega_a -
                                       sys->x0[static_cast<std::size_t>(i)] * start_decay -
                                       a * tail);
        }
    }
};

}  // namespace

SolveResult solve_caputo(const VectorField& field, const Order& alpha,
                         std::span<const double> x0, const SolveConfig& cfg) {
    if (field.dim < 1 || !field.fn) throw std::invalid_argument("solve_caputo: field not set");
    if (x0.size() != static_cast<std::size_t>(field.dim))
        throw std::invalid_argument("solve_caputo: x0 dimension mismatch");
    PlainRhs rhs;
    rhs.field = &field;
    return abm_integrate(field.dim, x0, alpha, cfg, rhs);
}

SolveResult solve_caputo_delay(const DelayLinearSystem& sys, const Order& alpha,
                               const SolveConfig& cfg) {
    sys.validate();
    const UniformGrid grid = cfg.make_grid();
    DelayRhs rhs;
    rhs.sys = &sys;
    rhs.n_q = aligned_steps(sys.q, grid, "delay q");
    const double x_init = sys.history(cfg.t0);
    if (!std::isfinite(x_init))
        throw std::invalid_argument("solve_caputo_delay: history(t0) is not finite");
    return abm_integrate(1, std::span<const double>(&x_init, 1), alpha, cfg, rhs);
}

SolveResult solve_short_memory(const ShortMemorySystem& sys, const SolveConfig& cfg) {
    sys.validate();
    if (cfg.t0 != sys.window.t0())
        throw std::invalid_argument("solve_short_memory: cfg.t0 = " + std::to_string(cfg.t0) +
                                    " must equal window t0 = " + std::to_string(sys.window.t0()));
    const UniformGrid grid = cfg.make_grid();
    const double a = sys.order.alpha();

    WindowedRhs rhs;
    rhs.sys = &sys;
    rhs.n_w = aligned_steps(sys.window.omega(), grid, "window length omega");
    rhs.inv_gamma_1ma = 1.0 / gamma(1.0 - a);
    rhs.inv_omega_a = std::pow(sys.window.omega(), -a);
    rhs.pow_neg.resize(grid.n_steps + 2);
    for (std::size_t m = 1; m < rhs.pow_neg.size(); ++m)
        rhs.pow_neg[m] = std::pow(static_cast<double>(m), -a - 1.0);
    rhs.pow_neg[0] = 0.0;  // never referenced: node - k >= n_w >= 1 on the sliding branch

    return abm_integrate(sys.field.dim, sys.x0, sys.order, cfg, rhs);
}

Trajectory residual_check(const ShortMemorySystem& sys, const Trajectory& traj) {
    sys.validate();
    if (traj.dim() != sys.field.dim)
        throw std::invalid_argument("residual_check: trajectory dimension mismatch");
    if (traj.grid().t0 != sys.window.t0())
        throw std::invalid_argument("residual_check: grid t0 does not match window t0");

    const int dim = traj.dim();
    Trajectory residual(traj.grid(), dim);
    std::vector<std::vector<double>> derivative(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        derivative[static_cast<std::size_t>(i)] =
            short_memory_l1_series(traj.component(i), sys.order, sys.window);

    std::vector<double> f(static_cast<std::size_t>(dim));
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        sys.field.fn(traj.grid().node(k), traj.node_values(k), f);
        for (int i = 0; i < dim; ++i)
            residual.value(k, i) = derivative[static_cast<std::size_t>(i)][k] -
                                   f[static_cast<std::size_t>(i)];
    }
    return residual;
}

double max_abs_residual(const Trajectory& residual, double from_time) {
    double worst = 0.0;
    for (std::size_t k = 0; k < residual.nodes(); ++k) {
        if (residual.grid().node(k) < from_time - 1e-12) continue;
        for (int i = 0; i < residual.dim(); ++i)
            worst = std::max(worst, std::abs(residual.value(k, i)));
    }
    return worst;
}

}  // namespace fracwin
