#include "fracwin/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "fracwin/numeric.hpp"
#include "fracwin/operators.hpp"
#include "fracwin/tolerances.hpp"

namespace fracwin {

const char* to_string(StabilityVerdict v) noexcept {
    return v == StabilityVerdict::Certified ? "certified" : "not-certified";
}

const char* to_string(ComparisonVerdict v) noexcept {
    switch (v) {
        case ComparisonVerdict::Holds: return "holds";
        case ComparisonVerdict::Violated: return "violated";
        case ComparisonVerdict::Inapplicable: return "inapplicable";
    }
    return "unknown";
}

SampleBox SampleBox::centered(int dim, double half_width, std::vector<double> times) {
    SampleBox box;
    box.lo.assign(static_cast<std::size_t>(dim), -half_width);
    box.hi.assign(static_cast<std::size_t>(dim), half_width);
    box.times = std::move(times);
    return box;
}

void SampleBox::validate(int dim) const {
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw std::invalid_argument("SampleBox: bounds do not match dimension " +
                                    std::to_string(dim));
    for (int i = 0; i < dim; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (!(lo[u] <= 0.0 && 0.0 <= hi[u] && lo[u] < hi[u]))
            throw std::invalid_argument("SampleBox: axis " + std::to_string(i + 1) +
                                        " must be a nondegenerate interval containing 0");
    }
    if (times.empty()) throw std::invalid_argument("SampleBox: needs at least one time sample");
}

void LyapunovCandidate::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("LyapunovCandidate: lambda must be positive");
    if (!V.fn) throw std::invalid_argument("LyapunovCandidate: V not set");
}

int StructuralSpec::m_hat() const {
    int mh = m.front();
    for (int mi : m) mh = std::min(mh, mi);
    return mh;
}

void StructuralSpec::validate(int dim) const {
    if (static_cast<int>(m.size()) != dim)
        throw std::invalid_argument("StructuralSpec: needs one exponent per component");
    for (int mi : m)
        if (mi < 1 || mi > 8)
            throw std::invalid_argument("StructuralSpec: exponents m_i must be in 1..8");
    if (!(phi > 0.0)) throw std::invalid_argument("StructuralSpec: phi must be positive");
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_point(std::span<const double> x, double t) {
    std::string s = "x = (";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += fmt(x[i]);
    }
    s += "), t = " + fmt(t);
    return s;
}

}  // namespace

ComparisonReport compare_theorem3(const Trajectory& short_run, const Order& alpha,
                                  const Window& window, double a_coef,
                                  const SolveConfig& cfg) {
    if (short_run.dim() != 1)
        throw std::invalid_argument("compare_theorem3: expects a scalar trajectory");
    if (!(a_coef > 0.0))
        throw std::invalid_argument("compare_theorem3: decay coefficient a must be positive");
    const UniformGrid& grid = short_run.grid();
    if (grid.t0 != window.t0())
        throw std::invalid_argument("compare_theorem3: grid t0 does not match window t0");
    aligned_steps(window.omega(), grid, "window length omega");

    const double b = memory_threshold(alpha, window);
    const double x_init = short_run.value(0, 0);

    SolveConfig bound_cfg = cfg;
    bound_cfg.t0 = grid.t0;
    bound_cfg.h = grid.h;
    bound_cfg.t_end = grid.t_end();
    SolveResult bound = solve_caputo_delay(
        DelayLinearSystem::constant_history(a_coef, b, window.omega(), x_init), alpha, bound_cfg);

    ComparisonReport rep{ComparisonVerdict::Inapplicable,
                         "",
                         scheme_tolerance(grid.h, alpha),
                         0.0,
                         0,
                         short_run,
                         bound.trajectory,
                         {},
                         {}};
    rep.inputs = {{"a", fmt(a_coef)},
                  {"b = memory threshold", fmt(b)},
                  {"alpha", fmt(alpha.alpha())},
                  {"omega", fmt(window.omega())},
                  {"h", fmt(grid.h)},
                  {"x0", fmt(x_init)}};
    rep.notes.push_back("strict inequalities are checked as <= tolerance; tolerance = C*h^(1-alpha)");

    if (!bound.ok()) {
        rep.reason = std::string("bounding delayed system aborted (") + to_string(bound.status) +
                     " at node " + std::to_string(bound.first_bad_index) + ")";
        return rep;
    }

    // Theorem hypotheses require both trajectories nonnegative.
    for (std::size_t k = 0; k < short_run.nodes(); ++k) {
        if (short_run.value(k, 0) < -rep.tolerance) {
            rep.reason = "windowed trajectory drops below -tolerance at t = " +
                         fmt(grid.node(k)) + "; nonnegativity hypothesis fails";
            return rep;
        }
        if (bound.trajectory.value(k, 0) < -rep.tolerance) {
            rep.reason = "bounding trajectory drops below -tolerance at t = " +
                         fmt(grid.node(k)) + "; nonnegativity hypothesis fails";
            return rep;
        }
    }

    double max_violation = -std::numeric_limits<double>::infinity();
    std::size_t first_violation = short_run.nodes();
    for (std::size_t k = 0; k < short_run.nodes(); ++k) {
        const double v = short_run.value(k, 0) - bound.trajectory.value(k, 0);
        if (v > max_violation) max_violation = v;
        if (v > rep.tolerance && first_violation == short_run.nodes()) first_violation = k;
    }
    rep.max_violation = max_violation;
    if (first_violation == short_run.nodes()) {
        rep.verdict = ComparisonVerdict::Holds;
    } else {
        rep.verdict = ComparisonVerdict::Violated;
        rep.first_violation_index = first_violation;
        rep.reason = "x exceeds y by more than the tolerance at t = " +
                     fmt(grid.node(first_violation));
    }
    return rep;
}

StabilityReport check_theorem4(const ShortMemorySystem& sys, const LyapunovCandidate& cand,
                               const Trajectory& traj, const SampleBox& box) {
    sys.validate();
    cand.validate();
    box.validate(sys.field.dim);
    if (traj.dim() != sys.field.dim)
        throw std::invalid_argument("check_theorem4: trajectory dimension mismatch");
    if (traj.grid().t0 != sys.window.t0())
        throw std::invalid_argument("check_theorem4: grid t0 does not match window t0");

    StabilityReport rep;
    rep.criterion = "lyapunov decay certificate";
    rep.threshold = memory_threshold(sys.order, sys.window);
    rep.threshold_margin = cand.lambda - rep.threshold;
    rep.inputs = {{"lambda", fmt(cand.lambda)},
                  {"alpha", fmt(sys.order.alpha())},
                  {"omega", fmt(sys.window.omega())},
                  {"h", fmt(traj.grid().h)},
                  {"nodes", std::to_string(traj.nodes())}};

    // spot-check V on the box (finiteness only; the class-K sandwich is a
    // user assertion)
    {
        const int dim = sys.field.dim;
        std::vector<double> x(static_cast<std::size_t>(dim));
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        constexpr int kAxis = 11;
        while (true) {
            for (int i = 0; i < dim; ++i) {
                const auto u = static_cast<std::size_t>(i);
                x[u] = box.lo[u] + (box.hi[u] - box.lo[u]) * idx[u] / (kAxis - 1);
            }
            for (double t : box.times)
                if (!std::isfinite(cand.V.eval(t, x)))
                    throw std::invalid_argument("check_theorem4: V is not finite at " +
                                                fmt_point(x, t));
            int axis = 0;
            while (axis < dim && ++idx[static_cast<std::size_t>(axis)] == kAxis) {
                idx[static_cast<std::size_t>(axis)] = 0;
                ++axis;
            }
            if (axis == dim) break;
        }
    }

    // V along the trajectory, then its windowed derivative
    std::vector<double> v_samples(traj.nodes());
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        v_samples[k] = cand.V.eval(traj.grid().node(k), traj.node_values(k));
        if (!std::isfinite(v_samples[k]))
            throw std::runtime_error("check_theorem4: V is not finite along the trajectory at t = " +
                                     fmt(traj.grid().node(k)));
    }
    const Trajectory v_traj = Trajectory::from_samples(traj.grid(), v_samples);
    const std::vector<double> dv = short_memory_l1_series(v_traj, sys.order, sys.window);

    const double tol = scheme_tolerance(traj.grid().h, sys.order);
    double worst_margin = std::numeric_limits<double>::infinity();
    std::size_t worst_node = 0;
    bool decay_ok = true;
    // node 0 carries the empty-operator convention (both sides of the
    // continuous inequality are taken for t > t0)
    for (std::size_t k = 1; k < traj.nodes(); ++k) {
        const double margin = (-cand.lambda * v_samples[k]) - dv[k];
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_node = k;
        }
        if (margin < -tol) decay_ok = false;
    }
    if (traj.nodes() <= 1) worst_margin = 0.0;

    rep.condition_margin = worst_margin;
    rep.worst_sample = "t = " + fmt(traj.grid().node(worst_node)) +
                       ", V = " + fmt(v_samples[worst_node]) + ", D~V = " + fmt(dv[worst_node]);
    const bool threshold_ok = cand.lambda > rep.threshold;

    if (threshold_ok && decay_ok) {
        rep.verdict = StabilityVerdict::Certified;
    } else {
        rep.verdict = StabilityVerdict::NotCertified;
        if (!threshold_ok)
            rep.reason = "lambda = " + fmt(cand.lambda) + " does not exceed the memory threshold " +
                         fmt(rep.threshold);
        else
            rep.reason = "decay inequality D~V <= -lambda*V fails beyond tolerance at " +
                         rep.worst_sample;
    }
    rep.notes = {"decay inequality checked along the solved trajectory only (necessary-condition "
                 "evidence, not a state-space proof)",
                 "discrete tolerance convention: strict inequality checked as <= C*h^(1-alpha) = " +
                     fmt(tol),
                 "class-K sandwich on V accepted as a user assertion",
                 "endpoint decay: V(t_end) = " + fmt(v_samples.back()) +
                     ", V(t0) = " + fmt(v_samples.front())};
    return rep;
}

StabilityReport check_theorem5(const VectorField& field, const StructuralSpec& spec,
                               const Order& alpha, const Window& window,
                               const SampleBox& box, std::uint64_t seed) {
    if (field.dim < 1 || !field.fn) throw std::invalid_argument("check_theorem5: field not set");
    spec.validate(field.dim);
    box.validate(field.dim);

    const int dim = field.dim;
    StabilityReport rep;
    rep.criterion = "structural decay certificate";
    rep.threshold = memory_threshold(alpha, window);
    const double rate = spec.phi * pow_int(2.0, spec.m_hat());
    rep.threshold_margin = rate - rep.threshold;
    rep.inputs = {{"phi", fmt(spec.phi)},
                  {"m_hat", std::to_string(spec.m_hat())},
                  {"rate phi*2^m_hat", fmt(rate)},
                  {"alpha", fmt(alpha.alpha())},
                  {"omega", fmt(window.omega())},
                  {"seed", std::to_string(seed)},
                  {"sample tolerance", fmt(kStructuralSampleTol)}};

    // deterministic lattice plus seeded pseudo-random points
    std::vector<std::vector<double>> points;
    {
        constexpr int kAxis = 11;
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        while (true) {
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) {
                const auto u = static_cast<std::size_t>(i);
                x[u] = box.lo[u] + (box.hi[u] - box.lo[u]) * idx[u] / (kAxis - 1);
            }
            points.push_back(std::move(x));
            int axis = 0;
            while (axis < dim && ++idx[static_cast<std::size_t>(axis)] == kAxis) {
                idx[static_cast<std::size_t>(axis)] = 0;
                ++axis;
            }
            if (axis == dim) break;
        }
        std::mt19937_64 rng(seed);
        for (int p = 0; p < 1000; ++p) {
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) {
                const auto u = static_cast<std::size_t>(i);
                x[u] = box.lo[u] + (box.hi[u] - box.lo[u]) * uniform01(rng());
            }
            points.push_back(std::move(x));
        }
    }
    rep.inputs.emplace_back("samples", std::to_string(points.size()) + " points x " +
                                           std::to_string(box.times.size()) + " times");

    double worst_margin = std::numeric_limits<double>::infinity();
    std::string worst_at = "n/a";
    bool satisfied = true;
    std::vector<double> f(static_cast<std::size_t>(dim));

    for (double t : box.times) {
        for (const auto& x : points) {
            field.fn(t, x, f);
            double lhs = 0.0, decay = 0.0;
            bool finite = all_finite(f);
            for (int i = 0; i < dim && finite; ++i) {
                const auto u = static_cast<std::size_t>(i);
                const int e = static_cast<int>(pow_int(2.0, spec.m[u]));
                const double zeta = pow_int(x[u], e - 1);
                lhs += zeta * f[u];
                decay += pow_int(x[u], e);
                finite = std::isfinite(zeta) && std::isfinite(decay) && std::isfinite(lhs);
            }
            if (!finite) {
                rep.verdict = StabilityVerdict::NotCertified;
                rep.reason = "non-finite evaluation (overflow) at " + fmt_point(x, t) +
                             "; shrink the sample box";
                rep.condition_margin = -std::numeric_limits<double>::infinity();
                rep.worst_sample = fmt_point(x, t);
                return rep;
            }
            const double rhs = -spec.phi * decay;
            const double margin = rhs - lhs;
            if (margin < worst_margin) {
                worst_margin = margin;
                worst_at = fmt_point(x, t);
            }
            if (lhs - rhs > kStructuralSampleTol) satisfied = false;
        }
    }

    rep.condition_margin = worst_margin;
    rep.worst_sample = worst_at;
    const bool threshold_ok = rate > rep.threshold;
    if (threshold_ok && satisfied) {
        rep.verdict = StabilityVerdict::Certified;
    } else {
        rep.verdict = StabilityVerdict::NotCertified;
        if (!threshold_ok)
            rep.reason = "phi*2^m_hat = " + fmt(rate) + " does not exceed the memory threshold " +
                         fmt(rep.threshold);
        else
            rep.reason = "decay inequality zeta^T f <= -phi*sum x_i^(2^m_i) fails at " + worst_at;
    }
    rep.notes = {"sampled certificate: inequality checked on the lattice and seeded points only",
                 "strict inequality checked as <= " + fmt(kStructuralSampleTol) +
                     " at the sample level"};
    return rep;
}

StabilityReport lemma5_condition(const DelayLinearSystem& sys) {
    StabilityReport rep;
    rep.criterion = "delayed linear stability condition a > b > 0";
    rep.threshold = 0.0;
    rep.threshold_margin = sys.a - sys.b;
    rep.condition_margin = sys.b;
    rep.inputs = {{"a", fmt(sys.a)}, {"b", fmt(sys.b)}, {"q", fmt(sys.q)}};
    rep.worst_sample = "a - b = " + fmt(sys.a - sys.b) + ", b = " + fmt(sys.b);
    if (sys.a > sys.b && sys.b > 0.0) {
        rep.verdict = StabilityVerdict::Certified;
    } else {
        rep.verdict = StabilityVerdict::NotCertified;
        rep.reason = (sys.b > 0.0) ? "a > b fails" : "b > 0 fails";
    }
    return rep;
}

VectorField shift_equilibrium(const VectorField& field, std::span<const double> x_star,
                              std::span<const double> time_samples) {
    if (field.dim < 1 || !field.fn)
        throw std::invalid_argument("shift_equilibrium: field not set");
    if (x_star.size() != static_cast<std::size_t>(field.dim))
        throw std::invalid_argument("shift_equilibrium: x_star dimension mismatch");
    if (time_samples.empty())
        throw std::invalid_argument("shift_equilibrium: needs at least one time sample");

    std::vector<double> f(static_cast<std::size_t>(field.dim));
    for (double t : time_samples) {
        field.fn(t, x_star, f);
        for (int i = 0; i < field.dim; ++i)
            if (!(std::abs(f[static_cast<std::size_t>(i)]) <= 1e-10))
                throw std::invalid_argument(
                    "shift_equilibrium: x_star is not an equilibrium at t = " + fmt(t) +
                    " (|f_" + std::to_string(i + 1) + "| = " +
                    fmt(std::abs(f[static_cast<std::size_t>(i)])) + " > 1e-10)");
    }

    std::vector<double> shift(x_star.begin(), x_star.end());
    const VectorField inner = field;
    VectorField out;
    out.dim = field.dim;
    out.fn = [inner, shift](double t, std::span<const double> xbar, std::span<double> res) {
        std::vector<double> x(shift.size());
        for (std::size_t i = 0; i < shift.size(); ++i) x[i] = xbar[i] + shift[i];
        inner.fn(t, x, res);
    };
    return out;
}

}  // namespace fracwin
