#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracwin/field.hpp"
#include "fracwin/grid.hpp"
#include "fracwin/solver.hpp"

namespace fracwin {

/// Axis-aligned sample region plus the time samples used for
/// non-autonomous right-hand sides.
struct SampleBox {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> times{0.0};

    static SampleBox centered(int dim, double half_width, std::vector<double> times = {0.0});
    void validate(int dim) const;
};

/// Lyapunov candidate V(t, x) with its asserted decay rate lambda.
/// The class-K sandwich on V is taken as a user assertion and is not
/// verified here.
struct LyapunovCandidate {
    ScalarField V;
    double lambda = 0.0;

    void validate() const;
};

/// Component exponents 2^{m_i} and the coefficient phi of the structural
/// decay condition zeta^T f <= -phi * sum_i x_i^(2^{m_i}).
struct StructuralSpec {
    std::vector<int> m;
    double phi = 0.0;

    int m_hat() const;            // min_i m_i
    void validate(int dim) const;
};

enum class StabilityVerdict { Certified, NotCertified };
enum class ComparisonVerdict { Holds, Violated, Inapplicable };

const char* to_string(StabilityVerdict v) noexcept;
const char* to_string(ComparisonVerdict v) noexcept;

/// Structured verdict of one stability criterion. `margin` is the worst
/// slack observed; certification requires every checked condition to hold
/// within the stated discrete tolerance.
struct StabilityReport {
    std::string criterion;
    StabilityVerdict verdict = StabilityVerdict::NotCertified;
    std::string reason;                       // set when not certified
    double threshold = 0.0;                   // 1/(w^a Gamma(1-a)) where applicable
    double threshold_margin = 0.0;            // rate minus threshold
    double condition_margin = 0.0;            // worst pointwise slack
    std::string worst_sample;                 // where the worst slack occurred
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::string> notes;
};

/// Grid-wise comparison x <= y with tolerance; `inapplicable` when a
/// hypothesis (nonnegativity) fails rather than the conclusion.
struct ComparisonReport {
    ComparisonVerdict verdict = ComparisonVerdict::Inapplicable;
    std::string reason;
    double tolerance = 0.0;
    double max_violation = 0.0;               // max over grid of lhs - rhs
    std::size_t first_violation_index = 0;    // meaningful when Violated
    Trajectory lhs;                           // the windowed run
    Trajectory rhs;                           // the bounding delayed run
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::string> notes;
};

/// Comparison harness: bounds a scalar windowed run x (satisfying
/// D~^a x <= -a_coef * x) by the delayed linear system
///   D^a y = -a_coef * y + b * y(t - w),  b = memory_threshold(alpha, window),
/// with constant history equal to the run's initial value, solved on the
/// run's own grid. Verdict "holds" iff max(x_j - y_j) <= tolerance;
/// "inapplicable" when either trajectory drops below -tolerance.
ComparisonReport compare_theorem3(const Trajectory& short_run, const Order& alpha,
                                  const Window& window, double a_coef,
                                  const SolveConfig& cfg);

/// Lyapunov certificate checker. Two conditions:
///  (i)  lambda > memory_threshold(alpha, omega), exact comparison;
///  (ii) along the supplied trajectory, the windowed L1 derivative of the
///       sampled V sequence satisfies D~V_j <= -lambda V_j + tol at every
///       node past the initial one (node 0 carries the empty-operator
///       convention).
/// The box is used only to spot-check that V evaluates finite.
StabilityReport check_theorem4(const ShortMemorySystem& sys, const LyapunovCandidate& cand,
                               const Trajectory& traj, const SampleBox& box);

inline constexpr std::uint64_t kStructuralDefaultSeed = 0x5eeded5eedULL;

/// Absolute slack allowed in the sampled structural inequality; strict
/// inequalities are checked as "<=" within this at the discrete level.
inline constexpr double kStructuralSampleTol = 1e-12;

/// Structural checker: condition (i) phi * 2^(min m) > memory_threshold,
/// condition (ii) zeta(x)^T f(x,t) <= -phi * sum x_i^(2^{m_i}) with
/// zeta_i = x_i^(2^{m_i}-1), sampled on an 11-per-axis lattice plus 1000
/// seeded pseudo-random points in the box, at each box time. The seed is
/// recorded in the report. Non-finite powers or field values (overflow on
/// large boxes) fail the check explicitly.
StabilityReport check_theorem5(const VectorField& field, const StructuralSpec& spec,
                               const Order& alpha, const Window& window,
                               const SampleBox& box,
                               std::uint64_t seed = kStructuralDefaultSeed);

/// Reports whether a > b > 0 for the delayed linear system, with margins
/// a - b and b.
StabilityReport lemma5_condition(const DelayLinearSystem& sys);

/// Shifts an equilibrium x* to the origin: returns g(xbar, t) =
/// f(xbar + x*, t). Verifies |f(x*, t)| <= 1e-10 componentwise at each
/// supplied time sample and throws std::invalid_argument otherwise.
VectorField shift_equilibrium(const VectorField& field, std::span<const double> x_star,
                              std::span<const double> time_samples);

}  // namespace fracwin
