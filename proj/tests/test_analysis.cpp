#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracwin/analysis.hpp"
#include "fracwin/operators.hpp"
#include "fracwin/solver.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace fracwin;

namespace {

VectorField scalar_decay() {
    return VectorField{1, [](double, std::span<const double> x, std::span<double> out) {
                           out[0] = -x[0];
                       }};
}

VectorField rotation_field() {
    // dx1 = x2, dx2 = -x1 - x2
    return VectorField{2, [](double, std::span<const double> x, std::span<double> out) {
                           out[0] = x[1];
                           out[1] = -x[0] - x[1];
                       }};
}

VectorField cubic_cross_field() {
    return VectorField{2, [](double, std::span<const double> x, std::span<double> out) {
                           out[0] = -x[0] + x[1] * x[1] * x[1];
                           out[1] = -x[0] - x[1];
                       }};
}

ScalarField quad_form_V() {
    // 3 x1^2 + 2 x1 x2 + 2 x2^2
    return ScalarField{2, [](double, std::span<const double> x) {
                           return 3.0 * x[0] * x[0] + 2.0 * x[0] * x[1] + 2.0 * x[1] * x[1];
                       }};
}

}  // namespace

TEST_CASE("comparison: the scalar windowed run stays under the delayed bound") {
    ShortMemorySystem sys{scalar_decay(), Order(0.95), Window(5.0, 0.0), {3.0}};
    const SolveConfig cfg{0.0, 0.01, 50.0, 1, 1e8};
    const auto run = solve_short_memory(sys, cfg);
    REQUIRE(run.ok());
    const auto rep = compare_theorem3(run.trajectory, sys.order, sys.window, 1.0, cfg);
    CHECK(rep.verdict == ComparisonVerdict::Holds);
    CHECK(rep.max_violation <= rep.tolerance);
    CHECK(rep.max_violation <= 0.0);  // discrete ordering holds with no slack needed
}

TEST_CASE("comparison: zero initial value gives two zero trajectories") {
    ShortMemorySystem sys{scalar_decay(), Order(0.95), Window(5.0, 0.0), {0.0}};
    const SolveConfig cfg{0.0, 0.01, 10.0, 1, 1e8};
    const auto run = solve_short_memory(sys, cfg);
    REQUIRE(run.ok());
    const auto rep = compare_theorem3(run.trajectory, sys.order, sys.window, 1.0, cfg);
    CHECK(rep.verdict == ComparisonVerdict::Holds);
    CHECK(rep.max_violation == 0.0);
}

TEST_CASE("comparison: negative data renders the theorem inapplicable") {
    ShortMemorySystem sys{scalar_decay(), Order(0.95), Window(5.0, 0.0), {-3.0}};
    const SolveConfig cfg{0.0, 0.01, 10.0, 1, 1e8};
    const auto run = solve_short_memory(sys, cfg);
    REQUIRE(run.ok());
    const auto rep = compare_theorem3(run.trajectory, sys.order, sys.window, 1.0, cfg);
    CHECK(rep.verdict == ComparisonVerdict::Inapplicable);
    CHECK(!rep.reason.empty());
}

TEST_CASE("comparison: grid and window must agree") {
    ShortMemorySystem sys{scalar_decay(), Order(0.95), Window(5.0, 0.0), {3.0}};
    const SolveConfig cfg{0.0, 0.01, 10.0, 1, 1e8};
    const auto run = solve_short_memory(sys, cfg);
    REQUIRE(run.ok());
    CHECK_THROWS_AS(
        compare_theorem3(run.trajectory, sys.order, Window(5.0, 1.0), 1.0, cfg),
        std::invalid_argument);
    CHECK_THROWS_AS(
        compare_theorem3(run.trajectory, sys.order, Window(0.0153, 0.0), 1.0, cfg),
        std::invalid_argument);
}

TEST_CASE("lyapunov certificate: certified for the rotation system with lambda = 1/2") {
    ShortMemorySystem sys{rotation_field(), Order(0.95), Window(5.0, 0.0), {7.0, -3.0}};
    const SolveConfig cfg{0.0, 0.01, 50.0, 1, 1e8};
    const auto run = solve_short_memory(sys, cfg);
    REQUIRE(run.ok());
    const LyapunovCandidate cand{quad_form_V(), 0.5};
    const auto rep = check_theorem4(sys, cand, run.trajectory, SampleBox::centered(2, 8.0));
    CHECK(rep.verdict == StabilityVerdict::Certified);
    CHECK(rep.threshold == doctest::Approx(oracle::kThreshold_a095_w5).epsilon(1e-12));
    CHECK(rep.threshold_margin == doctest::Approx(0.5 - oracle::kThreshold_a095_w5).epsilon(1e-12));
}

TEST_CASE("lyapunov certificate: lambda below the threshold is rejected arithmetically") {
    ShortMemorySystem sys{rotation_field(), Order(0.95), Window(5.0, 0.0), {7.0, -3.0}};
    const auto run = solve_short_memory(sys, SolveConfig{0.0, 0.01, 10.0, 1, 1e8});
    REQUIRE(run.ok());
    const LyapunovCandidate cand{quad_form_V(), 0.005};
    const auto rep = check_theorem4(sys, cand, run.trajectory, SampleBox::centered(2, 8.0));
    CHECK(rep.verdict == StabilityVerdict::NotCertified);
    CHECK(rep.threshold_margin < 0.0);
    CHECK(rep.reason.find("threshold") != std::string::npos);
}

TEST_CASE("lyapunov certificate: vacuous on the zero trajectory with V = 0") {
    const VectorField zero{2, [](double, std::span<const double>, std::span<double> out) {
                               out[0] = 0.0;
                               out[1] = 0.0;
                           }};
    ShortMemorySystem sys{zero, Order(0.95), Window(5.0, 0.0), {0.0, 0.0}};
    const auto run = solve_short_memory(sys, SolveConfig{0.0, 0.01, 10.0, 1, 1e8});
    REQUIRE(run.ok());
    const LyapunovCandidate cand{quad_form_V(), 0.5};
    const auto rep = check_theorem4(sys, cand, run.trajectory, SampleBox::centered(2, 1.0));
    CHECK(rep.verdict == StabilityVerdict::Certified);
    CHECK(rep.condition_margin == 0.0);
}

TEST_CASE("structural certificate: exact equality case certifies") {
    const StructuralSpec spec{{1, 2}, 1.0};
    const auto rep = check_theorem5(cubic_cross_field(), spec, Order(0.95), Window(5.0, 0.0),
                                    SampleBox::centered(2, 3.0));
    CHECK(rep.verdict == StabilityVerdict::Certified);
    // zeta^T f == -(x1^2 + x2^4): the sampled margin is rounding noise only
    CHECK(std::abs(rep.condition_margin) <= 1e-12);
    CHECK(rep.threshold_margin ==
          doctest::Approx(2.0 - oracle::kThreshold_a095_w5).epsilon(1e-12));
}

TEST_CASE("structural certificate: sign-flipped field fails the sampled inequality") {
    const VectorField unstable{1, [](double, std::span<const double> x, std::span<double> out) {
                                   out[0] = x[0];
                               }};
    const StructuralSpec spec{{1}, 1.0};
    const auto rep = check_theorem5(unstable, spec, Order(0.95), Window(5.0, 0.0),
                                    SampleBox::centered(1, 2.0));
    CHECK(rep.verdict == StabilityVerdict::NotCertified);
    CHECK(rep.condition_margin < -1.0);
}

TEST_CASE("structural certificate: phi beyond the actual decay fails off the origin") {
    const StructuralSpec spec{{1, 2}, 1.5};
    const auto rep = check_theorem5(cubic_cross_field(), spec, Order(0.95), Window(5.0, 0.0),
                                    SampleBox::centered(2, 3.0));
    CHECK(rep.verdict == StabilityVerdict::NotCertified);
    CHECK(rep.condition_margin < 0.0);
}

TEST_CASE("structural certificate: overflow on a huge box is reported, not saturated") {
    const StructuralSpec spec{{8, 8}, 1.0};
    const auto rep = check_theorem5(cubic_cross_field(), spec, Order(0.95), Window(5.0, 0.0),
                                    SampleBox::centered(2, 1e30));
    CHECK(rep.verdict == StabilityVerdict::NotCertified);
    CHECK(rep.reason.find("overflow") != std::string::npos);
}

TEST_CASE("structural certificate: fixed seed reproduces the identical report") {
    const StructuralSpec spec{{1, 2}, 1.0};
    const auto a = check_theorem5(cubic_cross_field(), spec, Order(0.95), Window(5.0, 0.0),
                                  SampleBox::centered(2, 3.0), 42);
    const auto b = check_theorem5(cubic_cross_field(), spec, Order(0.95), Window(5.0, 0.0),
                                  SampleBox::centered(2, 3.0), 42);
    CHECK(a.condition_margin == b.condition_margin);
    CHECK(a.worst_sample == b.worst_sample);
}

TEST_CASE("threshold check flips from rejected to certified as the window grows") {
    const LyapunovCandidate cand{quad_form_V(), 0.02};
    ShortMemorySystem sys{rotation_field(), Order(0.95), Window(1.0, 0.0), {1.0, 0.0}};
    // omega = 1: threshold 0.0514 > lambda; omega = 25: threshold 0.0024 < lambda
    CHECK(memory_threshold(Order(0.95), Window(1.0, 0.0)) > cand.lambda);
    CHECK(memory_threshold(Order(0.95), Window(25.0, 0.0)) < cand.lambda);

    for (double omega : {1.0, 25.0}) {
        sys.window = Window(omega, 0.0);
        const auto run = solve_short_memory(sys, SolveConfig{0.0, 0.01, 30.0, 1, 1e8});
        REQUIRE(run.ok());
        const auto rep = check_theorem4(sys, cand, run.trajectory, SampleBox::centered(2, 2.0));
        if (omega == 1.0)
            CHECK(rep.verdict == StabilityVerdict::NotCertified);
        else
            CHECK(rep.threshold_margin > 0.0);
    }
}

TEST_CASE("delayed linear condition: margins and verdicts") {
    const auto ok = lemma5_condition(
        DelayLinearSystem::constant_history(1.0, oracle::kThreshold_a095_w5, 5.0, 3.0));
    CHECK(ok.verdict == StabilityVerdict::Certified);
    CHECK(ok.threshold_margin == doctest::Approx(1.0 - oracle::kThreshold_a095_w5));

    const auto tie = lemma5_condition(DelayLinearSystem::constant_history(1.0, 1.0, 5.0, 3.0));
    CHECK(tie.verdict == StabilityVerdict::NotCertified);
    CHECK(tie.reason == "a > b fails");

    const auto neg = lemma5_condition(DelayLinearSystem::constant_history(0.5, -1.0, 5.0, 3.0));
    CHECK(neg.verdict == StabilityVerdict::NotCertified);
    CHECK(neg.reason == "b > 0 fails");
}

TEST_CASE("equilibrium shift: identity at the origin, affine case, composition") {
    const double times[] = {0.0, 1.0, 10.0};

    const auto same = shift_equilibrium(cubic_cross_field(), std::vector<double>{0.0, 0.0}, times);
    std::vector<double> out1(2), out2(2);
    const std::vector<double> probe{0.7, -1.3};
    cubic_cross_field().fn(2.0, probe, out1);
    same.fn(2.0, probe, out2);
    CHECK(out1[0] == out2[0]);
    CHECK(out1[1] == out2[1]);

    // f(x) = -(x - 2): equilibrium at 2, shifted field is -xbar
    const VectorField affine{1, [](double, std::span<const double> x, std::span<double> out) {
                                 out[0] = -(x[0] - 2.0);
                             }};
    const auto shifted = shift_equilibrium(affine, std::vector<double>{2.0}, times);
    std::vector<double> o(1);
    shifted.fn(0.0, std::vector<double>{0.0}, o);
    CHECK(o[0] == doctest::Approx(0.0));
    shifted.fn(0.0, std::vector<double>{1.0}, o);
    CHECK(o[0] == doctest::Approx(-1.0));

    // shifting by x* then by -x* recovers the original samples
    const auto back = shift_equilibrium(shifted, std::vector<double>{-2.0}, times);
    std::vector<double> a(1), b(1);
    for (double xv : {-1.5, 0.0, 0.25, 3.0}) {
        affine.fn(1.0, std::vector<double>{xv}, a);
        back.fn(1.0, std::vector<double>{xv}, b);
        CHECK(std::abs(a[0] - b[0]) <= 1e-12);
    }
}

TEST_CASE("equilibrium shift rejects a non-equilibrium point") {
    const double times[] = {0.0, 1.0};
    CHECK_THROWS_AS(
        shift_equilibrium(cubic_cross_field(), std::vector<double>{1.0, 1.0}, times),
        std::invalid_argument);
}

TEST_CASE("sample box validation") {
    CHECK_THROWS_AS(SampleBox::centered(2, 1.0).validate(3), std::invalid_argument);
    SampleBox bad = SampleBox::centered(2, 1.0);
    bad.lo[0] = 0.5;  // no longer contains the origin
    CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
    SampleBox no_times = SampleBox::centered(2, 1.0);
    no_times.times.clear();
    CHECK_THROWS_AS(no_times.validate(2), std::invalid_argument);
    CHECK_NOTHROW(SampleBox::centered(2, 1.0).validate(2));
}
