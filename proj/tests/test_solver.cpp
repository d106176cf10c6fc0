#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "fracwin/operators.hpp"
#include "fracwin/solver.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace fracwin;

namespace {

VectorField decay_field(double rate = 1.0) {
    return VectorField{1, [rate](double, std::span<const double> x, std::span<double> out) {
                           out[0] = -rate * x[0];
                       }};
}

VectorField cubic_cross_field() {
    return VectorField{2, [](double, std::span<const double> x, std::span<double> out) {
                           out[0] = -x[0] + x[1] * x[1] * x[1];
                           out[1] = -x[0] - x[1];
                       }};
}

double node_diff(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.nodes() == b.nodes());
    REQUIRE(a.dim() == b.dim());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.nodes(); ++k)
        for (int i = 0; i < a.dim(); ++i)
            worst = std::max(worst, std::abs(a.value(k, i) - b.value(k, i)));
    return worst;
}

}  // namespace

TEST_CASE("zero field keeps the state exactly constant") {
    const VectorField f{2, [](double, std::span<const double>, std::span<double> out) {
                            out[0] = 0.0;
                            out[1] = 0.0;
                        }};
    const std::vector<double> x0{3.5, -1.25};
    const auto res = solve_caputo(f, Order(0.6), x0, SolveConfig{0.0, 0.05, 5.0, 1, 1e8});
    REQUIRE(res.ok());
    for (std::size_t k = 0; k < res.trajectory.nodes(); ++k) {
        CHECK(res.trajectory.value(k, 0) == 3.5);
        CHECK(res.trajectory.value(k, 1) == -1.25);
    }
}

TEST_CASE("linear relaxation tracks the frozen reference values") {
    const std::vector<double> x0{3.0};
    const auto res =
        solve_caputo(decay_field(), Order(0.95), x0, SolveConfig{0.0, 1e-3, 10.0, 1, 1e8});
    REQUIRE(res.ok());
    const auto& tr = res.trajectory;
    const auto at = [&](double t) { return tr.value(static_cast<std::size_t>(std::llround(t / 1e-3)), 0); };
    // reference solve errors measured ~2.5e-7 at this step; assert with 8x headroom
    CHECK(std::abs(at(1.0) - oracle::kRelax3E_t1) <= 2e-6);
    CHECK(std::abs(at(5.0) - oracle::kRelax3E_t5) <= 2e-6);
    CHECK(std::abs(at(10.0) - oracle::kRelax3E_t10) <= 2e-6);
    // monotone decay toward zero, no spurious oscillation
    for (std::size_t k = 1; k < tr.nodes(); ++k) {
        CHECK(tr.value(k, 0) < tr.value(k - 1, 0));
        CHECK(tr.value(k, 0) > 0.0);
    }
}

TEST_CASE("self-convergence of the plain solver under step halving") {
    const std::vector<double> x0{3.0};
    const Order ord(0.95);
    std::vector<Trajectory> runs;
    for (double h : {0.02, 0.01, 0.005}) {
        auto res = solve_caputo(decay_field(), ord, x0, SolveConfig{0.0, h, 4.0, 1, 1e8});
        REQUIRE(res.ok());
        runs.push_back(std::move(res.trajectory));
    }
    // compare on the shared nodes (every 1, 2, 4 steps respectively)
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k < runs[0].nodes(); ++k) {
        e1 = std::max(e1, std::abs(runs[0].value(k, 0) - runs[1].value(2 * k, 0)));
        e2 = std::max(e2, std::abs(runs[1].value(2 * k, 0) - runs[2].value(4 * k, 0)));
    }
    CHECK(testsupport::order_between(e1, e2) >= 1.0);
}

TEST_CASE("delay solver with b = 0 collapses to the plain solver") {
    const auto sys = DelayLinearSystem::constant_history(1.0, 0.0, 5.0, 3.0);
    const SolveConfig cfg{0.0, 0.01, 30.0, 1, 1e8};
    const auto delayed = solve_caputo_delay(sys, Order(0.95), cfg);
    const std::vector<double> x0{3.0};
    const auto plain = solve_caputo(decay_field(), Order(0.95), x0, cfg);
    REQUIRE(delayed.ok());
    REQUIRE(plain.ok());
    CHECK(node_diff(delayed.trajectory, plain.trajectory) <= 1e-12);
}

TEST_CASE("delayed linear system stays positive and decays (a > b > 0)") {
    const auto sys =
        DelayLinearSystem::constant_history(1.0, oracle::kThreshold_a095_w5, 5.0, 3.0);
    const auto res = solve_caputo_delay(sys, Order(0.95), SolveConfig{0.0, 0.01, 50.0, 1, 1e8});
    REQUIRE(res.ok());
    const auto& tr = res.trajectory;
    for (std::size_t k = 0; k < tr.nodes(); ++k) CHECK(tr.value(k, 0) >= 0.0);
    CHECK(tr.value(tr.nodes() - 1, 0) < 0.1 * tr.value(0, 0));
}

TEST_CASE("delay misalignment is rejected") {
    const auto sys = DelayLinearSystem::constant_history(1.0, 0.5, 0.35, 1.0);
    CHECK_THROWS_AS(solve_caputo_delay(sys, Order(0.5), SolveConfig{0.0, 0.1, 5.0, 1, 1e8}),
                    std::invalid_argument);
}

TEST_CASE("windowed solver equals the plain solver when the window covers the horizon") {
    ShortMemorySystem sys{cubic_cross_field(), Order(0.95), Window(40.0, 0.0), {3.0, -5.0}};
    const SolveConfig cfg{0.0, 0.01, 20.0, 1, 1e8};
    const auto windowed = solve_short_memory(sys, cfg);
    const auto plain = solve_caputo(sys.field, sys.order, sys.x0, cfg);
    REQUIRE(windowed.ok());
    REQUIRE(plain.ok());
    // same arithmetic path, so bit-identical, not merely close
    CHECK(std::memcmp(windowed.trajectory.raw().data(), plain.trajectory.raw().data(),
                      windowed.trajectory.raw().size() * sizeof(double)) == 0);
}

TEST_CASE("windowed scalar run decays and stays below the delayed bound") {
    ShortMemorySystem sys{decay_field(), Order(0.95), Window(5.0, 0.0), {3.0}};
    const SolveConfig cfg{0.0, 0.01, 50.0, 1, 1e8};
    const auto run = solve_short_memory(sys, cfg);
    REQUIRE(run.ok());
    const auto& y = run.trajectory;
    CHECK(y.value(y.nodes() - 1, 0) < 0.01 * y.value(0, 0));
    for (std::size_t k = 1; k < y.nodes(); ++k) CHECK(y.value(k, 0) < y.value(k - 1, 0));

    const auto bound = solve_caputo_delay(
        DelayLinearSystem::constant_history(1.0, oracle::kThreshold_a095_w5, 5.0, 3.0),
        Order(0.95), cfg);
    REQUIRE(bound.ok());
    for (std::size_t k = 0; k < y.nodes(); ++k)
        CHECK(y.value(k, 0) <= bound.trajectory.value(k, 0) + 1e-9);
}

TEST_CASE("two-component windowed system decays in norm") {
    ShortMemorySystem sys{cubic_cross_field(), Order(0.95), Window(5.0, 0.0), {3.0, -5.0}};
    const auto res = solve_short_memory(sys, SolveConfig{0.0, 0.01, 50.0, 1, 1e8});
    REQUIRE(res.ok());
    const auto& tr = res.trajectory;
    const double n0 = std::hypot(tr.value(0, 0), tr.value(0, 1));
    const double n_end = std::hypot(tr.value(tr.nodes() - 1, 0), tr.value(tr.nodes() - 1, 1));
    CHECK(n_end < 0.01 * n0);
}

TEST_CASE("window misalignment and t0 mismatch are rejected") {
    ShortMemorySystem sys{decay_field(), Order(0.95), Window(5.0, 0.0), {3.0}};
    CHECK_THROWS_AS(solve_short_memory(sys, SolveConfig{0.0, 0.03, 6.0, 1, 1e8}),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_short_memory(sys, SolveConfig{1.0, 0.01, 6.0, 1, 1e8}),
                    std::invalid_argument);
}

TEST_CASE("blow-up aborts with the first bad index flagged") {
    const VectorField quad{1, [](double, std::span<const double> x, std::span<double> out) {
                               out[0] = x[0] * x[0];
                           }};
    const std::vector<double> x0{2.0};
    const auto res = solve_caputo(quad, Order(0.9), x0, SolveConfig{0.0, 0.01, 20.0, 1, 100.0});
    CHECK(res.status == SolveStatus::BlowUp);
    CHECK(res.first_bad_index > 0);
    CHECK(res.trajectory.grid().n_steps == res.first_bad_index - 1);
    CHECK(res.trajectory.valid());
    for (std::size_t k = 0; k < res.trajectory.nodes(); ++k)
        CHECK(std::abs(res.trajectory.value(k, 0)) <= 100.0);
}

TEST_CASE("non-finite right-hand side aborts with a flag") {
    const VectorField bad{1, [](double t, std::span<const double> x, std::span<double> out) {
                              out[0] = (t > 1.0) ? std::nan("") : -x[0];
                          }};
    const std::vector<double> x0{1.0};
    const auto res = solve_caputo(bad, Order(0.5), x0, SolveConfig{0.0, 0.1, 5.0, 1, 1e8});
    CHECK(res.status == SolveStatus::NonFinite);
    CHECK(res.trajectory.valid());
    CHECK(res.trajectory.grid().t_end() < 5.0);
}

TEST_CASE("residual of a constant solution of the zero field vanishes") {
    ShortMemorySystem sys{VectorField{1,
                                      [](double, std::span<const double>, std::span<double> out) {
                                          out[0] = 0.0;
                                      }},
                          Order(0.5), Window(1.0, 0.0), {2.0}};
    const auto res = solve_short_memory(sys, SolveConfig{0.0, 0.05, 4.0, 1, 1e8});
    REQUIRE(res.ok());
    const auto r = residual_check(sys, res.trajectory);
    CHECK(max_abs_residual(r, 0.0) == 0.0);
}

TEST_CASE("residual shrinks under refinement away from the initial layer") {
    std::vector<double> worst;
    for (double h : {0.02, 0.01, 0.005}) {
        ShortMemorySystem sys{decay_field(), Order(0.95), Window(5.0, 0.0), {3.0}};
        const auto res = solve_short_memory(sys, SolveConfig{0.0, h, 20.0, 1, 1e8});
        REQUIRE(res.ok());
        worst.push_back(max_abs_residual(residual_check(sys, res.trajectory), 1.0));
    }
    CHECK(testsupport::order_between(worst[0], worst[1]) >= 1.0 - 5e-3);
    CHECK(testsupport::order_between(worst[1], worst[2]) >= 1.0 - 5e-3);
}

TEST_CASE("a corrupted node shows up as a residual spike") {
    ShortMemorySystem sys{decay_field(), Order(0.95), Window(5.0, 0.0), {3.0}};
    const auto res = solve_short_memory(sys, SolveConfig{0.0, 0.01, 20.0, 1, 1e8});
    REQUIRE(res.ok());
    Trajectory good = res.trajectory;
    const double base = max_abs_residual(residual_check(sys, good), 10.0);

    Trajectory corrupted = good;
    const std::size_t hit = 1500;  // t = 15
    corrupted.value(hit, 0) += 0.1;
    const auto r = residual_check(sys, corrupted);
    double spike = 0.0;
    for (std::size_t k = hit; k < std::min(hit + 3, r.nodes()); ++k)
        spike = std::max(spike, std::abs(r.value(k, 0)));
    CHECK(spike > 100.0 * std::max(base, 1e-12));
    CHECK(spike > 1.0);  // 0.1 jump against h^(-alpha)/Gamma(2-alpha) weighting
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    ShortMemorySystem sys{cubic_cross_field(), Order(0.95), Window(5.0, 0.0), {3.0, -5.0}};
    const SolveConfig cfg{0.0, 0.01, 30.0, 1, 1e8};
    const auto r1 = solve_short_memory(sys, cfg);
    const auto r2 = solve_short_memory(sys, cfg);
    REQUIRE(r1.ok());
    REQUIRE(r2.ok());
    CHECK(std::memcmp(r1.trajectory.raw().data(), r2.trajectory.raw().data(),
                      r1.trajectory.raw().size() * sizeof(double)) == 0);
}

TEST_CASE("corrector sweeps stay close to the single-sweep result") {
    ShortMemorySystem sys{decay_field(), Order(0.95), Window(5.0, 0.0), {3.0}};
    SolveConfig cfg{0.0, 0.01, 10.0, 1, 1e8};
    const auto once = solve_short_memory(sys, cfg);
    cfg.corrector_sweeps = 3;
    const auto thrice = solve_short_memory(sys, cfg);
    REQUIRE(once.ok());
    REQUIRE(thrice.ok());
    CHECK(node_diff(once.trajectory, thrice.trajectory) <= 1e-4);
    CHECK(node_diff(once.trajectory, thrice.trajectory) > 0.0);
}
