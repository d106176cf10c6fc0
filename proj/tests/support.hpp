#pragma once

// shared helpers for the test suites

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "fracwin/grid.hpp"

namespace testsupport {

// empirical convergence order from two consecutive error ratios under
// h-halving
inline double order_between(double coarse, double fine) { return std::log2(coarse / fine); }

// Deterministic uniform in [lo, hi) from raw mt19937_64 words; avoids
// std::uniform_real_distribution so sequences are identical across standard
// libraries.
template <typename Rng>
double uniform(Rng& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

// Smooth random test function: low-order polynomial plus two bounded
// oscillations; coefficients stay in [-1, 1], frequencies in [0.3, 2.5].
struct SmoothFunction {
    double c0, c1, c2, s1, w1, p1, s2, w2;

    double operator()(double t) const {
        return c0 + c1 * t + c2 * t * t + s1 * std::sin(w1 * t + p1) + s2 * std::cos(w2 * t);
    }

    template <typename Rng>
    static SmoothFunction random(Rng& rng) {
        SmoothFunction f{};
        f.c0 = uniform(rng, -1, 1);
        f.c1 = uniform(rng, -1, 1);
        f.c2 = uniform(rng, -0.5, 0.5);
        f.s1 = uniform(rng, -1, 1);
        f.w1 = uniform(rng, 0.3, 2.5);
        f.p1 = uniform(rng, 0, 6.283185307179586);
        f.s2 = uniform(rng, -1, 1);
        f.w2 = uniform(rng, 0.3, 2.5);
        return f;
    }
};

inline fracwin::Trajectory sample(const fracwin::UniformGrid& grid,
                                  const std::function<double(double)>& f) {
    return fracwin::Trajectory::sample_scalar(grid, f);
}

}  // namespace testsupport
