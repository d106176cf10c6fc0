#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace fracwin {

/// Integer power by repeated multiplication, left-to-right, so that every
/// caller producing x^n gets the identical rounding sequence. Falls back to
/// std::pow beyond |n| = 16.
inline double pow_int(double x, int n) {
    if (n < 0) return 1.0 / pow_int(x, -n);
    if (n > 16) return std::pow(x, static_cast<double>(n));
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

/// Uniform double in [0, 1) from a raw 64-bit word. Used instead of
/// std::uniform_real_distribution so sampled points are identical across
/// standard library implementations.
inline double uniform01(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

inline double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace fracwin
