#include "fracwin/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "fracwin/gamma.hpp"

namespace fracwin {

namespace {

void require_scalar(const Trajectory& x, const char* op) {
    if (x.dim() != 1)
        throw std::invalid_argument(std::string(op) + ": expects a scalar trajectory");
}

void require_index(const Trajectory& x, std::size_t j, const char* op) {
    if (j >= x.nodes())
        throw std::out_of_range(std::string(op) + ": index " + std::to_string(j) +
                                " out of range (grid has " + std::to_string(x.nodes()) +
                                " nodes)");
}

// L1 sum over the node range [j_start, j]; both the full-memory and the
// windowed operators funnel through here so their values agree bit-for-bit
// when the ranges coincide.
double l1_value(const Trajectory& x, double a, std::size_t j, std::size_t j_start) {
    if (j <= j_start) return 0.0;
    const double one_minus_a = 1.0 - a;
    double sum = 0.0;
    for (std::size_t k = 0; k < j - j_start; ++k) {
        const double w = std::pow(static_cast<double>(k + 1), one_minus_a) -
                         std::pow(static_cast<double>(k), one_minus_a);
        sum += w * (x.value(j - k, 0) - x.value(j - k - 1, 0));
    }
    return std::pow(x.grid().h, -a) / gamma(2.0 - a) * sum;
}

// Same sum with a precomputed table of k^(1-a); identical summation order.
double l1_value_tabulated(const Trajectory& x, std::size_t j, std::size_t j_start,
                          const std::vector<double>& pow_1ma, double scale) {
    if (j <= j_start) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < j - j_start; ++k) {
        const double w = pow_1ma[k + 1] - pow_1ma[k];
        sum += w * (x.value(j - k, 0) - x.value(j - k - 1, 0));
    }
    return scale * sum;
}

std::size_t window_start_index(const Trajectory& x, const Window& win, std::size_t j,
                               const char* op) {
    if (x.grid().t0 != win.t0())
        throw std::invalid_argument(std::string(op) + ": grid t0 = " + std::to_string(x.grid().t0) +
                                    " does not match window t0 = " + std::to_string(win.t0()));
    const std::size_t n_w = aligned_steps(win.omega(), x.grid(), "window length omega");
    // The node exactly at t0 + omega belongs to the non-sliding branch.
    return (j <= n_w) ? 0 : j - n_w;
}

}  // namespace

double caputo_l1(const Trajectory& x, const Order& alpha, std::size_t at_index) {
    require_scalar(x, "caputo_l1");
    require_index(x, at_index, "caputo_l1");
    return l1_value(x, alpha.alpha(), at_index, 0);
}

double short_memory_l1(const Trajectory& x, const Order& alpha, const Window& window,
                       std::size_t at_index) {
    require_scalar(x, "short_memory_l1");
    require_index(x, at_index, "short_memory_l1");
    const std::size_t j_start = window_start_index(x, window, at_index, "short_memory_l1");
    return l1_value(x, alpha.alpha(), at_index, j_start);
}

double rl_integral(const Trajectory& x, const Order& alpha, std::size_t at_index) {
    require_scalar(x, "rl_integral");
    require_index(x, at_index, "rl_integral");
    const std::size_t j = at_index;
    if (j == 0) return 0.0;
    const double a = alpha.alpha();
    const double ap1 = a + 1.0;

    // Product-trapezoid weights: with c_m = m^(a+1) and p_m = m^a,
    //   w_0 = (j-1)^(a+1) - (j-1-a) j^a,
    //   w_k = (j-k+1)^(a+1) + (j-k-1)^(a+1) - 2 (j-k)^(a+1),  0 < k < j,
    //   w_j = 1,
    // which integrates the kernel exactly against piecewise-linear data.
    const double dj = static_cast<double>(j);
    double sum = (std::pow(dj - 1.0, ap1) - (dj - 1.0 - a) * std::pow(dj, a)) * x.value(0, 0);
    for (std::size_t k = 1; k < j; ++k) {
        const double m = static_cast<double>(j - k);
        const double w = std::pow(m + 1.0, ap1) + std::pow(m - 1.0, ap1) - 2.0 * std::pow(m, ap1);
        sum += w * x.value(k, 0);
    }
    sum += x.value(j, 0);
    return std::pow(x.grid().h, a) / gamma(a + 2.0) * sum;
}

double memory_threshold(const Order& alpha, const Window& window) {
    const double a = alpha.alpha();
    return 1.0 / (std::pow(window.omega(), a) * gamma(1.0 - a));
}

std::vector<double> caputo_l1_series(const Trajectory& x, const Order& alpha) {
    require_scalar(x, "caputo_l1_series");
    const double a = alpha.alpha();
    const std::size_t n = x.nodes();
    std::vector<double> pow_1ma(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        pow_1ma[k] = std::pow(static_cast<double>(k), 1.0 - a);
    const double scale = std::pow(x.grid().h, -a) / gamma(2.0 - a);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = l1_value_tabulated(x, j, 0, pow_1ma, scale);
    return out;
}

std::vector<double> short_memory_l1_series(const Trajectory& x, const Order& alpha,
                                           const Window& window) {
    require_scalar(x, "short_memory_l1_series");
    const double a = alpha.alpha();
    const std::size_t n = x.nodes();
    if (x.grid().t0 != window.t0())
        throw std::invalid_argument("short_memory_l1_series: grid t0 does not match window t0");
    const std::size_t n_w = aligned_steps(window.omega(), x.grid(), "window length omega");
    std::vector<double> pow_1ma(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        pow_1ma[k] = std::pow(static_cast<double>(k), 1.0 - a);
    const double scale = std::pow(x.grid().h, -a) / gamma(2.0 - a);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t j_start = (j <= n_w) ? 0 : j - n_w;
        out[j] = l1_value_tabulated(x, j, j_start, pow_1ma, scale);
    }
    return out;
}

}  // namespace fracwin
