#pragma once

#include <cstddef>
#include <vector>

#include "fracwin/grid.hpp"

namespace fracwin {

/// L1 discretization of the Caputo derivative of order alpha at node
/// `at_index`:
///
///   h^(-a)/Gamma(2-a) * sum_{k=0}^{j-1} w_k (x_{j-k} - x_{j-k-1}),
///   w_k = (k+1)^(1-a) - k^(1-a).
///
/// Returns exactly 0 at the initial node. Exact (up to rounding) for
/// piecewise-linear samples.
double caputo_l1(const Trajectory& x, const Order& alpha, std::size_t at_index);

/// Riemann-Liouville integral of order alpha at node `at_index`, by the
/// product-trapezoidal rule: the kernel (t-tau)^(a-1) is integrated exactly
/// against the piecewise-linear interpolant of x, so the endpoint
/// singularity is never point-evaluated. Returns 0 at the initial node.
double rl_integral(const Trajectory& x, const Order& alpha, std::size_t at_index);

/// Windowed (short-memory) counterpart of caputo_l1: the L1 sum runs only
/// over nodes in [window.start(t_j), t_j]. Requires window.omega to be an
/// exact multiple of the grid step. For t_j <= t0 + omega the code path is
/// the same as caputo_l1, so the values agree bit-for-bit there.
double short_memory_l1(const Trajectory& x, const Order& alpha, const Window& window,
                       std::size_t at_index);

/// Stability threshold 1/(omega^alpha * Gamma(1-alpha)); a certified decay
/// rate must exceed it.
double memory_threshold(const Order& alpha, const Window& window);

/// All-node evaluations sharing one weight table. Same values as the
/// per-node functions, O(n^2) total instead of O(n^2) per sweep.
std::vector<double> caputo_l1_series(const Trajectory& x, const Order& alpha);
std::vector<double> short_memory_l1_series(const Trajectory& x, const Order& alpha,
                                           const Window& window);

}  // namespace fracwin
