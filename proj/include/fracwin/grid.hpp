#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracwin {

/// Fractional order alpha, restricted to the open interval (0, 1).
class Order {
public:
    explicit Order(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("Order: alpha must lie in (0, 1), got " +
                                        std::to_string(alpha));
    }
    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Sliding memory window of length omega anchored at t0.
///
/// start(t) is the lower limit of the windowed operator:
///   t0     for t0 <= t <= t0 + omega,
///   t - omega  for t > t0 + omega.
class Window {
public:
    Window(double omega, double t0) : omega_(omega), t0_(t0) {
        if (!(omega > 0.0))
            throw std::invalid_argument("Window: omega must be positive, got " +
                                        std::to_string(omega));
    }
    double omega() const noexcept { return omega_; }
    double t0() const noexcept { return t0_; }

    double start(double t) const noexcept {
        return (t <= t0_ + omega_) ? t0_ : t - omega_;
    }

private:
    double omega_;
    double t0_;
};

/// Uniform time grid t_k = t0 + k*h, k = 0..n_steps.
///
/// Nodes are always recomputed as t0 + k*h; no running sums, so node(k)
/// carries no accumulated drift.
struct UniformGrid {
    double t0 = 0.0;
    double h = 1.0;
    std::size_t n_steps = 0;

    UniformGrid(double t0_, double h_, std::size_t n_steps_)
        : t0(t0_), h(h_), n_steps(n_steps_) {
        if (!(h > 0.0))
            throw std::invalid_argument("UniformGrid: step h must be positive, got " +
                                        std::to_string(h));
    }

    double node(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * h; }
    double t_end() const noexcept { return node(n_steps); }
    std::size_t size() const noexcept { return n_steps + 1; }

    bool same_layout(const UniformGrid& other) const noexcept {
        return t0 == other.t0 && h == other.h && n_steps == other.n_steps;
    }
};

/// Number of grid steps spanned by `span`, which must be an exact positive
/// multiple of grid.h (relative slack 1e-9). Throws otherwise; `what` names
/// the quantity in the message.
std::size_t aligned_steps(double span, const UniformGrid& grid, const std::string& what);

/// Sampled n-dimensional state on a uniform grid, stored node-major.
class Trajectory {
public:
    Trajectory(UniformGrid grid, int dim)
        : grid_(grid), dim_(dim), values_(grid.size() * static_cast<std::size_t>(dim), 0.0) {
        if (dim < 1) throw std::invalid_argument("Trajectory: dim must be positive");
    }

    const UniformGrid& grid() const noexcept { return grid_; }
    int dim() const noexcept { return dim_; }
    std::size_t nodes() const noexcept { return grid_.size(); }

    double value(std::size_t node, int component) const {
        return values_[node * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(component)];
    }
    double& value(std::size_t node, int component) {
        return values_[node * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(component)];
    }

    std::span<const double> node_values(std::size_t node) const {
        return {values_.data() + node * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    std::span<double> node_values(std::size_t node) {
        return {values_.data() + node * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    std::span<const double> raw() const noexcept { return values_; }

    /// True when every stored entry is finite.
    bool valid() const noexcept;

    /// Copy of one component as a scalar trajectory on the same grid.
    Trajectory component(int i) const;

    /// Scalar trajectory from a vector of per-node values (size must be grid.size()).
    static Trajectory from_samples(const UniformGrid& grid, std::vector<double> samples);

    /// Sample a callable v(t) (scalar) on the grid.
    template <typename F>
    static Trajectory sample_scalar(const UniformGrid& grid, F&& f) {
        Trajectory traj(grid, 1);
        for (std::size_t k = 0; k < grid.size(); ++k)
            traj.value(k, 0) = f(grid.node(k));
        return traj;
    }

private:
    UniformGrid grid_;
    int dim_;
    std::vector<double> values_;
};

}  // namespace fracwin
