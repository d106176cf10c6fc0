#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracwin {

/// Right-hand side f(x, t) of an n-dimensional system. `fn` must be
/// reentrant; solvers may hold many evaluations in flight across threads
/// (one solve per thread, never within one solve).
struct VectorField {
    int dim = 0;
    std::function<void(double t, std::span<const double> x, std::span<double> out)> fn;

    void eval(double t, std::span<const double> x, std::span<double> out) const {
        if (static_cast<int>(x.size()) != dim || static_cast<int>(out.size()) != dim)
            throw std::invalid_argument("VectorField: dimension mismatch in eval");
        fn(t, x, out);
    }

    std::vector<double> operator()(double t, std::span<const double> x) const {
        std::vector<double> out(static_cast<std::size_t>(dim));
        eval(t, x, out);
        return out;
    }
};

/// Scalar function of (t, x), e.g. a Lyapunov candidate V.
struct ScalarField {
    int dim = 0;
    std::function<double(double t, std::span<const double> x)> fn;

    double eval(double t, std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim)
            throw std::invalid_argument("ScalarField: dimension mismatch in eval");
        return fn(t, x);
    }
};

}  // namespace fracwin
