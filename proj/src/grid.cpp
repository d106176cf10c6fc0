#include "fracwin/grid.hpp"

#include <cmath>
#include <utility>

#include "fracwin/numeric.hpp"

namespace fracwin {

std::size_t aligned_steps(double span, const UniformGrid& grid, const std::string& what) {
    if (!(span > 0.0))
        throw std::invalid_argument(what + " must be positive, got " + std::to_string(span));
    const double ratio = span / grid.h;
    const auto n = static_cast<long long>(std::llround(ratio));
    if (n < 1 || std::abs(static_cast<double>(n) * grid.h - span) > 1e-9 * span)
        throw std::invalid_argument(
            what + " = " + std::to_string(span) + " is not an integer multiple of the grid step h = " +
            std::to_string(grid.h) + "; choose h so that " + what + "/h is a whole number");
    return static_cast<std::size_t>(n);
}

bool Trajectory::valid() const noexcept { return all_finite(values_); }

Trajectory Trajectory::component(int i) const {
    if (i < 0 || i >= dim_) throw std::out_of_range("Trajectory::component: index out of range");
    Trajectory out(grid_, 1);
    for (std::size_t k = 0; k < nodes(); ++k) out.value(k, 0) = value(k, i);
    return out;
}

Trajectory Trajectory::from_samples(const UniformGrid& grid, std::vector<double> samples) {
    if (samples.size() != grid.size())
        throw std::invalid_argument("Trajectory::from_samples: expected " +
                                    std::to_string(grid.size()) + " samples, got " +
                                    std::to_string(samples.size()));
    Trajectory out(grid, 1);
    for (std::size_t k = 0; k < samples.size(); ++k) out.value(k, 0) = samples[k];
    return out;
}

}  // namespace fracwin
