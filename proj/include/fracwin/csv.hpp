#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracwin/grid.hpp"

namespace fracwin {

/// Formats a value with 12 significant digits (period decimal separator),
/// the fixed width used by every CSV this tool writes.
std::string format_value(double v);

/// Writes "t,x1,...,xn" with one row per node, 12 significant digits,
/// newline-terminated rows.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Writes columns with the given header names; all columns share the grid's
/// time axis. Column count must match `columns`.
void write_columns_csv(const std::filesystem::path& path, const UniformGrid& grid,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns);

/// Reads a trajectory CSV back (header skipped, uniform grid reconstructed
/// from the time column). Throws std::runtime_error on malformed input or a
/// non-uniform time axis.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

}  // namespace fracwin
