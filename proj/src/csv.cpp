#include "fracwin/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracwin {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t";
    for (int i = 1; i <= traj.dim(); ++i) out << ",x" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        out << format_value(traj.grid().node(k));
        for (int i = 0; i < traj.dim(); ++i) out << ',' << format_value(traj.value(k, i));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_columns_csv(const std::filesystem::path& path, const UniformGrid& grid,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size())
        throw std::invalid_argument("write_columns_csv: name/column count mismatch");
    for (const auto& col : columns)
        if (col.size() != grid.size())
            throw std::invalid_argument("write_columns_csv: column length does not match grid");
    auto out = open_out(path);
    out << "t";
    for (const auto& name : names) out << ',' << name;
    out << "\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out << format_value(grid.node(k));
        for (const auto& col : columns) out << ',' << format_value(col[k]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());

    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error("malformed CSV cell '" + cell + "' in " + path.string());
            row.push_back(v);
        }
        if (row.size() < 2) throw std::runtime_error("CSV row too short in " + path.string());
        if (!rows.empty() && row.size() != rows.front().size() + 1)
            throw std::runtime_error("ragged CSV rows in " + path.string());
        times.push_back(row.front());
        rows.emplace_back(row.begin() + 1, row.end());
    }
    if (rows.size() < 2) throw std::runtime_error("CSV needs at least two rows: " + path.string());

    const double t0 = times.front();
    const double h = times[1] - times[0];
    if (!(h > 0)) throw std::runtime_error("non-increasing time axis in " + path.string());
    UniformGrid grid(t0, h, rows.size() - 1);
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - grid.node(k)) > 1e-9 * std::max(1.0, std::abs(times[k])))
            throw std::runtime_error("non-uniform time axis in " + path.string());

    Trajectory traj(grid, static_cast<int>(rows.front().size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t i = 0; i < rows[k].size(); ++i)
            traj.value(k, static_cast<int>(i)) = rows[k][i];
    return traj;
}

}  // namespace fracwin
