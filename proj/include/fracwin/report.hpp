#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fracwin {

/// Plain-text report with a stable section order: inputs, thresholds,
/// margins, verdict (then optional notes). Sections render in that order
/// regardless of insertion order.
class Report {
public:
    explicit Report(std::string title) : title_(std::move(title)) {}

    void input(const std::string& key, const std::string& value);
    void threshold(const std::string& key, const std::string& value);
    void margin(const std::string& key, const std::string& value);
    void verdict(const std::string& line);
    void note(const std::string& line);

    std::string render() const;
    void write(const std::filesystem::path& path) const;

private:
    std::string title_;
    std::vector<std::pair<std::string, std::string>> inputs_, thresholds_, margins_;
    std::vector<std::string> verdicts_, notes_;
};

}  // namespace fracwin
