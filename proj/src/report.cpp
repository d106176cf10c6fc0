#include "fracwin/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracwin {

void Report::input(const std::string& key, const std::string& value) {
    inputs_.emplace_back(key, value);
}
void Report::threshold(const std::string& key, const std::string& value) {
    thresholds_.emplace_back(key, value);
}
void Report::margin(const std::string& key, const std::string& value) {
    margins_.emplace_back(key, value);
}
void Report::verdict(const std::string& line) { verdicts_.push_back(line); }
void Report::note(const std::string& line) { notes_.push_back(line); }

std::string Report::render() const {
    std::ostringstream os;
    os << "fracwin report: " << title_ << "\n";
    const auto section = [&os](const char* name,
                               const std::vector<std::pair<std::string, std::string>>& rows) {
        os << "== " << name << " ==\n";
        for (const auto& [k, v] : rows) os << k << " = " << v << "\n";
    };
    section("inputs", inputs_);
    section("thresholds", thresholds_);
    section("margins", margins_);
    os << "== verdict ==\n";
    for (const auto& v : verdicts_) os << v << "\n";
    if (!notes_.empty()) {
        os << "== notes ==\n";
        for (const auto& n : notes_) os << n << "\n";
    }
    return os.str();
}

void Report::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << render();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace fracwin
