#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbm::cli {

inline std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// How `pass` is decided from (measured, reference, tolerance).
enum class CheckRule {
    abs_diff,    // |measured - reference| <= tolerance
    upper_bound, // measured <= tolerance
    lower_bound, // measured >= tolerance
};

struct Check {
    std::string id;
    double measured = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline Check make_check(std::string id, double measured, double reference, double tolerance,
                        CheckRule rule = CheckRule::abs_diff)
{
    Check c{std::move(id), measured, reference, tolerance, false};
    switch (rule) {
    case CheckRule::abs_diff: c.pass = std::abs(measured - reference) <= tolerance; break;
    case CheckRule::upper_bound: c.pass = measured <= tolerance; break;
    case CheckRule::lower_bound: c.pass = measured >= tolerance; break;
    }
    return c;
}

inline bool all_pass(const std::vector<Check>& checks)
{
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

inline void write_checks(const std::filesystem::path& path, const std::vector<Check>& checks)
{
    auto os = open_output(path);
    os << "check_id,measured,reference,tolerance,pass\n";
    for (const auto& c : checks)
        os << c.id << ',' << fmt(c.measured) << ',' << fmt(c.reference) << ',' << fmt(c.tolerance) << ','
           << (c.pass ? "true" : "false") << '\n';
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

} // namespace rbm::cli
