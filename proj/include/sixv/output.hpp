#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sixv {

/// Floating-point formatting used for all file output: 17 significant
/// digits, enough to round-trip a double exactly.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

} // namespace sixv
