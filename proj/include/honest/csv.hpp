#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace honest {

// Floats carry 12 significant digits in every report.
inline std::string format_csv_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

}  // namespace honest
