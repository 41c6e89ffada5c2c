#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace testutil {

inline double rel_gap(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    }
    if (a.size() != b.size()) worst = 1e300;
    return worst;
}

} // namespace testutil
