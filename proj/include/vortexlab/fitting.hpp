/// @file fitting.hpp
/// @brief Least-squares line fits (used for slope/exponent regressions).
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vortexlab/errors.hpp"

namespace vortexlab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double ci95_halfwidth = 0.0; // 1.96 * stderr (normal approximation)
    std::size_t n = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw DomainError("fit_line: need >= 2 matching points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit_line: degenerate abscissae");
    LineFit f;
    f.n = xs.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss_res += r * r;
    }
    if (xs.size() > 2) {
        const double var = ss_res / (n - 2.0);
        f.slope_stderr = std::sqrt(var / sxx);
    }
    f.ci95_halfwidth = 1.96 * f.slope_stderr;
    return f;
}

/// Log-log fit; pairs with nonpositive coordinates are skipped.
inline LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
        if (xs[i] > 0.0 && ys[i] > 0.0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    return fit_line(lx, ly);
}

} // namespace vortexlab
