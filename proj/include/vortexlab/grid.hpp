/// @file grid.hpp
/// @brief Nonnegative cell-averaged density on a uniform grid.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/geometry.hpp"

namespace vortexlab {

/// Cell-averaged nonnegative density. `values[iy * nx + ix]` is the average
/// over the cell whose center is origin + h*(ix+1/2, iy+1/2).
struct GriddedDensity {
    Vec2 origin{};
    double h = 1.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;

    double& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
    double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }

    Vec2 cell_center(std::size_t ix, std::size_t iy) const {
        return {origin.x + h * (static_cast<double>(ix) + 0.5),
                origin.y + h * (static_cast<double>(iy) + 0.5)};
    }

    /// Geometric center of the gridded region (rearrangement target center).
    Vec2 grid_center() const {
        return {origin.x + 0.5 * h * static_cast<double>(nx),
                origin.y + 0.5 * h * static_cast<double>(ny)};
    }

    std::size_t size() const { return values.size(); }

    double mass() const {
        KahanSum s;
        for (double v : values) s.add(v);
        return h * h * s.value();
    }

    double max_value() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
};

inline GriddedDensity make_grid(Vec2 origin, double h, std::size_t nx, std::size_t ny) {
    GriddedDensity g;
    g.origin = origin;
    g.h = h;
    g.nx = nx;
    g.ny = ny;
    g.values.assign(nx * ny, 0.0);
    return g;
}

struct NonzeroCell {
    Vec2 center;
    double value;
    std::size_t index; // row-major index; fixes summation and tie order
};

/// Nonzero cells in row-major order.
inline std::vector<NonzeroCell> nonzero_cells(const GriddedDensity& g) {
    std::vector<NonzeroCell> out;
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double v = g.at(ix, iy);
            if (v != 0.0) out.push_back({g.cell_center(ix, iy), v, iy * g.nx + ix});
        }
    return out;
}

/// Convex hull, Andrew monotone chain. Input order irrelevant; ties fine.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    if (pts.size() < 3) return pts;
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    return hull;
}

/// Exact max pairwise distance via hull + rotating scan (O(H^2) on the hull,
/// which is tiny compared to the point count).
inline double support_diameter(const std::vector<Vec2>& pts) {
    if (pts.size() < 2) return 0.0;
    const std::vector<Vec2> hull = convex_hull(pts);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, dist(hull[i], hull[j]));
    return best;
}

/// Diameter of the support of a gridded density (over nonzero cell centers,
/// plus one cell diagonal so single-cell supports are not reported as 0).
inline double support_diameter(const GriddedDensity& g) {
    std::vector<Vec2> pts;
    for (const auto& c : nonzero_cells(g)) pts.push_back(c.center);
    if (pts.empty()) return 0.0;
    return support_diameter(pts) + g.h * std::sqrt(2.0);
}

/// Center of mass; errors on zero mass.
inline Vec2 center_of_mass(const GriddedDensity& g) {
    KahanSum m, sx, sy;
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double v = g.at(ix, iy);
            if (v == 0.0) continue;
            const Vec2 c = g.cell_center(ix, iy);
            m.add(v);
            sx.add(v * c.x);
            sy.add(v * c.y);
        }
    if (m.value() <= 0.0) throw DomainError("center_of_mass: zero-mass grid");
    return {sx.value() / m.value(), sy.value() / m.value()};
}

} // namespace vortexlab
