/// @file particle_field.hpp
/// @brief Lagrangian blob discretization of the vorticity and grid deposition.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/grid.hpp"
#include "vortexlab/initial_data.hpp"

namespace vortexlab {

/// Particle (blob) field: positions, circulations, owning patch labels, and
/// one shared blob core radius. Struct-of-arrays so the velocity kernels can
/// stream the coordinates.
struct ParticleField {
    std::vector<double> x, y;
    std::vector<double> gamma;       // signed circulation per particle
    std::vector<std::size_t> label;  // patch index, 0-based
    double blob_radius = 0.0;        // delta

    std::size_t size() const { return x.size(); }
    Vec2 position(std::size_t p) const { return {x[p], y[p]}; }

    double total_circulation() const {
        KahanSum s;
        for (double g : gamma) s.add(g);
        return s.value();
    }

    double label_circulation(std::size_t l) const {
        KahanSum s;
        for (std::size_t p = 0; p < size(); ++p)
            if (label[p] == l) s.add(gamma[p]);
        return s.value();
    }

    std::size_t label_count() const {
        std::size_t n = 0;
        for (std::size_t l : label) n = std::max(n, l + 1);
        return n;
    }
};

/// Tiles each patch support with a square sub-lattice of spacing h_p chosen so
/// roughly `particles_per_patch` particles land inside, assigns each particle
/// the cell-integrated vorticity (midpoint rule), then rescales the patch so
/// its circulation matches the patch intensity exactly. The shared blob
/// radius is twice the largest sub-lattice spacing (blob overlap condition).
inline ParticleField discretize(const InitialDataSpec& spec, std::size_t particles_per_patch) {
    {
        const auto violations = validate(spec);
        if (!violations.empty())
            throw DomainError("discretize: invalid spec (first violation " +
                              violations.front().assumption + ": " +
                              violations.front().message + ")");
    }
    if (particles_per_patch < 16)
        throw DomainError("discretize: particles_per_patch must be >= 16");

    ParticleField f;
    double max_hp = 0.0;
    for (std::size_t i = 0; i < spec.patches.size(); ++i) {
        const auto& patch = spec.patches[i];
        const double R = patch.support_radius();
        const double hp = R * std::sqrt(kPi / static_cast<double>(particles_per_patch));
        max_hp = std::max(max_hp, hp);

        const auto n_half = static_cast<long>(std::ceil(R / hp)) + 1;
        std::vector<double> gx, gy, gw;
        KahanSum wsum;
        for (long iy = -n_half; iy <= n_half; ++iy)
            for (long ix = -n_half; ix <= n_half; ++ix) {
                const Vec2 rel{(static_cast<double>(ix) + 0.5) * hp,
                               (static_cast<double>(iy) + 0.5) * hp};
                const double dens = profile_density(patch, rel);
                if (dens <= 0.0) continue;
                gx.push_back(patch.center.x + rel.x);
                gy.push_back(patch.center.y + rel.y);
                gw.push_back(dens * hp * hp);
                wsum.add(dens * hp * hp);
            }
        if (gw.empty() || wsum.value() <= 0.0)
            throw DomainError("discretize: patch " + std::to_string(i) +
                              " produced no particles (epsilon too small?)");

        // Exact per-patch normalization: sum of circulations == intensity.
        const double scale = patch.intensity / wsum.value();
        for (std::size_t p = 0; p < gw.size(); ++p) {
            f.x.push_back(gx[p]);
            f.y.push_back(gy[p]);
            f.gamma.push_back(gw[p] * scale);
            f.label.push_back(i);
        }
    }
    f.blob_radius = 2.0 * max_hp;
    return f;
}

struct GridParams {
    Vec2 origin{};
    double h = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
};

/// Grid covering [lo, hi] with spacing h and `margin` extra cells per side.
inline GridParams grid_covering(Vec2 lo, Vec2 hi, double h, std::size_t margin = 4) {
    GridParams g;
    g.h = h;
    g.origin = {lo.x - static_cast<double>(margin) * h, lo.y - static_cast<double>(margin) * h};
    g.nx = static_cast<std::size_t>(std::ceil((hi.x - lo.x) / h)) + 2 * margin;
    g.ny = static_cast<std::size_t>(std::ceil((hi.y - lo.y) / h)) + 2 * margin;
    return g;
}

/// Mass-conserving bilinear (area-weighted) deposition of |circulation| of one
/// patch onto a uniform grid of cell averages. The grid must cover the
/// particles with a margin of at least 4 cells.
inline GriddedDensity deposit(const ParticleField& field, std::size_t label,
                              const GridParams& params) {
    GriddedDensity g = make_grid(params.origin, params.h, params.nx, params.ny);
    const double h = params.h;
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t p = 0; p < field.size(); ++p) {
        if (field.label[p] != label) continue;
        // Position in units of cells, relative to the first cell center.
        const double fx = (field.x[p] - params.origin.x) / h - 0.5;
        const double fy = (field.y[p] - params.origin.y) / h - 0.5;
        const double ix = std::floor(fx);
        const double iy = std::floor(fy);
        const double wx = fx - ix;
        const double wy = fy - iy;
        const long ix0 = static_cast<long>(ix);
        const long iy0 = static_cast<long>(iy);
        if (ix0 < 3 || iy0 < 3 || ix0 + 1 > static_cast<long>(params.nx) - 4 ||
            iy0 + 1 > static_cast<long>(params.ny) - 4)
            throw GridCoverageError("deposit: particle outside grid interior margin");
        const double m = std::abs(field.gamma[p]) * inv_h2;
        g.at(static_cast<std::size_t>(ix0), static_cast<std::size_t>(iy0)) +=
            m * (1.0 - wx) * (1.0 - wy);
        g.at(static_cast<std::size_t>(ix0 + 1), static_cast<std::size_t>(iy0)) +=
            m * wx * (1.0 - wy);
        g.at(static_cast<std::size_t>(ix0), static_cast<std::size_t>(iy0 + 1)) +=
            m * (1.0 - wx) * wy;
        g.at(static_cast<std::size_t>(ix0 + 1), static_cast<std::size_t>(iy0 + 1)) +=
            m * wx * wy;
    }
    return g;
}

/// Bounding box of one patch's particles.
inline std::pair<Vec2, Vec2> label_bbox(const ParticleField& field, std::size_t label) {
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    bool any = false;
    for (std::size_t p = 0; p < field.size(); ++p) {
        if (field.label[p] != label) continue;
        any = true;
        lo.x = std::min(lo.x, field.x[p]);
        lo.y = std::min(lo.y, field.y[p]);
        hi.x = std::max(hi.x, field.x[p]);
        hi.y = std::max(hi.y, field.y[p]);
    }
    if (!any) throw DomainError("label_bbox: no particles with label " + std::to_string(label));
    return {lo, hi};
}

/// Convenience: deposit one patch onto an automatically sized grid.
inline GriddedDensity deposit_auto(const ParticleField& field, std::size_t label, double h) {
    const auto [lo, hi] = label_bbox(field, label);
    return deposit(field, label, grid_covering(lo, hi, h));
}

/// Rasterizes one patch profile (|density|) onto a grid of cell averages,
/// supersampled midpoint rule per cell. Used when a density, rather than a
/// particle discretization, is the object of interest.
inline GriddedDensity rasterize_patch(const VortexPatchSpec& patch, double h,
                                      std::size_t margin_cells = 4, int supersample = 4) {
    const double R = patch.support_radius();
    const Vec2 lo{patch.center.x - R, patch.center.y - R};
    const Vec2 hi{patch.center.x + R, patch.center.y + R};
    const GridParams params = grid_covering(lo, hi, h, margin_cells);
    GriddedDensity g = make_grid(params.origin, params.h, params.nx, params.ny);
    const int ss = std::max(1, supersample);
    const double sub = h / static_cast<double>(ss);
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const Vec2 c = g.cell_center(ix, iy);
            if (norm2(c - patch.center) > (R + h) * (R + h)) continue;
            KahanSum acc;
            for (int sy = 0; sy < ss; ++sy)
                for (int sx = 0; sx < ss; ++sx) {
                    const Vec2 p{c.x + (sx + 0.5) * sub - 0.5 * h,
                                 c.y + (sy + 0.5) * sub - 0.5 * h};
                    acc.add(profile_density(patch, p - patch.center));
                }
            g.at(ix, iy) = acc.value() / static_cast<double>(ss * ss);
        }
    return g;
}

} // namespace vortexlab
