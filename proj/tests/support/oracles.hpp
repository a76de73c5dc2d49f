/// @file oracles.hpp
/// @brief Independent reference computations used only by tests.
///
/// Everything here deliberately avoids the library's own evaluation paths:
/// finite differences instead of closed-form gradients, grid Poisson solves
/// instead of image formulas, Monte Carlo / radial quadrature instead of
/// cell-pair sums, exhaustive enumeration instead of the production OT solver.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "vortexlab/geometry.hpp"
#include "vortexlab/grid.hpp"
#include "vortexlab/random.hpp"

namespace vortexlab::testing {

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

inline Vec2 fd_gradient(const std::function<double(Vec2)>& f, Vec2 x, double h) {
    return {(f({x.x + h, x.y}) - f({x.x - h, x.y})) / (2.0 * h),
            (f({x.x, x.y + h}) - f({x.x, x.y - h})) / (2.0 * h)};
}

/// 5-point Laplacian stencil.
inline double fd_laplacian(const std::function<double(Vec2)>& f, Vec2 x, double h) {
    return (f({x.x + h, x.y}) + f({x.x - h, x.y}) + f({x.x, x.y + h}) + f({x.x, x.y - h}) -
            4.0 * f(x)) /
           (h * h);
}

// ---------------------------------------------------------------------------
// Dirichlet Poisson solve on the unit disk (masked uniform grid, CG)
// ---------------------------------------------------------------------------

/// Solves -Laplace(u) = point source of strength 1 at y, u = 0 outside the
/// disk mask, on a (2n+1)^2 grid over [-1,1]^2. Returns a sampler for u.
/// Staircase boundary error is O(h), so compare with tolerances of a few
/// percent away from both the source and the boundary.
class DiskPoissonOracle {
  public:
    DiskPoissonOracle(Vec2 source, std::size_t n_half = 96) {
        n_ = 2 * n_half + 1;
        h_ = 2.0 / static_cast<double>(n_ - 1);
        interior_.assign(n_ * n_, false);
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < n_; ++i)
                interior_[j * n_ + i] = norm2(node(i, j)) < (1.0 - 1e-12);
        std::vector<double> rhs(n_ * n_, 0.0);
        // Discrete delta: assign to the nearest node, strength 1/h^2.
        const auto si = static_cast<std::size_t>(std::lround((source.x + 1.0) / h_));
        const auto sj = static_cast<std::size_t>(std::lround((source.y + 1.0) / h_));
        rhs[sj * n_ + si] = 1.0 / (h_ * h_);
        u_.assign(n_ * n_, 0.0);
        conjugate_gradient(rhs);
    }

    double operator()(Vec2 p) const {
        const double fx = (p.x + 1.0) / h_;
        const double fy = (p.y + 1.0) / h_;
        const auto i0 = static_cast<std::size_t>(std::floor(fx));
        const auto j0 = static_cast<std::size_t>(std::floor(fy));
        const double wx = fx - static_cast<double>(i0);
        const double wy = fy - static_cast<double>(j0);
        return (1 - wx) * (1 - wy) * u_[j0 * n_ + i0] + wx * (1 - wy) * u_[j0 * n_ + i0 + 1] +
               (1 - wx) * wy * u_[(j0 + 1) * n_ + i0] + wx * wy * u_[(j0 + 1) * n_ + i0 + 1];
    }

  private:
    Vec2 node(std::size_t i, std::size_t j) const {
        return {-1.0 + h_ * static_cast<double>(i), -1.0 + h_ * static_cast<double>(j)};
    }

    // y = A x with A the masked 5-point -Laplacian.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < n_; ++i) {
                const std::size_t k = j * n_ + i;
                if (!interior_[k]) {
                    y[k] = x[k];
                    continue;
                }
                const double xc = x[k];
                const double xl = interior_[k - 1] ? x[k - 1] : 0.0;
                const double xr = interior_[k + 1] ? x[k + 1] : 0.0;
                const double xd = interior_[k - n_] ? x[k - n_] : 0.0;
                const double xu = interior_[k + n_] ? x[k + n_] : 0.0;
                y[k] = (4.0 * xc - xl - xr - xd - xu) / (h_ * h_);
            }
    }

    void conjugate_gradient(const std::vector<double>& rhs) {
        std::vector<double> r = rhs, p = rhs, ap(n_ * n_);
        for (std::size_t k = 0; k < r.size(); ++k)
            if (!interior_[k]) r[k] = p[k] = 0.0;
        double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
        const double tol = 1e-18 * (rr > 0 ? rr : 1.0);
        for (int it = 0; it < 20000 && rr > tol; ++it) {
            apply(p, ap);
            const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
            const double alpha = rr / pap;
            for (std::size_t k = 0; k < u_.size(); ++k) {
                u_[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            const double rr_new = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
            const double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
        }
    }

    std::size_t n_;
    double h_;
    std::vector<bool> interior_;
    std::vector<double> u_;
};

// ---------------------------------------------------------------------------
// Interaction-energy references
// ---------------------------------------------------------------------------

/// Monte Carlo estimate of E(rho) = -(1/2pi) iint log|x-y| rho rho for a
/// gridded density, sampling cell pairs by mass and positions uniformly
/// within cells. Returns (estimate, standard error).
inline std::pair<double, double> mc_log_energy(const GriddedDensity& g, std::size_t samples,
                                               std::uint64_t seed) {
    const auto cells = nonzero_cells(g);
    std::vector<double> cum;
    cum.reserve(cells.size());
    double total = 0.0;
    for (const auto& c : cells) {
        total += c.value;
        cum.push_back(total);
    }
    SplitMix64 rng(seed);
    auto draw_cell = [&]() -> const NonzeroCell& {
        const double u = rng.uniform() * total;
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        return cells[static_cast<std::size_t>(it - cum.begin())];
    };
    const double mass = g.mass();
    KahanSum acc, acc2;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto& ca = draw_cell();
        const auto& cb = draw_cell();
        const Vec2 xa = {ca.center.x + g.h * (rng.uniform() - 0.5),
                         ca.center.y + g.h * (rng.uniform() - 0.5)};
        const Vec2 xb = {cb.center.x + g.h * (rng.uniform() - 0.5),
                         cb.center.y + g.h * (rng.uniform() - 0.5)};
        const double r2 = norm2(xa - xb);
        const double v = r2 == 0.0 ? 0.0 : -0.25 / kPi * std::log(r2);
        acc.add(v);
        acc2.add(v * v);
    }
    const double mean = acc.value() / static_cast<double>(samples);
    const double var =
        std::max(0.0, acc2.value() / static_cast<double>(samples) - mean * mean);
    const double scale = mass * mass;
    return {scale * mean, scale * std::sqrt(var / static_cast<double>(samples))};
}

/// Closed form: E of the uniform unit-height disk of radius R is
/// (pi R^4 / 2)(1/4 - log R); with mass m spread uniformly on B_R it is
/// m^2 (1/4 - log R) / (2 pi) ... kept in the mass-explicit form below.
inline double uniform_disk_log_energy(double radius, double mass) {
    const double dens = mass / (kPi * radius * radius);
    return dens * dens * (kPi * std::pow(radius, 4.0) / 2.0) * (0.25 - std::log(radius));
}

/// E of a radial density given by samples rho(r) on [0, R]; 1D quadrature via
/// the shell decomposition of the log potential:
///   Phi(r) = log r * m(r) + int_r^R log(s) rho(s) 2 pi s ds,
///   E = -(1/2pi) int Phi(r) rho(r) 2 pi r dr.
inline double radial_log_energy(const std::function<double(double)>& rho, double R,
                                std::size_t n = 200000) {
    const double dr = R / static_cast<double>(n);
    std::vector<double> rs(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        rs[i] = (static_cast<double>(i) + 0.5) * dr;
        w[i] = rho(rs[i]) * kTwoPi * rs[i] * dr;
    }
    // Prefix masses and suffix log-weighted masses.
    std::vector<double> m(n + 1, 0.0), tail(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i + 1] = m[i] + w[i];
    for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + std::log(rs[i]) * w[i];
    KahanSum e;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = std::log(rs[i]) * (m[i] + 0.5 * w[i]) + tail[i + 1] +
                           0.5 * std::log(rs[i]) * w[i];
        e.add(-1.0 / kTwoPi * phi * w[i]);
    }
    return e.value();
}

} // namespace vortexlab::testing
