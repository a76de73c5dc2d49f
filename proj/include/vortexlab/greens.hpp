/// @file greens.hpp
/// @brief Green's functions, point-vortex velocities, relative streamfunction,
///        and the streamfunction-adapted (intrinsic) distance.
///
/// Domains are the full plane and the unit disk. On the disk the Dirichlet
/// Green's function is the method-of-images kernel
///
///     G(x,y) = -(1/2pi) log|x-y| + gamma(x,y),
///     gamma(x,y) = (1/4pi) log(|x|^2 |y|^2 - 2 x.y + 1),
///
/// where the symmetric form of gamma makes the removable singularity at y=0
/// (image at infinity) explicit: gamma(x,0) = 0. All gradients are closed
/// form; finite differences appear only in tests.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/initial_data.hpp"

namespace vortexlab {

namespace detail {
inline void require_in_closed_disk(const DomainSpec& d, Vec2 p, const char* who) {
    if (d.kind == DomainKind::UnitDisk && norm2(p) > 1.0)
        throw DomainError(std::string(who) + ": point outside the closed unit disk");
}
} // namespace detail

/// Harmonic reflection term of the Green's function. Zero on the full plane.
inline double gamma_reflection(const DomainSpec& domain, Vec2 x, Vec2 y) {
    if (domain.kind == DomainKind::FullPlane) return 0.0;
    detail::require_in_closed_disk(domain, x, "gamma_reflection");
    detail::require_in_closed_disk(domain, y, "gamma_reflection");
    const double q = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
    return 0.25 / kPi * std::log(q);
}

/// Gradient of gamma in the first argument (zero on the full plane).
inline Vec2 grad_gamma(const DomainSpec& domain, Vec2 x, Vec2 y) {
    if (domain.kind == DomainKind::FullPlane) return {0.0, 0.0};
    detail::require_in_closed_disk(domain, x, "grad_gamma");
    detail::require_in_closed_disk(domain, y, "grad_gamma");
    const double q = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
    return 0.5 / (kPi * q) * (norm2(y) * x - y);
}

/// Dirichlet Green's function of -Laplace (log convention as above).
inline double green(const DomainSpec& domain, Vec2 x, Vec2 y) {
    const double r2 = norm2(x - y);
    if (r2 == 0.0) throw SingularityError("green: x == y");
    return -0.25 / kPi * std::log(r2) + gamma_reflection(domain, x, y);
}

inline Vec2 grad_green(const DomainSpec& domain, Vec2 x, Vec2 y) {
    const double r2 = norm2(x - y);
    if (r2 == 0.0) throw SingularityError("grad_green: x == y");
    return -0.5 / (kPi * r2) * (x - y) + grad_gamma(domain, x, y);
}

struct PointVortexState {
    std::vector<Vec2> positions;    // X_i
    std::vector<double> intensities; // a_i, nonzero
    DomainSpec domain{};

    std::size_t size() const { return positions.size(); }
};

/// Point-vortex velocity field u^p(x) = sum_i -a_i perp(grad G(x, X_i)).
inline Vec2 pvs_velocity(const PointVortexState& s, Vec2 x) {
    detail::require_in_closed_disk(s.domain, x, "pvs_velocity");
    KahanSum2 u;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Vec2 r = x - s.positions[i];
        const double r2 = norm2(r);
        if (r2 == 0.0) throw SingularityError("pvs_velocity: x coincides with a vortex");
        u.add(s.intensities[i] *
              (perp(r) / (kTwoPi * r2) - perp(grad_gamma(s.domain, x, s.positions[i]))));
    }
    return u.value();
}

/// Velocity of vortex i itself (self-interaction removed):
/// u_i^p(X_i) = -a_i perp(grad gamma(X_i, X_i)) - sum_{j != i} a_j perp(grad G(X_i, X_j)).
inline Vec2 pvs_self_velocity(const PointVortexState& s, std::size_t i) {
    const Vec2 xi = s.positions[i];
    KahanSum2 u;
    u.add(-s.intensities[i] * perp(grad_gamma(s.domain, xi, xi)));
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        if (norm2(xi - s.positions[j]) == 0.0)
            throw SingularityError("pvs_self_velocity: coincident vortices");
        u.add(-s.intensities[j] * perp(grad_green(s.domain, xi, s.positions[j])));
    }
    return u.value();
}

/// Streamfunction of u^p(x) - u_i^p(X_i), normalized so that exp(-2pi Psi/a_i)
/// behaves like |x - X_i| at leading order.
inline double relative_streamfunction(const PointVortexState& s, std::size_t i, Vec2 x) {
    detail::require_in_closed_disk(s.domain, x, "relative_streamfunction");
    const Vec2 xi = s.positions[i];
    KahanSum psi;
    psi.add(s.intensities[i] *
            (green(s.domain, x, xi) - gamma_reflection(s.domain, xi, xi) -
             dot(grad_gamma(s.domain, xi, xi), x - xi)));
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        const Vec2 xj = s.positions[j];
        if (norm2(x - xj) == 0.0)
            throw SingularityError("relative_streamfunction: x at another vortex center");
        psi.add(s.intensities[j] *
                (green(s.domain, x, xj) - green(s.domain, xi, xj) -
                 dot(grad_green(s.domain, xi, xj), x - xi)));
    }
    return psi.value();
}

inline Vec2 grad_relative_streamfunction(const PointVortexState& s, std::size_t i, Vec2 x) {
    detail::require_in_closed_disk(s.domain, x, "grad_relative_streamfunction");
    const Vec2 xi = s.positions[i];
    KahanSum2 g;
    g.add(s.intensities[i] * (grad_green(s.domain, x, xi) - grad_gamma(s.domain, xi, xi)));
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        const Vec2 xj = s.positions[j];
        g.add(s.intensities[j] * (grad_green(s.domain, x, xj) - grad_green(s.domain, xi, xj)));
    }
    return g.value();
}

/// Intrinsic distance d_i(x) = exp(-2pi/a_i Psi_i(x)); equals |x - X_i| up to
/// a cubic error near X_i, and exactly on the full plane with one vortex.
/// Defined as 0 at x == X_i (continuity extension).
inline double intrinsic_distance(const PointVortexState& s, std::size_t i, Vec2 x) {
    const Vec2 xi = s.positions[i];
    if (x.x == xi.x && x.y == xi.y) return 0.0;
    return std::exp(-kTwoPi / s.intensities[i] * relative_streamfunction(s, i, x));
}

/// Gradient of d_i at x != X_i.
inline Vec2 grad_intrinsic_distance(const PointVortexState& s, std::size_t i, Vec2 x) {
    const double d = intrinsic_distance(s, i, x);
    return -kTwoPi / s.intensities[i] * d * grad_relative_streamfunction(s, i, x);
}

} // namespace vortexlab
