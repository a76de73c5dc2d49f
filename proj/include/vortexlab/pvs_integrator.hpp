/// @file pvs_integrator.hpp
/// @brief Fixed-step RK4 integration of the point vortex ODE with
///        conserved-quantity tracking and a collision guard.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/greens.hpp"

namespace vortexlab {

struct PvsInvariants {
    double hamiltonian = 0.0;    // sum_{i<j} a_i a_j G + 1/2 sum a_i^2 gamma
    Vec2 linear_impulse{};       // sum a_i X_i (full plane only)
    double angular_impulse = 0.0; // sum a_i |X_i|^2
    bool has_linear_impulse = true;
};

inline PvsInvariants invariants(const PointVortexState& s) {
    PvsInvariants inv;
    KahanSum h, ang;
    KahanSum2 lin;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double ai = s.intensities[i];
        const Vec2 xi = s.positions[i];
        h.add(0.5 * ai * ai * gamma_reflection(s.domain, xi, xi));
        ang.add(ai * norm2(xi));
        lin.add(ai * xi);
        for (std::size_t j = i + 1; j < s.size(); ++j)
            h.add(ai * s.intensities[j] * green(s.domain, xi, s.positions[j]));
    }
    inv.hamiltonian = h.value();
    inv.angular_impulse = ang.value();
    inv.has_linear_impulse = s.domain.kind == DomainKind::FullPlane;
    inv.linear_impulse = inv.has_linear_impulse ? lin.value() : Vec2{};
    return inv;
}

namespace detail {

inline std::vector<Vec2> pvs_rhs(const PointVortexState& s) {
    std::vector<Vec2> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = pvs_self_velocity(s, i);
    return v;
}

inline double max_speed(const std::vector<Vec2>& v) {
    double m = 0.0;
    for (Vec2 u : v) m = std::max(m, norm(u));
    return m;
}

/// Separation guard: min pairwise distance must exceed 10 * dt * max speed.
inline void check_separation(const PointVortexState& s, double dt,
                             const std::vector<Vec2>& v, double t) {
    const double vmax = max_speed(v);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const double d = dist(s.positions[i], s.positions[j]);
            if (d <= 10.0 * dt * vmax) throw CollisionImminentError(i, j, d, t);
        }
}

} // namespace detail

/// One classical RK4 step of X_i' = u_i^p(X_i). Intensities unchanged.
inline PointVortexState step(const PointVortexState& s, double dt, double t = 0.0) {
    if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
    const auto k1 = detail::pvs_rhs(s);
    detail::check_separation(s, dt, k1, t);

    PointVortexState tmp = s;
    auto shift = [&s, &tmp](const std::vector<Vec2>& k, double c) {
        for (std::size_t i = 0; i < s.size(); ++i) tmp.positions[i] = s.positions[i] + c * k[i];
    };
    shift(k1, 0.5 * dt);
    const auto k2 = detail::pvs_rhs(tmp);
    shift(k2, 0.5 * dt);
    const auto k3 = detail::pvs_rhs(tmp);
    shift(k3, dt);
    const auto k4 = detail::pvs_rhs(tmp);

    PointVortexState out = s;
    for (std::size_t i = 0; i < s.size(); ++i)
        out.positions[i] =
            s.positions[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

struct PvsSample {
    double t = 0.0;
    PointVortexState state;
    PvsInvariants invariants;
};

struct PvsTrajectory {
    std::vector<PvsSample> samples;
    bool stopped_early = false;
    double stop_time = 0.0;            // time reached (== t_end unless stopped)
    std::size_t stop_pair_i = 0, stop_pair_j = 0;
};

/// Fixed-step trajectory with samples every `sample_every` steps (first and
/// last states always sampled). Terminates early if the collision guard
/// trips, recording the stopping time and the offending pair.
inline PvsTrajectory integrate(const PointVortexState& s0, double t_end, double dt,
                               std::size_t sample_every) {
    if (!(dt > 0.0)) throw DomainError("integrate: dt must be > 0");
    if (sample_every == 0) sample_every = 1;
    PvsTrajectory traj;
    PointVortexState s = s0;
    const auto n_steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-12)));
    traj.samples.push_back({0.0, s, invariants(s)});
    double t = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double step_dt = std::min(dt, t_end - t);
        if (step_dt <= 0.0) break;
        try {
            s = step(s, step_dt, t);
        } catch (const CollisionImminentError& e) {
            traj.stopped_early = true;
            traj.stop_time = t;
            traj.stop_pair_i = e.i;
            traj.stop_pair_j = e.j;
            traj.samples.push_back({t, s, invariants(s)});
            return traj;
        }
        t += step_dt;
        if ((k + 1) % sample_every == 0 && k + 1 < n_steps)
            traj.samples.push_back({t, s, invariants(s)});
    }
    traj.stop_time = t;
    traj.samples.push_back({t, s, invariants(s)});
    return traj;
}

} // namespace vortexlab
