/// @file initial_data.hpp
/// @brief Domain and initial-data types, validity checks, vorticity profiles.
///
/// Initial data is a sum of concentrated patches: each patch carries a
/// circulation (intensity), a concentration scale epsilon, and a radial
/// profile supported in a ball of radius support_radius_factor * epsilon
/// about its center. The validity checks mirror the admissibility conditions
/// the rest of the library assumes: sign-definite profiles, bounded sup-norm,
/// separated centers (and separation from the disk boundary), and a
/// near-circularity exponent beta > 2/3.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vortexlab/geometry.hpp"

namespace vortexlab {

enum class DomainKind { FullPlane, UnitDisk };

struct DomainSpec {
    DomainKind kind = DomainKind::FullPlane;
};

inline bool inside(const DomainSpec& d, Vec2 p) {
    return d.kind == DomainKind::FullPlane || norm2(p) < 1.0;
}

enum class ProfileKind { UniformDisk, SmoothBump, PerturbedDisk };

struct VortexPatchSpec {
    Vec2 center{};
    double intensity = 1.0;            // circulation a_i, nonzero
    double epsilon = 0.05;             // concentration scale
    ProfileKind profile = ProfileKind::UniformDisk;
    double amplitude = 0.0;            // PerturbedDisk boundary amplitude
    int mode = 2;                      // PerturbedDisk azimuthal mode
    double support_radius_factor = 1.0;

    double support_radius() const { return support_radius_factor * epsilon; }
};

struct InitialDataSpec {
    DomainSpec domain{};
    std::vector<VortexPatchSpec> patches;
    double separation_b = 0.5;
    double beta = 1.0;     // near-circularity exponent, > 2/3
    double n1 = 1.0;       // support radius bound: supp in B(n1*eps)
    double n2 = 10.0;      // sup-norm bound: |density| <= n2 * eps^-2
    double n3 = 1.0;       // initial defect scale
};

/// Unsigned density shape at displacement r from the patch center; the signed
/// vorticity is sign(intensity) * |density|, so profiles are sign-definite by
/// construction. Normalized so the integral equals |intensity| exactly in the
/// continuum.
inline double profile_density(const VortexPatchSpec& p, Vec2 rel) {
    const double a = std::abs(p.intensity);
    const double R = p.support_radius();
    const double r2 = norm2(rel);
    switch (p.profile) {
        case ProfileKind::UniformDisk: {
            if (r2 >= R * R) return 0.0;
            return a / (kPi * R * R);
        }
        case ProfileKind::SmoothBump: {
            // C^2 compactly supported radial polynomial (1 - (r/R)^2)^3.
            if (r2 >= R * R) return 0.0;
            const double u = 1.0 - r2 / (R * R);
            return 4.0 * a / (kPi * R * R) * u * u * u;
        }
        case ProfileKind::PerturbedDisk: {
            // Uniform density inside r(theta) = r0 (1 + amp cos(mode theta)),
            // r0 chosen so the support stays inside B_R.
            const double r0 = R / (1.0 + std::abs(p.amplitude));
            const double theta = std::atan2(rel.y, rel.x);
            const double rb = r0 * (1.0 + p.amplitude * std::cos(p.mode * theta));
            if (r2 >= rb * rb) return 0.0;
            const double area = kPi * r0 * r0 * (1.0 + 0.5 * p.amplitude * p.amplitude);
            return a / area;
        }
    }
    return 0.0;
}

inline double profile_sup(const VortexPatchSpec& p) {
    const double a = std::abs(p.intensity);
    const double R = p.support_radius();
    switch (p.profile) {
        case ProfileKind::UniformDisk: return a / (kPi * R * R);
        case ProfileKind::SmoothBump: return 4.0 * a / (kPi * R * R);
        case ProfileKind::PerturbedDisk: {
            const double r0 = R / (1.0 + std::abs(p.amplitude));
            return a / (kPi * r0 * r0 * (1.0 + 0.5 * p.amplitude * p.amplitude));
        }
    }
    return 0.0;
}

struct Violation {
    std::string assumption; // "A2", "A4", "A5", "A7", "beta", "structural"
    std::string message;
};

/// Checks an initial-data spec against the admissibility conditions.
/// Violations are data, not failures: the list is empty iff the spec is valid.
inline std::vector<Violation> validate(const InitialDataSpec& spec) {
    std::vector<Violation> out;
    auto fail = [&out](const std::string& a, const std::string& m) {
        out.push_back({a, m});
    };

    if (spec.patches.empty()) fail("structural", "no patches");
    if (!(spec.separation_b > 0.0)) fail("structural", "separation_b must be > 0");
    if (!(spec.beta > 2.0 / 3.0))
        fail("beta", "beta = " + std::to_string(spec.beta) + " must exceed 2/3");

    for (std::size_t i = 0; i < spec.patches.size(); ++i) {
        const auto& p = spec.patches[i];
        const std::string tag = "patch " + std::to_string(i);
        if (!(p.epsilon > 0.0)) fail("structural", tag + ": epsilon must be > 0");
        if (p.intensity == 0.0) fail("A5", tag + ": intensity must be nonzero");
        if (p.profile == ProfileKind::PerturbedDisk && std::abs(p.amplitude) >= 1.0)
            fail("A5", tag + ": |amplitude| >= 1 makes the profile sign-indefinite");
        if (!(p.support_radius_factor > 0.0) || p.support_radius_factor > spec.n1)
            fail("A2", tag + ": support radius factor exceeds n1 = " + std::to_string(spec.n1));
        if (p.epsilon > 0.0) {
            const double sup = profile_sup(p);
            const double cap = spec.n2 / (p.epsilon * p.epsilon);
            if (sup > cap)
                fail("A4", tag + ": sup density " + std::to_string(sup) +
                               " exceeds n2/eps^2 = " + std::to_string(cap));
        }
        if (spec.domain.kind == DomainKind::UnitDisk) {
            if (norm(p.center) >= 1.0)
                fail("structural", tag + ": center outside the unit disk");
            else if (1.0 - norm(p.center) < spec.separation_b)
                fail("A7", tag + ": distance to boundary " +
                               std::to_string(1.0 - norm(p.center)) + " below b");
        }
    }
    for (std::size_t i = 0; i < spec.patches.size(); ++i)
        for (std::size_t j = i + 1; j < spec.patches.size(); ++j) {
            const double d = dist(spec.patches[i].center, spec.patches[j].center);
            if (d < spec.separation_b)
                fail("A7", "patches " + std::to_string(i) + "," + std::to_string(j) +
                               ": center distance " + std::to_string(d) + " below b = " +
                               std::to_string(spec.separation_b));
        }
    return out;
}

} // namespace vortexlab
