#pragma once

#include <cmath>
#include <string>

#include "snlab/circle.hpp"
#include "snlab/errors.hpp"

// Parametric circle-map families f_t(x) = f_0(x) + t mod 1 (additive
// unfolding, so the derivative does not depend on t), with closed-form
// first and second derivatives of the lift.

namespace snlab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class FamilyKind {
    CanonicalExpanding,  // 2x - sin(2pi x)/(2pi) + c(1 - cos(2pi x)), degree 2
    ArnoldHomeo,         // x + (a/2pi)(1 - cos(2pi x)), degree 1
    DoublingOracle,      // 2x, degree 2 (exactly solvable test oracle)
};

struct MapFamily {
    FamilyKind kind = FamilyKind::CanonicalExpanding;
    double param = 0.2;  // c for canonical, a for arnold, unused for doubling
    double t0 = 0.2;     // parameter range [0, t0]

    static MapFamily canonical(double c = 0.2, double t0 = 0.2);
    static MapFamily arnold(double a = 0.8, double t0 = 0.2);
    static MapFamily doubling(double t0 = 0.2);

    int degree() const { return kind == FamilyKind::ArnoldHomeo ? 1 : 2; }
    std::string name() const;

    void require_t(double t) const {
        if (!(t >= 0.0 && t <= t0))
            throw DomainError("parameter t outside [0, t0]");
    }
};

// Lift of f_t and its x-derivatives; hot paths use these directly.
inline double lift(const MapFamily& fam, double t, double x) {
    switch (fam.kind) {
        case FamilyKind::CanonicalExpanding:
            return 2.0 * x - std::sin(kTwoPi * x) / kTwoPi
                   + fam.param * (1.0 - std::cos(kTwoPi * x)) + t;
        case FamilyKind::ArnoldHomeo:
            return x + (fam.param / kTwoPi) * (1.0 - std::cos(kTwoPi * x)) + t;
        case FamilyKind::DoublingOracle:
            return 2.0 * x + t;
    }
    return 0.0;
}

inline double lift_d1(const MapFamily& fam, double x) {
    switch (fam.kind) {
        case FamilyKind::CanonicalExpanding:
            return 2.0 - std::cos(kTwoPi * x) + kTwoPi * fam.param * std::sin(kTwoPi * x);
        case FamilyKind::ArnoldHomeo:
            return 1.0 + fam.param * std::sin(kTwoPi * x);
        case FamilyKind::DoublingOracle:
            return 2.0;
    }
    return 0.0;
}

inline double lift_d2(const MapFamily& fam, double x) {
    switch (fam.kind) {
        case FamilyKind::CanonicalExpanding:
            return kTwoPi * std::sin(kTwoPi * x)
                   + kTwoPi * kTwoPi * fam.param * std::cos(kTwoPi * x);
        case FamilyKind::ArnoldHomeo:
            return kTwoPi * fam.param * std::cos(kTwoPi * x);
        case FamilyKind::DoublingOracle:
            return 0.0;
    }
    return 0.0;
}

inline double lift_d3(const MapFamily& fam, double x) {
    switch (fam.kind) {
        case FamilyKind::CanonicalExpanding:
            return kTwoPi * kTwoPi * std::cos(kTwoPi * x)
                   - kTwoPi * kTwoPi * kTwoPi * fam.param * std::sin(kTwoPi * x);
        case FamilyKind::ArnoldHomeo:
            return -kTwoPi * kTwoPi * fam.param * std::sin(kTwoPi * x);
        case FamilyKind::DoublingOracle:
            return 0.0;
    }
    return 0.0;
}

/// One application of f_t on the circle.
inline CirclePoint apply(const MapFamily& fam, double t, CirclePoint x) {
    return wrap(lift(fam, t, x.value));
}

struct Jet {
    CirclePoint f;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// f_t(x) mod 1 with exact first/second derivatives of the lift at x.
Jet eval_jet(const MapFamily& fam, double t, CirclePoint x);

/// Numerical verification of the standing hypotheses of the unfolding:
/// saddle-node at 0, fixed source s, immediate basin W_0, and the
/// grid-certified expansion H1 on M \ W_0.
struct HypothesisReport {
    bool saddle_node_ok = false;
    bool h1_ok = false;
    bool h1_applicable = false;  // false for degree-1 homeomorphisms (no source)
    bool has_source = false;
    CirclePoint source_s;
    CircleInterval immediate_basin;
    double min_deriv_outside = 0.0;
    double injectivity_radius = 0.0;
};

HypothesisReport verify_hypotheses(const MapFamily& fam);

} // namespace snlab
