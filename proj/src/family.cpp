#include "snlab/family.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace snlab {

MapFamily MapFamily::canonical(double c, double t0) {
    // f' has analytic minimum 2 - sqrt(1 + (2 pi c)^2); keep it positive
    // so f_t stays a local diffeomorphism (degree 2).
    if (!(c > 0.0) || 2.0 - std::sqrt(1.0 + kTwoPi * c * kTwoPi * c) <= 0.0)
        throw DomainError("canonical family: need 0 < c < sqrt(3)/(2 pi)");
    if (!(t0 > 0.0)) throw DomainError("canonical family: t0 must be positive");
    return MapFamily{FamilyKind::CanonicalExpanding, c, t0};
}

MapFamily MapFamily::arnold(double a, double t0) {
    if (!(a > 0.0 && a < 1.0))
        throw DomainError("arnold family: need 0 < a < 1");
    if (!(t0 > 0.0)) throw DomainError("arnold family: t0 must be positive");
    return MapFamily{FamilyKind::ArnoldHomeo, a, t0};
}

MapFamily MapFamily::doubling(double t0) {
    if (!(t0 > 0.0)) throw DomainError("doubling family: t0 must be positive");
    return MapFamily{FamilyKind::DoublingOracle, 0.0, t0};
}

std::string MapFamily::name() const {
    switch (kind) {
        case FamilyKind::CanonicalExpanding: return "canonical";
        case FamilyKind::ArnoldHomeo: return "arnold";
        case FamilyKind::DoublingOracle: return "doubling";
    }
    return "?";
}

Jet eval_jet(const MapFamily& fam, double t, CirclePoint x) {
    fam.require_t(t);
    return Jet{wrap(lift(fam, t, x.value)), lift_d1(fam, x.value), lift_d2(fam, x.value)};
}

namespace {

// Bisection for F(x) - x = m on [lo,hi], assuming a sign change.
double bisect_fixed(const MapFamily& fam, double m, double lo, double hi) {
    auto q = [&](double x) { return lift(fam, 0.0, x) - x - m; };
    double flo = q(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if ((q(mid) <= 0.0) == (flo <= 0.0)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Transversal fixed points of f_0 on (0,1): sign changes of F(x)-x-m.
std::vector<double> transversal_fixed_points(const MapFamily& fam) {
    std::vector<double> roots;
    const int grid = 200000;
    for (int m = 0; m < fam.degree(); ++m) {
        double prev_x = 1.0 / grid;
        double prev_q = lift(fam, 0.0, prev_x) - prev_x - m;
        for (int i = 2; i < grid; ++i) {
            double x = static_cast<double>(i) / grid;
            double q = lift(fam, 0.0, x) - x - m;
            if ((prev_q <= 0.0) != (q <= 0.0))
                roots.push_back(bisect_fixed(fam, m, prev_x, x));
            prev_x = x;
            prev_q = q;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Preimage of lift target in [0,1] by bisection (lift is increasing).
double invert_lift(const MapFamily& fam, double t, double target, double lo = 0.0, double hi = 1.0) {
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if (lift(fam, t, mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double injectivity_radius(const MapFamily& fam) {
    if (fam.degree() == 1) return 0.5;
    // Degree 2: half the minimum circle distance between the two preimages
    // of a point, over a 1e-3 grid of image points.
    double f0 = lift(fam, 0.0, 0.0);
    double dmin = 1.0;
    const int grid = 1000;
    for (int i = 0; i < grid; ++i) {
        double y = f0 + static_cast<double>(i) / grid;
        double x1 = invert_lift(fam, 0.0, y);
        double x2 = invert_lift(fam, 0.0, y + 1.0);
        dmin = std::min(dmin, circle_dist(wrap(x1), wrap(x2)));
    }
    return 0.5 * dmin;
}

} // namespace

HypothesisReport verify_hypotheses(const MapFamily& fam) {
    HypothesisReport rep;
    rep.injectivity_radius = injectivity_radius(fam);

    double d1_at_0 = lift_d1(fam, 0.0);
    double d2_at_0 = lift_d2(fam, 0.0);
    rep.saddle_node_ok = std::fabs(d1_at_0 - 1.0) <= 1e-9 && d2_at_0 > 0.0;

    if (!rep.saddle_node_ok) {
        // No saddle node, no basin; report global expansion data instead.
        rep.h1_applicable = true;
        rep.immediate_basin = CircleInterval(CirclePoint{0.0}, 0.0);
        double mind = 1e300;
        const int grid = 100000;
        for (int i = 0; i < grid; ++i)
            mind = std::min(mind, lift_d1(fam, static_cast<double>(i) / grid));
        rep.min_deriv_outside = mind;
        rep.h1_ok = mind > 1.0;
        return rep;
    }

    auto sources = transversal_fixed_points(fam);
    if (sources.empty()) {
        // Saddle-node homeomorphism: f_0(x) > x off 0, every orbit converges
        // to 0, the immediate basin is the whole circle. H1 has no region to
        // hold on; flagged not applicable.
        rep.has_source = false;
        rep.h1_applicable = false;
        rep.h1_ok = false;
        rep.immediate_basin = CircleInterval(CirclePoint{0.0}, 1.0);
        double mind = 1e300;
        const int grid = 100000;
        for (int i = 0; i < grid; ++i)
            mind = std::min(mind, lift_d1(fam, static_cast<double>(i) / grid));
        rep.min_deriv_outside = mind;  // global min (informational)
        return rep;
    }

    // f''(0) > 0: the attracting side of the saddle-node is x < 0, so W_0
    // runs from the nearest fixed point below 0 (the source) up to 0.
    double s = sources.back();
    rep.has_source = true;
    rep.source_s = wrap(s);
    rep.immediate_basin = CircleInterval(wrap(s), 1.0 - s);

    // H1 grid certificate on M \ W_0 = (0, s]: grid step h, accept
    // min f' > 1 + L h/2 with L = sup |f''| over the grid.
    rep.h1_applicable = true;
    const double h = 1e-4;
    double mind = 1e300, maxd2 = 0.0;
    for (double x = h; x < s; x += h) {
        mind = std::min(mind, lift_d1(fam, x));
        maxd2 = std::max(maxd2, std::fabs(lift_d2(fam, x)));
    }
    mind = std::min(mind, lift_d1(fam, s));
    maxd2 = std::max(maxd2, std::fabs(lift_d2(fam, s)));
    rep.min_deriv_outside = mind;
    rep.h1_ok = mind > 1.0 + maxd2 * h / 2.0;
    return rep;
}

} // namespace snlab
