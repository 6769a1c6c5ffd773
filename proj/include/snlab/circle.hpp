#pragma once

#include <cmath>
#include <limits>

#include "snlab/errors.hpp"

// Points and arcs on the circle M = R/Z, unit length, represented in [0,1).
// All family formulas are written on the lift and reduced with wrap().

namespace snlab {

inline constexpr double kPointTol = 1e-12;  // endpoint comparisons

/// A point of M = R/Z stored as its representative in [0,1).
struct CirclePoint {
    double value = 0.0;

    CirclePoint() = default;
    explicit CirclePoint(double v) : value(v) {}
};

/// Reduce a real to [0,1). wrap(wrap(x)) == wrap(x).
inline CirclePoint wrap(double x) {
    if (!std::isfinite(x)) throw DomainError("wrap: non-finite input");
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // floor rounding at the seam
    return CirclePoint{r};
}

/// Shortest-arc metric: min(|x-y|, 1-|x-y|), in [0, 1/2].
inline double circle_dist(CirclePoint x, CirclePoint y) {
    double d = std::fabs(x.value - y.value);
    return d <= 0.5 ? d : 1.0 - d;
}

/// The arc {start + s mod 1 : 0 <= s <= length}, length in [0,1].
struct CircleInterval {
    CirclePoint start;
    double length = 0.0;

    CircleInterval() = default;
    CircleInterval(CirclePoint s, double len) : start(s), length(len) {
        if (!(len >= 0.0 && len <= 1.0))
            throw DomainError("CircleInterval: length outside [0,1]");
    }

    bool contains(CirclePoint p, double tol = kPointTol) const {
        double s = p.value - start.value;
        s -= std::floor(s);  // offset along the arc in [0,1)
        return s <= length + tol || s >= 1.0 - tol;
    }

    CirclePoint end() const { return wrap(start.value + length); }
};

} // namespace snlab
