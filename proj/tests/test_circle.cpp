#include <doctest.h>

#include <cmath>

#include "snlab/circle.hpp"
#include "snlab/rng.hpp"

using namespace snlab;

TEST_CASE("wrap reduces to [0,1)") {
    CHECK(wrap(1.25).value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wrap(-0.25).value == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(wrap(0.0).value == 0.0);
    CHECK(wrap(1.0).value == 0.0);
    CHECK(wrap(-3.0).value == 0.0);

    CounterRng rng(42, 0);
    for (int i = 0; i < 1000; ++i) {
        double x = (rng.uniform() - 0.5) * 200.0;
        double w = wrap(x).value;
        CHECK(w >= 0.0);
        CHECK(w < 1.0);
        CHECK(wrap(w).value == w);  // idempotent
    }
    CHECK_THROWS_AS(wrap(std::nan("")), DomainError);
    CHECK_THROWS_AS(wrap(1.0 / 0.0), DomainError);
}

TEST_CASE("circle_dist is the shortest-arc metric") {
    CHECK(circle_dist(CirclePoint{0.1}, CirclePoint{0.9}) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(circle_dist(CirclePoint{0.37}, CirclePoint{0.37}) == 0.0);
    CHECK(circle_dist(CirclePoint{0.25}, CirclePoint{0.5}) == doctest::Approx(0.25));

    CounterRng rng(7, 0);
    for (int i = 0; i < 2000; ++i) {
        CirclePoint a = wrap(rng.uniform());
        CirclePoint b = wrap(rng.uniform());
        CirclePoint c = wrap(rng.uniform());
        double ab = circle_dist(a, b);
        CHECK(ab <= 0.5);
        CHECK(ab == circle_dist(b, a));
        CHECK(ab <= circle_dist(a, c) + circle_dist(c, b) + 1e-15);
        int k = static_cast<int>(rng.bits() % 7) - 3;
        CHECK(circle_dist(wrap(a.value), wrap(a.value + k)) <= 1e-15);
    }
}

TEST_CASE("interval membership agrees with a brute-force lift check") {
    CounterRng rng(99, 0);
    for (int i = 0; i < 2000; ++i) {
        double start = rng.uniform();
        double len = rng.uniform();
        CircleInterval iv(wrap(start), len);
        double p = rng.uniform();
        // brute force on the lift: p + m in [start, start+len] for some integer m
        bool expect = false;
        for (int m = -1; m <= 1; ++m)
            if (p + m >= start - 1e-12 && p + m <= start + len + 1e-12) expect = true;
        CHECK(iv.contains(wrap(p)) == expect);
    }
    // an interval crossing 0 contains points on both sides
    CircleInterval cross(wrap(0.9), 0.2);
    CHECK(cross.contains(wrap(0.95)));
    CHECK(cross.contains(wrap(0.05)));
    CHECK(cross.contains(wrap(0.0)));
    CHECK(!cross.contains(wrap(0.5)));
}
