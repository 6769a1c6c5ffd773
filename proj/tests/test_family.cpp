#include <doctest.h>

#include <cmath>

#include "snlab/family.hpp"
#include "snlab/rng.hpp"

using namespace snlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("eval_jet closed forms at the saddle-node point") {
    MapFamily can = MapFamily::canonical(0.2);
    Jet j = eval_jet(can, 0.0, CirclePoint{0.0});
    CHECK(j.f.value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(j.d1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j.d2 == doctest::Approx(4.0 * kPi * kPi * 0.2).epsilon(1e-13));

    MapFamily dob = MapFamily::doubling();
    Jet jd = eval_jet(dob, 0.0, CirclePoint{0.3});
    CHECK(jd.f.value == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(jd.d1 == 2.0);
    CHECK(jd.d2 == 0.0);

    MapFamily arn = MapFamily::arnold(0.5);
    Jet ja = eval_jet(arn, 0.0, CirclePoint{0.0});
    CHECK(ja.f.value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ja.d1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ja.d2 == doctest::Approx(2.0 * kPi * 0.5).epsilon(1e-13));
}

TEST_CASE("eval_jet rejects parameters outside [0, t0]") {
    MapFamily can = MapFamily::canonical(0.2, 0.2);
    CHECK_THROWS_AS(eval_jet(can, -0.01, CirclePoint{0.1}), DomainError);
    CHECK_THROWS_AS(eval_jet(can, 0.21, CirclePoint{0.1}), DomainError);
}

TEST_CASE("closed-form derivatives match central finite differences") {
    const double h = 1e-5;
    for (MapFamily fam : {MapFamily::canonical(0.2), MapFamily::arnold(0.5)}) {
        CounterRng rng(13, 0);
        for (int i = 0; i < 1000; ++i) {
            double t = 0.2 * rng.uniform();
            double x = rng.uniform();
            double d1 = lift_d1(fam, x);
            double fd1 = (lift(fam, t, x + h) - lift(fam, t, x - h)) / (2.0 * h);
            CHECK(std::fabs(d1 - fd1) / std::fabs(d1) < 1e-6);
            double d2 = lift_d2(fam, x);
            double fd2 = (lift_d1(fam, x + h) - lift_d1(fam, x - h)) / (2.0 * h);
            CHECK(std::fabs(d2 - fd2) <= 1e-6 * std::max(1.0, std::fabs(d2)));
        }
    }
}

TEST_CASE("verify_hypotheses: canonical family") {
    MapFamily can = MapFamily::canonical(0.2);
    HypothesisReport rep = verify_hypotheses(can);
    CHECK(rep.saddle_node_ok);
    CHECK(rep.h1_applicable);
    CHECK(rep.h1_ok);
    CHECK(rep.has_source);

    // Independent oracle for the source: bisection on F(s) - s - 1 = 0
    // over (0, 0.714) directly on the closed-form lift.
    auto q = [](double x) {
        return 2.0 * x - std::sin(kTwoPi * x) / kTwoPi + 0.2 * (1.0 - std::cos(kTwoPi * x))
               - x - 1.0;
    };
    double lo = 1e-6, hi = 0.714;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (q(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    double s_oracle = 0.5 * (lo + hi);
    CHECK(rep.source_s.value == doctest::Approx(s_oracle).epsilon(1e-9));
    CHECK(lift_d1(can, rep.source_s.value) > 1.0);

    // source on the boundary of the immediate basin (s, 1]
    CHECK(rep.immediate_basin.start.value == doctest::Approx(s_oracle).epsilon(1e-9));
    CHECK(rep.immediate_basin.length == doctest::Approx(1.0 - s_oracle).epsilon(1e-8));
    CHECK(rep.immediate_basin.contains(CirclePoint{0.0}));
    CHECK(rep.min_deriv_outside > 1.0);
    CHECK(rep.injectivity_radius > 0.1);
    CHECK(rep.injectivity_radius < 0.2);
}

TEST_CASE("verify_hypotheses: doubling has no saddle node") {
    HypothesisReport rep = verify_hypotheses(MapFamily::doubling());
    CHECK(!rep.saddle_node_ok);
    CHECK(rep.h1_ok);  // globally expanding
    CHECK(rep.min_deriv_outside == doctest::Approx(2.0));
    CHECK(rep.injectivity_radius == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("verify_hypotheses: arnold homeomorphism") {
    HypothesisReport rep = verify_hypotheses(MapFamily::arnold(0.5));
    CHECK(rep.saddle_node_ok);
    CHECK(!rep.has_source);        // degree-1 homeo has no source
    CHECK(!rep.h1_applicable);     // H1 check flagged not applicable
    CHECK(rep.immediate_basin.length == doctest::Approx(1.0));  // whole circle
    CHECK(rep.injectivity_radius == doctest::Approx(0.5));
}

TEST_CASE("contraction region is contained in the immediate basin") {
    MapFamily can = MapFamily::canonical(0.2);
    HypothesisReport rep = verify_hypotheses(can);
    // {x : f_0'(x) < 1} must be a single interval inside W_0.
    const int grid = 100000;
    bool in_region = false;
    int region_changes = 0;
    for (int i = 0; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        bool contracting = lift_d1(can, x) < 1.0;
        if (contracting != in_region) {
            ++region_changes;
            in_region = contracting;
        }
        if (contracting) CHECK(rep.immediate_basin.contains(CirclePoint{x}));
    }
    CHECK(region_changes <= 2);  // single interval (may touch the seam)
}

TEST_CASE("the saddle-node pair disappears for t > 0") {
    MapFamily can = MapFamily::canonical(0.2);
    for (double t : {0.001, 0.01, 0.05, 0.1, 0.2}) {
        // sign-scan f_t(x) - x on circle points within distance 0.1 of 0
        const int grid = 20000;
        for (int i = -grid; i <= grid; ++i) {
            double x = 0.1 * static_cast<double>(i) / grid;
            double disp = lift(can, t, x) - x;  // lift displacement near 0
            CHECK(disp > 0.0);  // no fixed point: map pushes strictly forward
        }
    }
}

TEST_CASE("family constructors reject bad parameters") {
    CHECK_THROWS_AS(MapFamily::canonical(0.0), DomainError);
    CHECK_THROWS_AS(MapFamily::canonical(0.28), DomainError);  // loses local diffeo
    CHECK_THROWS_AS(MapFamily::arnold(1.0), DomainError);
    CHECK_THROWS_AS(MapFamily::arnold(-0.5), DomainError);
    CHECK_THROWS_AS(MapFamily::canonical(0.2, 0.0), DomainError);
}
