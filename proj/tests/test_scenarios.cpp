// Scenario construction, point syntax round trips, action algebra, and the
// declared isometry flags.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "orbitkit/scenarios.hpp"

using namespace orbitkit;

TEST_CASE("the bundled scenario list builds") {
    auto names = scenario_names();
    REQUIRE(names.size() == 7);
    for (const std::string& name : names) {
        ActionScenario sc = build_scenario(name);
        REQUIRE(sc.name == name);
        REQUIRE(sc.space.diameter() > 0.0);
        REQUIRE(!sc.catalog.empty());
        REQUIRE(!sc.expected_classification.empty());
        REQUIRE(static_cast<bool>(sc.apply_into));
        REQUIRE(static_cast<bool>(sc.orbit_generators));
        REQUIRE(static_cast<bool>(sc.perturb));
        REQUIRE(static_cast<bool>(sc.format_point));
        REQUIRE(static_cast<bool>(sc.parse_point));
    }
    REQUIRE_THROWS_AS(build_scenario("moebius"), std::domain_error);
}

TEST_CASE("scenario parameters are validated") {
    ScenarioSpec bad;
    bad.name = "rational_rotation";
    bad.params = {{"p", 2.0}, {"q", 4.0}};  // not coprime
    REQUIRE_THROWS_AS(build_scenario(bad), std::domain_error);

    ScenarioSpec angle;
    angle.name = "rotation";
    angle.params = {{"angle", 1.5}};
    REQUIRE_THROWS_AS(build_scenario(angle), std::domain_error);
}

TEST_CASE("point formatting round trips") {
    for (const std::string& name : scenario_names()) {
        ActionScenario sc = build_scenario(name);
        for (const Point& p : sc.space.sample_points(20, 9)) {
            Point q = sc.parse_point(sc.format_point(p));
            INFO(name << " point " << sc.format_point(p));
            REQUIRE(q.stratum == p.stratum);
            REQUIRE(sc.space.distance(p, q) <= 1e-9);
        }
        REQUIRE_THROWS_AS(sc.parse_point("nonsense"), std::domain_error);
    }
}

TEST_CASE("named catalog functions resolve and bogus names throw") {
    ActionScenario sc = build_scenario("rotation");
    REQUIRE(sc.function_named("cos1").name == "cos1");
    REQUIRE_THROWS_AS(sc.function_named("cos99"), std::domain_error);

    Point x = sc.parse_point("circle:0.25");
    REQUIRE(std::abs(sc.function_named("cos1").eval(x)) <= 1e-12);  // cos(pi/2)
    REQUIRE(std::abs(sc.function_named("sin1").eval(x) - cx(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("the action respects identity and composition") {
    for (const std::string& name : scenario_names()) {
        ActionScenario sc = build_scenario(name);
        GroupElement e = identity(sc.group, sc.id);
        auto pts = sc.space.sample_points(12, 31);
        Rng rng(41);
        auto pool = folner_set(sc.group, sc.group.kind == GroupDescriptor::Kind::InfiniteSumZ2
                                             ? 5
                                             : 3,
                               sc.id)
                        .elements;
        for (const Point& x : pts) {
            INFO(name);
            REQUIRE(sc.space.distance(sc.apply(e, x), x) <= 1e-12);
            for (int t = 0; t < 8; ++t) {
                const GroupElement& g = pool[rng.below(pool.size())];
                const GroupElement& h = pool[rng.below(pool.size())];
                Point lhs = sc.apply(compose(sc.group, g, h), x);
                Point rhs = sc.apply(g, sc.apply(h, x));
                REQUIRE(sc.space.distance(lhs, rhs) <= 1e-9);
            }
        }
    }
}

TEST_CASE("declared isometry flags match measured distortion") {
    for (const std::string& name : scenario_names()) {
        ActionScenario sc = build_scenario(name);
        auto pts = sc.space.sample_points(24, 13);
        auto pool = folner_set(sc.group, sc.group.kind == GroupDescriptor::Kind::InfiniteSumZ2
                                             ? 5
                                             : 3,
                               sc.id)
                        .elements;
        Rng rng(7);
        double worst_global = 0.0, worst_stratum = 0.0;
        for (int t = 0; t < 400; ++t) {
            const Point& x = pts[rng.below(pts.size())];
            const Point& y = pts[rng.below(pts.size())];
            const GroupElement& g = pool[rng.below(pool.size())];
            double before = sc.space.distance(x, y);
            double after = sc.space.distance(sc.apply(g, x), sc.apply(g, y));
            double gap = std::fabs(after - before);
            worst_global = std::max(worst_global, gap);
            if (x.stratum == y.stratum) worst_stratum = std::max(worst_stratum, gap);
        }
        INFO(name);
        if (sc.flags.isometric_action) REQUIRE(worst_global <= 1e-9);
        if (sc.flags.stratum_isometric) REQUIRE(worst_stratum <= 1e-9);
    }
}

TEST_CASE("digit-flip translations move points across strata nowhere") {
    ActionScenario sc = build_scenario("dyadic_product");
    auto pool = folner_set(sc.group, 6, sc.id).elements;
    for (const Point& x : sc.space.sample_points(20, 19))
        for (std::size_t k = 0; k < pool.size(); k += 7)
            REQUIRE(sc.apply(pool[k], x).stratum == x.stratum);
}

TEST_CASE("subset specs parse where declared") {
    ActionScenario rot = build_scenario("rotation");
    CompactSubset arc = rot.subset_from_spec("arc:0.5:0.1");
    REQUIRE(!arc.witness_sample.empty());
    for (const Point& w : arc.witness_sample) REQUIRE(arc.indicator(w));
    REQUIRE_THROWS_AS(rot.subset_from_spec("blob:1"), std::domain_error);

    ActionScenario dya = build_scenario("dyadic_product");
    CompactSubset cyl = dya.subset_from_spec("cyl:10");
    REQUIRE(!cyl.witness_sample.empty());
    for (const Point& w : cyl.witness_sample) {
        REQUIRE(cyl.indicator(w));
        REQUIRE(w.stratum == 0);
    }
    REQUIRE_THROWS_AS(dya.subset_from_spec("cyl:12"), std::domain_error);

    ActionScenario spi = build_scenario("spiral_two_circles");
    REQUIRE(!static_cast<bool>(spi.subset_from_spec));
}
