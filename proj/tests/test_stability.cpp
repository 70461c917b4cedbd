// Stability probes on rigid and shearing actions, and almost periodicity of
// function translates.

#include <catch2/catch_amalgamated.hpp>

#include "orbitkit/scenarios.hpp"
#include "orbitkit/stability.hpp"

using namespace orbitkit;

TEST_CASE("rigid rotations pass the stability probe at every scale") {
    ActionScenario sc = build_scenario("rotation");
    Point x = sc.parse_point("circle:0.2");
    for (double eps : {0.01, 0.1, 0.5}) {
        StabilityReport rep = stability_probe(sc, x, eps);
        INFO("eps " << eps);
        REQUIRE(rep.stable_at_resolution());
        REQUIRE(!rep.witness.has_value());
        REQUIRE(rep.delta_estimate == rep.probe_radius);
        REQUIRE(rep.trials_used == StabilityOptions{}.trials);
    }

    StabilityReport rep = stability_probe(sc, x, 0.1);
    REQUIRE(rep.horizon_index == 32767);
    REQUIRE(rep.horizon_size == 65535);
}

TEST_CASE("the spiral shears nearby points apart") {
    ActionScenario sc = build_scenario("spiral_two_circles");
    StabilityReport rep = stability_probe(sc, sc.parse_point("sigma:0.5"), 1.0);
    REQUIRE(!rep.stable_at_resolution());
    REQUIRE(rep.witness.has_value());
    REQUIRE(rep.witness->base_distance < rep.probe_radius);
    REQUIRE(rep.witness->attained_distance >= 1.0);
    REQUIRE(rep.delta_estimate <= rep.witness->base_distance);
}

TEST_CASE("level-dependent rotation speeds break stability on the cylinder") {
    ActionScenario sc = build_scenario("varying_angle_cylinder");
    StabilityReport rep = stability_probe(sc, sc.parse_point("level:6:0.1"), 0.5);
    REQUIRE(!rep.stable_at_resolution());
    REQUIRE(rep.witness.has_value());
    REQUIRE(rep.witness->attained_distance >= 0.5);
    REQUIRE(rep.witness->base_distance < rep.witness->attained_distance);
}

TEST_CASE("stabilizer scans count the elements fixing the base point") {
    ActionScenario rot = build_scenario("rotation");
    StabilityReport free_orbit = uniform_continuity_probe(rot, rot.parse_point("circle:0.2"), 0.1);
    REQUIRE(free_orbit.stable_at_resolution());
    REQUIRE(free_orbit.stabilizer_size == 1);  // only the identity fixes a free orbit

    ActionScenario dya = build_scenario("dyadic_product");
    StabilityReport digits = uniform_continuity_probe(dya, dya.parse_point("level:3:0"), 0.5);
    REQUIRE(digits.stabilizer_size == 8192);  // flips beyond the level prefix
}

TEST_CASE("harmonic translates on the circle form a small net") {
    ActionScenario sc = build_scenario("rotation");
    AlmostPeriodicityReport rep =
        almost_periodicity_test(sc, "cos1", sc.parse_point("circle:0.1"), 0.2);
    REQUIRE(rep.almost_periodic);
    REQUIRE(rep.net_size <= rep.net_cap);
    REQUIRE(rep.family.size() == static_cast<std::size_t>(rep.net_size));
    REQUIRE(rep.translates.size() == static_cast<std::size_t>(rep.translate_count));
    for (int idx : rep.family) {
        REQUIRE(idx >= 0);
        REQUIRE(idx < static_cast<int>(rep.translates.size()));
    }
}

TEST_CASE("height translates through the spiral refuse to be totally bounded") {
    ActionScenario sc = build_scenario("spiral_two_circles");
    AlmostPeriodicityOptions opts;
    opts.net_cap = 20;
    AlmostPeriodicityReport rep =
        almost_periodicity_test(sc, "z", sc.parse_point("sigma:0"), 0.4, opts);
    REQUIRE(!rep.almost_periodic);
    REQUIRE(rep.net_size > opts.net_cap);
    REQUIRE(static_cast<int>(rep.family.size()) > 20);
}

TEST_CASE("probe options are validated") {
    ActionScenario sc = build_scenario("rotation");
    Point x = sc.parse_point("circle:0.2");
    REQUIRE_THROWS_AS(stability_probe(sc, x, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(almost_periodicity_test(sc, "cos1", x, -0.1), std::domain_error);
}
