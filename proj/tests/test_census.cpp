// Orbit probes, the sampled census, and the classification rules.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "orbitkit/census.hpp"
#include "orbitkit/scenarios.hpp"

using namespace orbitkit;

namespace {

bool mentions(const ModuleClassification& c, const std::string& needle) {
    for (const auto& r : c.reasons)
        if (r.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("orbit probes count finite orbits exactly") {
    ActionScenario sc = build_scenario("rational_rotation");
    Point x = sc.parse_point("circle:0.3");
    OrbitProbe probe = orbit_probe(sc, x);
    REQUIRE(probe.finite);
    REQUIRE(probe.cardinality == 7);
    REQUIRE(probe.visited.size() == 7);
    REQUIRE(probe.words.size() == 7);
    for (std::size_t i = 0; i < probe.visited.size(); ++i)
        REQUIRE(sc.space.distance(sc.apply(probe.words[i], x), probe.visited[i]) <= 1e-12);
    REQUIRE(probe.diameter_estimate <= sc.space.diameter() + 1e-12);

    // the verdict is stable under a larger budget
    OrbitProbe wide = orbit_probe(sc, x, 4 * 7);
    REQUIRE(wide.finite);
    REQUIRE(wide.cardinality == 7);
}

TEST_CASE("orbit probes flag dense orbits as infinite at resolution") {
    ActionScenario sc = build_scenario("rotation");
    OrbitProbe probe = orbit_probe(sc, sc.parse_point("circle:0.3"), 512);
    REQUIRE(!probe.finite);
    REQUIRE(probe.visited.size() >= 512);
}

TEST_CASE("digit-flip levels have power-of-two orbits and the apex is fixed") {
    ActionScenario dya = build_scenario("dyadic_product");
    OrbitProbe level5 = orbit_probe(dya, dya.parse_point("level:5:0"));
    REQUIRE(level5.finite);
    REQUIRE(level5.cardinality == 32);

    ActionScenario cone = build_scenario("triple_cone");
    OrbitProbe apex = orbit_probe(cone, cone.parse_point("apex"));
    REQUIRE(apex.finite);
    REQUIRE(apex.cardinality == 1);
}

TEST_CASE("the census separates finite and clustered infinite orbits") {
    ActionScenario rot = build_scenario("rotation");
    OrbitCensus a = census(rot, 16);
    REQUIRE(a.finite_cardinalities.empty());
    REQUIRE(a.infinite_cluster_count == 1);
    REQUIRE(a.cluster_representatives.size() == 1);
    REQUIRE(a.cluster_sizes.size() == 1);
    REQUIRE(a.cluster_sizes[0] == 16);

    ActionScenario rat = build_scenario("rational_rotation");
    OrbitCensus b = census(rat, 20);
    REQUIRE(b.infinite_cluster_count == 0);
    REQUIRE(b.finite_cardinalities.size() == 20);
    for (long long c : b.finite_cardinalities) REQUIRE(c == 7);
}

TEST_CASE("growing the sample refines the census monotonically") {
    ActionScenario sc = build_scenario("dyadic_product");
    CensusOptions opts;
    OrbitCensus small = census(sc, 12, opts);
    OrbitCensus large = census(sc, 24, opts);
    REQUIRE(small.sample_size == 12);
    REQUIRE(large.sample_size == 24);

    // sorted multiset inclusion: every small cardinality appears in large
    std::size_t j = 0;
    for (long long c : small.finite_cardinalities) {
        while (j < large.finite_cardinalities.size() && large.finite_cardinalities[j] < c) ++j;
        REQUIRE(j < large.finite_cardinalities.size());
        REQUIRE(large.finite_cardinalities[j] == c);
        ++j;
    }
    REQUIRE(large.infinite_cluster_count >= small.infinite_cluster_count);
}

TEST_CASE("the cone census sees the apex under an overflowing pile of closures") {
    ActionScenario sc = build_scenario("triple_cone");
    OrbitCensus cen = census(sc, 60);
    REQUIRE(!cen.finite_cardinalities.empty());
    for (long long c : cen.finite_cardinalities) REQUIRE(c == 1);
    REQUIRE(cen.infinite_cluster_count > ClassifyOptions{}.cluster_bound);
    int clustered = 0;
    for (int s : cen.cluster_sizes) clustered += s;
    clustered += static_cast<int>(cen.finite_cardinalities.size());
    REQUIRE(clustered == 60);

    ModuleClassification c = classify_module(cen, sc.flags);
    REQUIRE(c.label == ModuleLabel::NotSelfDualSelfDualFails);
    REQUIRE(mentions(c, "rule:closure-count-overflow"));
    REQUIRE(mentions(c, "rule:metric-stable-reflexive"));
}

TEST_CASE("classification labels print") {
    REQUIRE(std::string(to_string(ModuleLabel::SelfDual)) == "SelfDual");
    REQUIRE(std::string(to_string(ModuleLabel::NotSelfDualSelfDualFails)) ==
            "NotSelfDual-SelfDualFails");
    REQUIRE(std::string(to_string(ModuleLabel::Reflexive)) == "Reflexive");
    REQUIRE(std::string(to_string(ModuleLabel::Inconclusive)) == "Inconclusive");
}

TEST_CASE("equal finite orbits with few closures classify self-dual") {
    OrbitCensus cen;
    cen.finite_cardinalities = {3, 3, 3};
    cen.infinite_cluster_count = 2;
    ScenarioFlags flags;
    ModuleClassification c = classify_module(cen, flags);
    REQUIRE(c.label == ModuleLabel::SelfDual);
    REQUIRE(mentions(c, "rule:equal-finite-orbits"));

    // vacuously equal: no finite orbits at all
    OrbitCensus dense;
    dense.infinite_cluster_count = 1;
    REQUIRE(classify_module(dense, flags).label == ModuleLabel::SelfDual);
}

TEST_CASE("closure overflow above a finite orbit refutes self-duality") {
    OrbitCensus cen;
    cen.finite_cardinalities = {5, 5};
    cen.infinite_cluster_count = 7;
    ScenarioFlags flags;
    flags.metric_space = false;
    ModuleClassification c = classify_module(cen, flags);
    REQUIRE(c.label == ModuleLabel::NotSelfDualSelfDualFails);
    REQUIRE(mentions(c, "rule:closure-count-overflow"));
    REQUIRE(!mentions(c, "rule:metric-stable-reflexive"));

    // on a stable metric fixture the dual stays tame even though self-duality fails
    ScenarioFlags stable;
    stable.lyapunov_stable = true;
    ModuleClassification d = classify_module(cen, stable);
    REQUIRE(d.label == ModuleLabel::NotSelfDualSelfDualFails);
    REQUIRE(mentions(d, "rule:metric-stable-reflexive"));
}

TEST_CASE("bounded varying finite orbits classify reflexive when stable") {
    OrbitCensus cen;
    cen.finite_cardinalities = {2, 4};
    cen.infinite_cluster_count = 0;
    ScenarioFlags flags;
    flags.metric_space = false;
    flags.lyapunov_stable = true;
    flags.finite_card_bound = 4;
    ModuleClassification c = classify_module(cen, flags);
    REQUIRE(c.label == ModuleLabel::Reflexive);
    REQUIRE(mentions(c, "rule:bounded-finite-orbits"));
}

TEST_CASE("a stable metric action is reflexive even with wild orbit data") {
    OrbitCensus cen;
    cen.finite_cardinalities = {2, 4};
    cen.infinite_cluster_count = 9;
    ScenarioFlags flags;
    flags.lyapunov_stable = true;
    ModuleClassification c = classify_module(cen, flags);
    REQUIRE(c.label == ModuleLabel::Reflexive);
    REQUIRE(mentions(c, "rule:metric-stable-reflexive"));
}

TEST_CASE("without stability or bounds the census stays inconclusive") {
    OrbitCensus cen;
    cen.finite_cardinalities = {2, 4};
    cen.infinite_cluster_count = 9;
    ScenarioFlags flags;
    flags.metric_space = false;
    ModuleClassification c = classify_module(cen, flags);
    REQUIRE(c.label == ModuleLabel::Inconclusive);
    REQUIRE(!c.reasons.empty());
}
