// Folner averages: finite-orbit exactness against independent enumeration,
// convergence honesty, closure quadrature, and inner-product algebra.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "orbitkit/averaging.hpp"
#include "orbitkit/scenarios.hpp"

using namespace orbitkit;

TEST_CASE("irrational rotation averages vanish for pure harmonics") {
    ActionScenario sc = build_scenario("rotation");
    for (const char* fname : {"cos1", "sin1", "cos2", "sin2"}) {
        AverageReport rep = folner_average(sc, fname, sc.parse_point("circle:0.37"));
        INFO(fname);
        REQUIRE(rep.converged);
        REQUIRE(!rep.finite_orbit);
        REQUIRE(std::abs(rep.value) <= 5e-3);
        REQUIRE(rep.sup_norm <= 1.0 + 1e-12);
        for (std::size_t i = 1; i < rep.stages.size(); ++i)
            REQUIRE(rep.stages[i].first > rep.stages[i - 1].first);
    }
}

TEST_CASE("rational rotation means equal the orbit enumeration bit for bit") {
    ActionScenario sc = build_scenario("rational_rotation");
    Point x = sc.parse_point("circle:0.15");

    for (const char* fname : {"cos1", "cossq", "sin2"}) {
        AverageReport rep = folner_average(sc, fname, x);
        REQUIRE(rep.finite_orbit);
        REQUIRE(rep.orbit_cardinality == 7);

        // independent enumeration, same cyclic walk the fast path commits to
        const auto& fn = sc.function_named(fname).eval;
        GroupElement step{sc.id, {1}};
        GroupElement w = identity(sc.group, sc.id);
        cx sum{0.0, 0.0};
        for (int k = 0; k < 7; ++k) {
            sum += fn(sc.apply(w, x));
            w = compose(sc.group, w, step);
        }
        cx expected = sum / 7.0;
        INFO(fname);
        REQUIRE(rep.value.real() == expected.real());
        REQUIRE(rep.value.imag() == expected.imag());
    }
}

TEST_CASE("digit-flip level means equal the subgroup enumeration bit for bit") {
    ActionScenario sc = build_scenario("dyadic_product");
    Point x = sc.parse_point("level:3:101");

    AverageReport rep = folner_average(sc, "wsum", x);
    REQUIRE(rep.finite_orbit);
    REQUIRE(rep.orbit_cardinality == 8);

    const auto& fn = sc.function_named("wsum").eval;
    cx sum{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        Point p = x;
        for (int k = 0; k < 3; ++k)
            if ((i >> k) & 1) p.coords[static_cast<std::size_t>(k)] =
                1.0 - p.coords[static_cast<std::size_t>(k)];
        sum += fn(p);
    }
    cx expected = sum / 8.0;
    REQUIRE(rep.value.real() == expected.real());
    REQUIRE(rep.value.imag() == expected.imag());
}

TEST_CASE("closure quadrature integrates exactly representable harmonics") {
    ActionScenario sc = build_scenario("rotation");
    Point x = sc.parse_point("circle:0.81");
    AverageReport rep = orbit_closure_average(sc, "cossq", x);
    REQUIRE(rep.converged);
    REQUIRE(std::abs(rep.value - cx(0.5, 0.0)) <= 1e-9);

    // the closure does not depend on which orbit point parametrizes it
    Point y = sc.apply(GroupElement{sc.id, {5}}, x);
    AverageReport other = orbit_closure_average(sc, "cossq", y);
    REQUIRE(std::abs(rep.value - other.value) <= 1e-12);
}

TEST_CASE("starved averaging reports non-convergence instead of guessing") {
    ActionScenario sc = build_scenario("rotation");
    AveragingOptions opts;
    opts.tol = 1e-9;
    opts.n_max = 64;
    AverageReport rep = folner_average(sc, "cos1", sc.parse_point("circle:0.2"), opts);
    REQUIRE(!rep.converged);
    REQUIRE(rep.n_max_used == 64);
    REQUIRE(!rep.stages.empty());
    REQUIRE(std::isfinite(rep.value.real()));

    opts.tol = -1.0;
    REQUIRE_THROWS_AS(folner_average(sc, "cos1", sc.parse_point("circle:0.2"), opts),
                      std::domain_error);
}

TEST_CASE("inner products are conjugate-symmetric and positive") {
    ActionScenario sc = build_scenario("rotation");
    Point x = sc.parse_point("circle:0.05");

    AverageReport fg = inner_product(sc, "cos1", "sin2", x);
    AverageReport gf = inner_product(sc, "sin2", "cos1", x);
    REQUIRE(std::abs(fg.value - std::conj(gf.value)) <= 1e-12);

    for (const char* fname : {"cos1", "cossq", "sin1"}) {
        AverageReport ff = inner_product(sc, fname, fname, x);
        INFO(fname);
        REQUIRE(ff.value.real() >= -1e-12);
        REQUIRE(std::fabs(ff.value.imag()) <= 1e-15);
    }
}

TEST_CASE("sampled inner products respect the Cauchy-Schwarz bound") {
    ActionScenario sc = build_scenario("rotation");
    Point x = sc.parse_point("circle:0.42");
    const double slack = 1e-2;  // ten stage tolerances

    const char* names[] = {"one", "cos1", "sin1", "cos2", "cossq"};
    for (const char* f : names)
        for (const char* g : names) {
            double lhs = std::norm(inner_product(sc, f, g, x).value);
            double rhs = inner_product(sc, f, f, x).value.real() *
                         inner_product(sc, g, g, x).value.real();
            INFO(f << " vs " << g);
            REQUIRE(lhs <= rhs + slack);
        }
}

TEST_CASE("expectation fields are flat where the mean is continuous") {
    ActionScenario sc = build_scenario("rotation");
    FieldReport rep = expectation_field(sc, "cos1", sc.field_grid(40));
    REQUIRE(rep.grid.size() == 40);
    REQUIRE(rep.values.size() == 40);
    REQUIRE(rep.unconverged_count == 0);
    REQUIRE(!rep.jump_detected);
    for (const AverageReport& v : rep.values) REQUIRE(std::abs(v.value) <= 5e-3);
}

TEST_CASE("expectation fields flag the jump across the spiral") {
    ActionScenario sc = build_scenario("spiral_two_circles");
    AveragingOptions opts;
    opts.jump_window = 0.1;
    opts.jump_threshold = 0.1;
    FieldReport rep = expectation_field(sc, "z", sc.field_grid(120), opts);
    REQUIRE(rep.jump_detected);
    REQUIRE(rep.jump_magnitude > rep.jump_threshold);
    REQUIRE(rep.jump_i >= 0);
    REQUIRE(rep.jump_j >= 0);
    REQUIRE(rep.jump_i < static_cast<int>(rep.grid.size()));
    REQUIRE(rep.jump_j < static_cast<int>(rep.grid.size()));
}
