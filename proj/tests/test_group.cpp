// Group words, Folner sets, and the index helpers that size them.

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "orbitkit/group.hpp"

using namespace orbitkit;

namespace {

std::set<std::vector<std::int64_t>> word_set(const FolnerSet& f) {
    std::set<std::vector<std::int64_t>> s;
    for (const auto& e : f.elements) s.insert(e.word);
    return s;
}

}  // namespace

TEST_CASE("integer group words compose and invert") {
    auto g = GroupDescriptor::free_abelian(1);
    GroupElement e = identity(g, 9);
    REQUIRE(e.word == std::vector<std::int64_t>{0});
    REQUIRE(e.group_id == 9);

    GroupElement a{9, {2}}, b{9, {3}};
    REQUIRE(compose(g, a, b).word == std::vector<std::int64_t>{5});
    REQUIRE(inverse(g, compose(g, a, b)).word == std::vector<std::int64_t>{-5});
    REQUIRE(compose(g, a, inverse(g, a)) == e);
}

TEST_CASE("finite cyclic words wrap modulo the order") {
    auto g = GroupDescriptor::finite_cyclic(3);
    GroupElement a{0, {2}}, b{0, {2}};
    REQUIRE(compose(g, a, b).word == std::vector<std::int64_t>{1});
    REQUIRE(inverse(g, a).word == std::vector<std::int64_t>{1});
    REQUIRE(folner_size(g, 0) == 3);
    REQUIRE(folner_size(g, 10) == 3);
}

TEST_CASE("digit-flip words are self-inverse and compose by parity") {
    auto g = GroupDescriptor::infinite_sum_z2();
    GroupElement a{0, {1, 0, 1}}, b{0, {1}};
    GroupElement ab = compose(g, a, b);
    REQUIRE(ab.word == std::vector<std::int64_t>{0, 0, 1});
    REQUIRE(inverse(g, a) == a);
    REQUIRE(compose(g, a, a) == identity(g));

    auto f = folner_set(g, 3);
    REQUIRE(f.elements.size() == 8);
    REQUIRE(word_set(f).size() == 8);
    REQUIRE(f.elements.front() == identity(g));
}

TEST_CASE("Folner intervals grow and absorb translation") {
    auto g = GroupDescriptor::free_abelian(1);
    REQUIRE(folner_size(g, 4) == 9);

    auto f = folner_set(g, 100);
    REQUIRE(f.elements.size() == 201);
    auto words = word_set(f);
    REQUIRE(words.count({0}) == 1);

    // shifting the interval by a generator displaces exactly the two ends
    GroupElement gen{0, {1}};
    int moved_out = 0;
    for (const auto& e : f.elements)
        if (words.count(compose(g, e, gen).word) == 0) ++moved_out;
    REQUIRE(moved_out == 1);
    double ratio = 2.0 * moved_out / static_cast<double>(f.elements.size());
    REQUIRE(ratio < 0.01);
}

TEST_CASE("product group Folner sets are boxes") {
    auto g = GroupDescriptor::direct_sum(
        {GroupDescriptor::finite_cyclic(3), GroupDescriptor::free_abelian(1)});
    REQUIRE(folner_size(g, 1) == 9);
    REQUIRE(folner_size(g, 2) == 15);

    auto f = folner_set(g, 1);
    REQUIRE(f.elements.size() == 9);
    GroupElement a{0, {2, 5}}, b{0, {2, -1}};
    REQUIRE(compose(g, a, b).word == std::vector<std::int64_t>{1, 4});
    REQUIRE(inverse(g, a).word == std::vector<std::int64_t>{1, -5});
}

TEST_CASE("index helpers bracket the requested sizes") {
    auto z = GroupDescriptor::free_abelian(1);
    int w = folner_index_within(z, 1000);
    REQUIRE(folner_size(z, w) <= 1000);
    REQUIRE(folner_size(z, w + 1) > 1000);

    int r = folner_index_reaching(z, 1000);
    REQUIRE(folner_size(z, r) >= 1000);
    REQUIRE(folner_size(z, r - 1) < 1000);

    // finite groups plateau instead of looping forever
    auto c = GroupDescriptor::finite_cyclic(3);
    REQUIRE(folner_size(c, folner_index_reaching(c, 1000)) == 3);

    auto z2 = GroupDescriptor::infinite_sum_z2();
    REQUIRE(folner_size(z2, folner_index_reaching(z2, 1000)) == 1024);
}

TEST_CASE("oversized Folner sets refuse to materialize") {
    auto z2 = GroupDescriptor::infinite_sum_z2();
    REQUIRE_THROWS_AS(folner_set(z2, 40), resource_error);
}

TEST_CASE("generators come in inverse pairs") {
    auto z = GroupDescriptor::free_abelian(1);
    auto gens = generators(z, 3);
    REQUIRE(gens.size() == 2);
    REQUIRE(compose(z, gens[0], gens[1]) == identity(z, 3));
    for (const auto& e : gens) REQUIRE(e.group_id == 3);
}
