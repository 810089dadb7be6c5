#include "doctest.h"
#include "support/oracles.hpp"

#include "nwa/automaton.hpp"
#include "nwa/graph.hpp"

#include <random>

using namespace nwa;

TEST_CASE("sccs of a small graph") {
    RatioGraph g;
    for (int i = 0; i < 4; ++i)
        g.add_node();
    g.add_edge(0, 1, 0);
    g.add_edge(1, 0, 0);
    g.add_edge(1, 2, 0);
    g.add_edge(2, 3, 0);
    g.add_edge(3, 2, 0);
    SccResult s = sccs(g);
    CHECK(s.members.size() == 2);
    CHECK(s.component[0] == s.component[1]);
    CHECK(s.component[2] == s.component[3]);
    CHECK(s.component[0] != s.component[2]);
}

TEST_CASE("min mean cycle agrees with cycle enumeration") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 150; ++trial) {
        RatioGraph g = oracle::random_graph(rng, 6, false);
        CycleResult r = min_mean_cycle(g);
        CHECK(r.value == oracle::min_mean(g));
        if (r.cycle) {
            CHECK(is_cycle(g, *r.cycle));
            CHECK(ExtendedValue(Rational(cycle_cost(g, *r.cycle), static_cast<std::int64_t>(r.cycle->size()))) ==
                  r.value);
        }
    }
}

TEST_CASE("min ratio cycle agrees with cycle enumeration") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        RatioGraph g = oracle::random_graph(rng, 6, true);
        CycleResult r = min_ratio_cycle(g);
        CHECK(r.value == oracle::min_ratio(g));
        if (r.cycle && r.value.is_finite()) {
            CHECK(is_cycle(g, *r.cycle));
            CHECK(ExtendedValue(Rational(cycle_cost(g, *r.cycle), cycle_count(g, *r.cycle))) == r.value);
        }
    }
}

TEST_CASE("negative cycle detection") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 150; ++trial) {
        RatioGraph g = oracle::random_graph(rng, 6, false);
        auto c = negative_cycle(g);
        bool expected = false;
        for (const auto& s : oracle::simple_cycles(g))
            expected = expected || cycle_cost(g, s) < 0;
        CHECK(c.has_value() == expected);
        if (c) {
            CHECK(is_cycle(g, *c));
            CHECK(cycle_cost(g, *c) < 0);
        }
    }
}

TEST_CASE("buchi ratio infimum needs the accepting set on the cycle") {
    // cheap loop at 1; at 2 a loop of cost 3 and a free round trip through 0
    RatioGraph g;
    for (int i = 0; i < 3; ++i)
        g.add_node();
    g.add_edge(0, 1, 0);
    g.add_edge(1, 1, -5);
    g.add_edge(0, 2, 0);
    g.add_edge(2, 2, 3);
    g.add_edge(2, 0, 0);
    std::vector<std::vector<bool>> acc{{false, false, true}};
    BuchiResult r = buchi_ratio_infimum(g, {0}, acc);
    CHECK(r.value == ExtendedValue::finite(0));
    acc = {{false, true, false}};
    CHECK(buchi_ratio_infimum(g, {0}, acc).value == ExtendedValue::finite(-5));
    acc = {{false, true, false}, {false, false, true}};
    CHECK(buchi_ratio_infimum(g, {0}, acc).value.is_plus_infinity());
}

TEST_CASE("shortest path returns empty when a source is a goal") {
    RatioGraph g;
    g.add_node();
    g.add_node();
    g.add_edge(0, 1, 0);
    auto p = shortest_path(g, {0}, [](int v) { return v == 0; }, [](int) { return true; });
    REQUIRE(p);
    CHECK(p->empty());
    auto q = shortest_path(g, {0}, [](int v) { return v == 1; }, [](int) { return true; });
    REQUIRE(q);
    CHECK(q->size() == 1);
    CHECK(!shortest_path(g, {1}, [](int v) { return v == 0; }, [](int) { return true; }));
}
