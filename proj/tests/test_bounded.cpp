#include "doctest.h"
#include "support/oracles.hpp"

#include "nwa/bounded.hpp"
#include "nwa/corpus.hpp"
#include "nwa/errors.hpp"
#include "nwa/evaluator.hpp"
#include "nwa/format.hpp"

#include <random>

using namespace nwa;

TEST_CASE("configuration graph of art") {
    Nwa art = corpus_build("art");
    KConfigGraph g = build_config_graph(art, 2);
    CHECK(g.nodes.size() == 3);
    CHECK(g.good_count() == 3);
    for (const auto& e : g.edges) {
        CHECK(g.nodes[e.target].occupied() <= 2);
        std::int64_t total = e.fresh_weight;
        for (auto w : e.fwd_weight)
            total += w;
        for (auto w : e.bwd_weight)
            total += w;
        CHECK(total == e.total);
    }
    std::string dot = to_dot(g, art);
    CHECK(dot.find("digraph") == 0);
    CHECK(dot.find("label=\"m | 1:s\"") != std::string::npos);
    CHECK(dot.find("r / invoke 1 / w=[1]") != std::string::npos);
}

TEST_CASE("bounded infimum on the corpus matches the cycle oracle") {
    struct Expect {
        const char* name;
        int k;
        const char* value;
    };
    for (auto [name, k, value] : {Expect{"art", 2, "1"}, Expect{"aw", 2, "0"}, Expect{"dcp", 2, "1"},
                                  Expect{"mr", 2, "1"}, Expect{"ex15", 3, "0"}, Expect{"ex6", 2, "+inf"}}) {
        Nwa n = corpus_build(name);
        EmptinessVerdict v = emptiness_bounded(n, k, 1);
        CHECK_MESSAGE(v.infimum.to_string() == value, name);
        KConfigGraph g = build_config_graph(n, k);
        CHECK(oracle::bounded_oracle(enumerate_simple_cycles(g)) == v.infimum);
    }
}

TEST_CASE("bounded witnesses evaluate to the infimum") {
    for (const char* name : {"art", "aw", "dcp", "ex15"}) {
        Nwa n = corpus_build(name);
        EmptinessVerdict v = emptiness_bounded(n, 3, 0);
        REQUIRE(v.witness);
        REQUIRE(v.infimum.is_finite());
        Evaluation e = evaluate_lasso(n, *v.witness);
        REQUIRE(e.value.is_finite());
        CHECK_MESSAGE(abs(e.value.value() - v.infimum.value()) <= Rational(1, 100), name);
    }
}

TEST_CASE("condition star") {
    for (const char* name : {"art", "aw", "dcp", "mr", "ex15", "ex6"})
        CHECK_MESSAGE(!condition_star(build_config_graph(corpus_build(name), 3)).has_value(), name);
    for (int loss = 1; loss <= 3; ++loss) {
        Nwa n = oracle::planted_negative_nwa(loss, loss);
        auto star = condition_star(build_config_graph(n, 2));
        REQUIRE(star);
        CHECK(star->gain < 0);
        CHECK(star->focus >= 1);
        EmptinessVerdict v = emptiness_bounded(n, 2, 0);
        CHECK(v.infimum.is_minus_infinity());
        REQUIRE(v.witness);
        Evaluation e = evaluate_lasso(n, *v.witness);
        REQUIRE(e.value.is_finite());
        CHECK(e.value.value() < -1000);
    }
}

TEST_CASE("random instances match the cycle oracle") {
    std::mt19937 rng(31);
    int compared = 0;
    for (int trial = 0; trial < 40 && compared < 15; ++trial) {
        Nwa n = oracle::random_sum_nwa(rng, trial);
        for (int k = 1; k <= 2; ++k) {
            KConfigGraph g = build_config_graph(n, k);
            if (g.good_count() > 40)
                continue;
            ExtendedValue expected = oracle::bounded_oracle(enumerate_simple_cycles(g));
            EmptinessVerdict v = emptiness_bounded(n, k, 0);
            CHECK_MESSAGE(v.infimum == expected, serialize_nwa(n), "k=", k);
            ++compared;
        }
    }
    CHECK(compared >= 10);
}

TEST_CASE("restriction realizability") {
    Nwa aw = corpus_build("aw");
    KConfigGraph g = build_config_graph(aw, 2);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (!g.good[v])
            continue;
        CHECK(restriction_realizable(g, static_cast<int>(v), 0));
        unsigned all = (1u << g.nodes[v].bwd.size()) - 1;
        CHECK(restriction_realizable(g, static_cast<int>(v), all));
    }
}

TEST_CASE("bounded method input checks") {
    CHECK_THROWS_AS(build_config_graph(corpus_build("ae_bounded(0,3)"), 2), input_error);
    CHECK_THROWS_AS(build_config_graph(corpus_build("art"), 0), input_error);
    CHECK_THROWS_AS(build_config_graph(corpus_build("dcp"), 6, 5), resource_error);
}
