#include "doctest.h"
#include "support/oracles.hpp"

#include "nwa/corpus.hpp"
#include "nwa/determinize.hpp"
#include "nwa/errors.hpp"
#include "nwa/evaluator.hpp"
#include "nwa/format.hpp"
#include "nwa/width.hpp"

#include <random>

using namespace nwa;

TEST_CASE("determinized corpus is deterministic and keeps conf") {
    for (const auto& name : corpus_names()) {
        Nwa n = corpus_build(name);
        DeterminizedNwa d = determinize(n);
        CHECK_MESSAGE(validate(d.nwa).deterministic, name);
        CHECK(!d.states_added);
        CHECK(barrier_bound(d.nwa).conf == barrier_bound(n).conf);
    }
}

TEST_CASE("deterministic input gets one steering letter per letter") {
    Nwa art = corpus_build("art");
    DeterminizedNwa d = determinize(art);
    CHECK(d.nwa.alphabet.size() == art.alphabet.size());
    LassoWord w = parse_lasso("| g r # # r r #", art.alphabet);
    LiftResult r = lift_search(d, w, w.period_length());
    CHECK(r.tried == 1);
    CHECK(project_lasso(d, r.word) == w);
    CHECK(r.value == evaluate_lasso(art, w).value);
}

TEST_CASE("mr steering") {
    Nwa mr = corpus_build("mr");
    DeterminizedNwa d = determinize(mr);
    CHECK(d.nwa.alphabet.size() == 6);
    CHECK(d.sidecar().find("h0: m->m:-1") == 0);
    LiftResult r = lift_search(d, parse_lasso("| r c", mr.alphabet), 4);
    CHECK(r.value == ExtendedValue::finite(1));
    CHECK(!r.non_exhaustive);
    CHECK(project_lasso(d, r.word) == canonical_lasso(project_lasso(d, r.word)));
}

TEST_CASE("two-run toy takes the cheaper run") {
    // one master state, two ways to read a: invoke a slave worth 1 or one worth 3
    Nwa n;
    n.name = "toy";
    n.alphabet = Alphabet({"a"});
    n.master.add_state("m");
    n.master.initial = {0};
    n.master.accepting[0] = true;
    n.master.add_transition(0, 0, 0, 1);
    n.master.add_transition(0, 0, 0, 2);
    for (int j : {1, 2}) {
        Slave s;
        s.index = j;
        s.fn = ValueFunction::sum();
        s.core.add_state("s");
        s.core.add_state("f");
        s.core.initial = {0};
        s.core.accepting[1] = true;
        s.core.add_transition(0, 0, 1, j == 1 ? 1 : 3);
        n.slaves.emplace(j, s);
    }
    DeterminizedNwa d = determinize(n);
    CHECK(d.nwa.alphabet.size() == 2);
    LiftResult r = lift_search(d, parse_lasso("| a", n.alphabet), 2);
    CHECK(r.value == ExtendedValue::finite(1));
    CHECK(r.tried == 2 + 4);
}

TEST_CASE("normalization of initial and accepting states") {
    Nwa n = parse_nwa(R"(nwa "norm" {
  alphabet a, b;
  master {
    states p, q;
    initial p, q;
    accepting p;
    p -a-> p invoke 1;
    q -b-> p invoke 0;
  }
  slave 1 forward sumplus {
    states s, t;
    initial s;
    accepting t;
    s -a-> t : 1;
    t -a-> t : 2;
    t -b-> s : 0;
  }
})");
    DeterminizedNwa d = determinize(n);
    CHECK(d.states_added);
    CHECK(validate(d.nwa).deterministic);
    CHECK(d.nwa.master.initial.size() == 1);
    CHECK(serialize_nwa(parse_nwa(serialize_nwa(d.nwa))) == serialize_nwa(d.nwa));

    Nwa bad = n;
    bad.slaves.at(1).core.accepting[0] = true;
    CHECK_THROWS_AS(determinize(bad), input_error);
}

TEST_CASE("steering alphabet cap") {
    Nwa mr = corpus_build("mr");
    CHECK_THROWS_AS(determinize(mr, 3), resource_error);
}

TEST_CASE("lift search dominates enumerated runs on small instances") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 6; ++trial) {
        Nwa n = oracle::random_forward_nwa(rng, trial);
        DeterminizedNwa d = determinize(n);
        for (const char* text : {"| a", "| b", "| a b", "a | b"}) {
            LassoWord w = parse_lasso(text, n.alphabet);
            LiftResult r = lift_search(d, w, w.period_length());
            ExtendedValue runs = oracle::enumerated_run_minimum(n, w, 2);
            CHECK_MESSAGE(!(runs < r.value), serialize_nwa(n), text);
        }
    }
}
