#include "doctest.h"

#include "nwa/corpus.hpp"
#include "nwa/errors.hpp"
#include "nwa/format.hpp"
#include "nwa/nwa.hpp"

#include <string>

using namespace nwa;

namespace {

const char* tiny = R"(nwa "tiny" {
  alphabet a, b;
  master {
    states m;
    initial m;
    accepting m;
    m -a-> m invoke 1;
    m -b-> m invoke 0;
  }
  slave 1 forward sum {
    states s, f;
    initial s;
    accepting f;
    s -a-> s : 2;
    s -b-> f : -1;
  }
}
)";

std::string error_of(const std::string& text) {
    try {
        parse_nwa(text);
    } catch (const input_error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parse a small NWA") {
    Nwa n = parse_nwa(tiny);
    CHECK(n.name == "tiny");
    CHECK(n.alphabet.size() == 2);
    CHECK(n.master.state_count() == 1);
    REQUIRE(n.slaves.count(1));
    CHECK(n.slave(1).fn == ValueFunction::sum());
    CHECK(n.slave(1).core.transitions.size() == 2);
    CHECK(is_deterministic(n));
}

TEST_CASE("serialize is a fixed point after one normalization") {
    for (const auto& name : corpus_names()) {
        Nwa n = corpus_build(name);
        std::string once = serialize_nwa(n);
        std::string twice = serialize_nwa(parse_nwa(once));
        CHECK_MESSAGE(once == twice, name);
    }
    std::string t = serialize_nwa(parse_nwa(tiny));
    CHECK(serialize_nwa(parse_nwa(t)) == t);
}

TEST_CASE("syntax errors carry line and column") {
    std::string bad = tiny;
    bad.replace(bad.find("invoke 1"), 8, "invoke x");
    std::string e = error_of(bad);
    CHECK(e.find("line 7") != std::string::npos);
    CHECK(e.find("col") != std::string::npos);
}

TEST_CASE("semantic errors are input errors") {
    std::string undeclared = tiny;
    undeclared.replace(undeclared.find("invoke 1"), 8, "invoke 2");
    CHECK_THROWS_AS(validate(parse_nwa(undeclared)), input_error);

    std::string direction = tiny;
    direction.replace(direction.find("slave 1 forward"), 15, "slave 1 backward");
    CHECK(error_of(direction).find("forward") != std::string::npos);

    std::string letter = tiny;
    letter.replace(letter.find("s -a-> s"), 8, "s -z-> s");
    CHECK(!error_of(letter).empty());

    CHECK(!error_of("").empty());
    CHECK(!error_of(std::string(tiny) + "junk").empty());
}

TEST_CASE("validation reports determinism per automaton") {
    CHECK(validate(corpus_build("art")).deterministic);
    CHECK(!validate(corpus_build("mr")).deterministic);
    for (const auto& name : corpus_names())
        CHECK_NOTHROW(validate(corpus_build(name)));

    Nwa n = parse_nwa(tiny);
    n.slaves.at(1).core.add_transition(1, 0, 0, 0);
    auto r = validate(n);
    CHECK(!r.deterministic);
    bool flagged = false;
    for (const auto& item : r.items)
        flagged = flagged || (!item.pass && item.check.find("slave 1") != std::string::npos);
    CHECK(flagged);
}

TEST_CASE("corpus shapes") {
    CHECK(corpus_build("art").slaves.count(1));
    CHECK(corpus_build("aw").slaves.count(-1));
    CHECK(corpus_build("ae").slave(-1).fn == ValueFunction::sum());
    CHECK(corpus_build("ae_bounded(0,3)").slave(-1).fn == ValueFunction::bsum(0, 3));
    CHECK(corpus_build("dcp").slaves.size() == 2);
    CHECK(corpus_build("ex15").declared_width == 3);
    CHECK_THROWS_AS(corpus_build("nope"), input_error);
    CHECK_THROWS_AS(corpus_build("ae_bounded(1,3)"), input_error);
}

TEST_CASE("lasso words") {
    Alphabet a({"a", "b", "+1", "-1"});
    LassoWord w = parse_lasso("a | b a", a);
    CHECK(w.prefix == std::vector<int>{0});
    CHECK(w.period == std::vector<int>{1, 0});
    CHECK(w.at(1) == 0);
    CHECK(w.at(2) == 1);
    CHECK(w.at(5) == 0);
    CHECK(format_lasso(w, a) == "a | b a");
    CHECK(parse_lasso("| 1 -1", a).period == std::vector<int>{2, 3});
    CHECK_THROWS_AS(parse_lasso("a b", a), input_error);
    CHECK_THROWS_AS(parse_lasso("a |", a), input_error);
    CHECK_THROWS_AS(parse_lasso("| z", a), input_error);
}

TEST_CASE("canonical lasso") {
    LassoWord w{{0, 1, 0}, {1, 0, 1, 0}};
    LassoWord c = canonical_lasso(w);
    CHECK(c.prefix.empty());
    CHECK(c.period == std::vector<int>{0, 1});
    LassoWord v{{2}, {3}};
    CHECK(canonical_lasso(v) == v);
}
