#include "nwa/corpus.hpp"

#include "nwa/errors.hpp"
#include "nwa/format.hpp"

#include <regex>

namespace nwa {

namespace {

// Average response time: each r starts a forward count up to the next g.
constexpr const char* art_text = R"(nwa "art" {
  alphabet r, g, #;
  master {
    states m;
    initial m;
    accepting m;
    m -r-> m invoke 1;
    m -g-> m invoke 0;
    m -#-> m invoke 0;
  }
  slave 1 forward sumplus {
    states s, f;
    initial s;
    accepting f;
    s -r-> s : 1;
    s -#-> s : 1;
    s -g-> f : 0;
  }
}
)";

// Average waiting: every position counts r back to the last g, or to the
// word start when there is none.
constexpr const char* aw_text = R"(nwa "aw" {
  alphabet r, g, #;
  master {
    states m;
    initial m;
    accepting m;
    m -r-> m invoke -1;
    m -g-> m invoke -1;
    m -#-> m invoke -1;
  }
  slave -1 backward sumplus {
    states s, f;
    initial s;
    accepting f;
    atstart s;
    s -r-> s : 1;
    s -#-> s : 0;
    s -g-> f : 0;
  }
}
)";

constexpr const char* dcp_text = R"(nwa "dcp" {
  alphabet r, w, c, #;
  master {
    states m;
    initial m;
    accepting m;
    m -r-> m invoke -1;
    m -w-> m invoke 1;
    m -c-> m invoke 0;
    m -#-> m invoke 0;
  }
  slave -1 backward sumplus {
    states t, f;
    initial t;
    accepting f;
    t -r-> t : 1;
    t -w-> t : 1;
    t -#-> t : 1;
    t -c-> f : 0;
  }
  slave 1 forward sumplus {
    states s, f;
    initial s;
    accepting f;
    s -r-> s : 1;
    s -w-> s : 1;
    s -#-> s : 1;
    s -c-> f : 0;
  }
}
)";

constexpr const char* mr_text = R"(nwa "mr" {
  alphabet r, w, c, #;
  master {
    states m;
    initial m;
    accepting m;
    m -r-> m invoke -1;
    m -r-> m invoke 1;
    m -w-> m invoke -1;
    m -w-> m invoke 1;
    m -c-> m invoke 0;
    m -#-> m invoke 0;
  }
  slave -1 backward sumplus {
    states t, f;
    initial t;
    accepting f;
    t -r-> t : 1;
    t -w-> t : 1;
    t -#-> t : 1;
    t -c-> f : 0;
  }
  slave 1 forward sumplus {
    states s, f;
    initial s;
    accepting f;
    s -r-> s : 1;
    s -w-> s : 1;
    s -#-> s : 1;
    s -c-> f : 0;
  }
}
)";

// (a b* c)^ω with a forward count on a, a backward count on c and a unit
// zero-valued slave on every b.
constexpr const char* ex15_text = R"(nwa "ex15" {
  alphabet a, b, c;
  width 3;
  master {
    states m0, m1;
    initial m0;
    accepting m0;
    m0 -a-> m1 invoke 1;
    m1 -b-> m1 invoke 2;
    m1 -c-> m0 invoke -1;
  }
  slave -1 backward sum {
    states t0, t1, t2;
    initial t0;
    accepting t2;
    t0 -c-> t1 : 0;
    t1 -b-> t1 : 1;
    t1 -a-> t2 : 0;
  }
  slave 1 forward sum {
    states p0, p1, p2;
    initial p0;
    accepting p2;
    p0 -a-> p1 : 0;
    p1 -b-> p1 : 1;
    p1 -c-> p2 : 0;
  }
  slave 2 forward sum {
    states r0, r1;
    initial r0;
    accepting r1;
    r0 -b-> r1 : 0;
  }
}
)";

// Master accepts a b^ω; every slave walks back over b* to the a.
constexpr const char* ex6_text = R"(nwa "ex6" {
  alphabet a, b;
  master {
    states m0, m1;
    initial m0;
    accepting m1;
    m0 -a-> m1 invoke -1;
    m1 -b-> m1 invoke -1;
  }
  slave -1 backward sumplus {
    states s0, s1;
    initial s0;
    accepting s1;
    s0 -b-> s0 : 1;
    s0 -a-> s1 : 0;
  }
}
)";

// Energy levels: letters -3..+3, each invocation sums back to the word start.
std::string ae_text(const std::string& name, const std::string& fn) {
    const char* letters[] = {"-3", "-2", "-1", "0", "+1", "+2", "+3"};
    std::string t = "nwa \"" + name + "\" {\n  alphabet -3, -2, -1, 0, +1, +2, +3;\n  master {\n    states m;\n"
                    "    initial m;\n    accepting m;\n";
    for (const char* l : letters)
        t += std::string("    m -") + l + "-> m invoke -1;\n";
    t += "  }\n  slave -1 backward " + fn + " {\n    states s;\n    initial s;\n    atstart s;\n";
    for (int i = 0; i < 7; ++i)
        t += std::string("    s -") + letters[i] + "-> s : " + std::to_string(i - 3) + ";\n";
    t += "  }\n}\n";
    return t;
}

}  // namespace

Nwa corpus_build(const std::string& name) {
    if (name == "art")
        return parse_nwa(art_text);
    if (name == "aw")
        return parse_nwa(aw_text);
    if (name == "dcp")
        return parse_nwa(dcp_text);
    if (name == "mr")
        return parse_nwa(mr_text);
    if (name == "ex15")
        return parse_nwa(ex15_text);
    if (name == "ex6")
        return parse_nwa(ex6_text);
    if (name == "ae")
        return parse_nwa(ae_text("ae", "sum"));
    static const std::regex bounded(R"(ae_bounded\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
    std::smatch m;
    if (std::regex_match(name, m, bounded)) {
        std::int64_t lo = std::stoll(m[1]), hi = std::stoll(m[2]);
        ValueFunction f = ValueFunction::bsum(lo, hi);
        return parse_nwa(ae_text("ae_bounded(" + std::to_string(lo) + "," + std::to_string(hi) + ")", f.keyword()));
    }
    throw input_error("unknown corpus NWA '" + name + "' (known: art, aw, ae, ae_bounded(L,U), dcp, mr, ex15, ex6)");
}

std::vector<std::string> corpus_names() {
    return {"art", "aw", "ae", "ae_bounded(0,3)", "dcp", "mr", "ex15", "ex6"};
}

}  // namespace nwa
