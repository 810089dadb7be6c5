// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "support/oracles.hpp"

#include "nwa/bounded.hpp"
#include "nwa/cli.hpp"
#include "nwa/corpus.hpp"
#include "nwa/determinize.hpp"
#include "nwa/errors.hpp"
#include "nwa/evaluator.hpp"
#include "nwa/format.hpp"
#include "nwa/graph.hpp"
#include "nwa/regular.hpp"
#include "nwa/width.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace nwa;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok)
            return;
        if (pass)
            detail = what;
        else if (detail.size() < 400)
            detail += "; " + what;
        pass = false;
    }
};

struct CliRun {
    int code;
    std::string out;
};

CliRun cli_run(const std::vector<std::string>& args, const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return {code, out.str()};
}

std::string str(const ExtendedValue& v) { return v.to_string(); }

std::vector<std::string> period_lines(const std::string& out) {
    std::vector<std::string> lines;
    std::istringstream s(out);
    for (std::string line; std::getline(s, line);)
        if (line.rfind("period ", 0) == 0)
            lines.push_back(line.substr(line.find(": ") + 2));
    return lines;
}

// 1: trace windows of art and aw
Outcome trace_windows() {
    Outcome o;
    struct Case {
        const char* name;
        const char* window;
    };
    for (auto [name, window] : {Case{"art", "⊥,6,⊥,⊥,3,2,⊥"}, Case{"aw", "0,1,1,1,2,3,3"}}) {
        std::string text = serialize_nwa(corpus_build(name));
        CliRun r = cli_run({"eval", "-", "--word", "| g r # # r r #", "--trace", "--trace-periods", "4"}, text);
        o.require(r.code == 0, std::string(name) + ": exit " + std::to_string(r.code));
        auto lines = period_lines(r.out);
        o.require(lines.size() == 4, std::string(name) + ": " + std::to_string(lines.size()) + " windows");
        for (const auto& l : lines)
            o.require(l == window, std::string(name) + ": window " + l);
    }
    return o;
}

// 2: AE on "2 -1 3 | -1 +1"
Outcome energy_example() {
    Outcome o;
    Nwa ae = corpus_build("ae");
    Evaluation e = evaluate_lasso(ae, parse_lasso("2 -1 3 | -1 +1", ae.alphabet));
    o.require(e.exact, "inexact");
    o.require(e.value == ExtendedValue::finite(4), "value " + str(e.value) + ", expected 4");
    return o;
}

// 3: width-3 example
Outcome width_three_example() {
    Outcome o;
    Nwa n = corpus_build("ex15");
    EmptinessVerdict v = emptiness_bounded(n, 3, 1);
    o.require(v.infimum == ExtendedValue::finite(1), "infimum " + str(v.infimum) + ", expected 1");
    o.require(v.yes, "no at lambda=1");
    o.require(!emptiness_bounded(n, 3, Rational(99, 100)).yes, "yes at lambda=99/100");
    if (v.witness) {
        Evaluation e = evaluate_lasso(n, *v.witness);
        bool close = e.value.is_finite() && abs(e.value.value() - 1) <= Rational(1, 100);
        o.require(close, "witness \"" + format_lasso(*v.witness, n.alphabet) + "\" evaluates to " + str(e.value));
    } else {
        o.require(false, "no witness");
    }
    for (int k : {1, 8, 32}) {
        std::string text = "| a";
        for (int i = 0; i < k; ++i)
            text += " b";
        text += " c";
        Evaluation e = evaluate_lasso(n, parse_lasso(text, n.alphabet));
        ExtendedValue want = ExtendedValue::finite(Rational(2 * k, k + 2));
        o.require(e.exact && e.value == want, "n=" + std::to_string(k) + ": " + str(e.value));
    }
    return o;
}

// 4: infinite width witness
Outcome infinite_width_example() {
    Outcome o;
    Nwa n = corpus_build("ex6");
    FiniteWidthResult r = check_finite_width(n);
    o.require(!r.finite, "verdict finite");
    if (!r.witness)
        return o.require(false, "no witness"), o;
    LassoWord w = parse_lasso(format_lasso(*r.witness, n.alphabet), n.alphabet);
    WidthMeasure m = measure_width(n, w, 128);
    o.require(m.infinite_width_suspect, "not flagged");
    o.require(m.hotspot && *m.hotspot == 1, "hotspot " + (m.hotspot ? std::to_string(*m.hotspot) : std::string("-")));
    bool growing = m.hotspot_counts.size() == 3 && m.hotspot_counts[0] < m.hotspot_counts[1] &&
                   m.hotspot_counts[1] < m.hotspot_counts[2];
    o.require(growing, "counts not increasing");
    return o;
}

// 5: bounded emptiness against simple-cycle enumeration
Outcome bounded_oracle_equivalence() {
    Outcome o;
    std::mt19937 rng(5);
    int compared = 0, minus_inf = 0;
    for (int trial = 0; compared < 50 && trial < 500; ++trial) {
        Nwa n = trial % 5 == 4 ? oracle::planted_negative_nwa(1 + trial % 3, trial) : oracle::random_sum_nwa(rng, trial);
        int k = 1 + trial % 2;
        KConfigGraph g = build_config_graph(n, k);
        if (g.good_count() > 200)
            continue;
        std::vector<CycleStats> cycles;
        try {
            cycles = enumerate_simple_cycles(g, 100'000);
        } catch (const resource_error&) {
            continue;
        }
        ExtendedValue expected = oracle::bounded_oracle(cycles);
        ExtendedValue got = emptiness_bounded(n, k, 0).infimum;
        o.require(got == expected, n.name + " k=" + std::to_string(k) + ": " + str(got) + " vs " + str(expected));
        minus_inf += expected.is_minus_infinity();
        ++compared;
    }
    o.require(compared == 50, "only " + std::to_string(compared) + " instances");
    o.require(minus_inf > 0, "no -inf instance");
    if (o.pass)
        o.detail = std::to_string(compared) + " instances, " + std::to_string(minus_inf) + " at -inf";
    return o;
}

Nwa parsed(const char* text) { return parse_nwa(text); }

// Regular instances whose optimal lasso is known.
std::vector<std::pair<Nwa, std::string>> crafted_regular() {
    std::vector<std::pair<Nwa, std::string>> out;
    out.emplace_back(corpus_build("ae_bounded(0,3)"), "| 0");
    out.emplace_back(corpus_build("ae_bounded(-2,2)"), "-2 | 0");
    out.emplace_back(parsed(R"(nwa "min1" {
  alphabet a, b;
  master {
    states m;
    initial m;
    accepting m;
    m -a-> m invoke 1;
    m -b-> m invoke 1;
  }
  slave 1 forward min {
    states s, f;
    initial s;
    accepting f;
    s -a-> f : 2;
    s -b-> f : -1;
  }
})"),
                     "| b");
    out.emplace_back(parsed(R"(nwa "max2" {
  alphabet a, b;
  master {
    states m0, m1;
    initial m0;
    accepting m0;
    m0 -a-> m1 invoke 1;
    m1 -a-> m1 invoke 1;
    m1 -b-> m0 invoke 1;
  }
  slave 1 forward max {
    states s, f;
    initial s;
    accepting f;
    s -a-> f : 3;
    s -b-> f : 1;
  }
})"),
                     "| a b");
    out.emplace_back(parsed(R"(nwa "bsum3" {
  alphabet a, b;
  master {
    states m;
    initial m;
    accepting m;
    m -a-> m invoke 1;
    m -b-> m invoke 0;
  }
  slave 1 forward bsum(-2,2) {
    states s, f;
    initial s;
    accepting f;
    s -a-> s : 1;
    s -b-> f : -1;
  }
})"),
                     "| a b b");
    return out;
}

bool accepts(const Automaton& a, const std::vector<int>& w) {
    int q = a.initial.front();
    for (int l : w) {
        int t = -1;
        for (std::size_t i = 0; i < a.transitions.size() && t < 0; ++i)
            if (a.transitions[i].source == q && a.transitions[i].letter == l)
                t = static_cast<int>(i);
        if (t < 0)
            return false;
        q = a.transitions[t].target;
    }
    return a.accepting[q];
}

// 6: regular reduction
Outcome regular_reduction() {
    Outcome o;
    std::mt19937 rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        Nwa n = oracle::random_regular_nwa(rng, trial);
        ExtendedValue inf = emptiness_regular(n, 0).infimum;
        DeterminizedNwa d = determinize(n);
        for (int k = 0; k < 100; ++k) {
            LassoWord w = oracle::random_lasso(rng, 2, 2, 3);
            LiftResult r = lift_search(d, w, w.period_length());
            o.require(!(r.value < inf), n.name + " on \"" + format_lasso(w, n.alphabet) + "\": " + str(r.value) +
                                            " below " + str(inf));
        }
        for (const auto& [j, s] : n.slaves) {
            ValueDecomposition dec = decompose_regular(n, j);
            for (const auto& w : oracle::all_words(2, 6)) {
                ExtendedValue v = value_of_finite_word(s.core, s.fn, w, false);
                ExtendedValue vs = value_of_finite_word(s.core, s.fn, w, true);
                int hits = 0, start_hits = 0;
                for (const auto& e : dec.entries) {
                    bool a = accepts(e.recognizer, w), b = accepts(e.start_recognizer, w);
                    o.require(a == (v == e.value), n.name + " slave " + std::to_string(j) + " entry " + str(e.value));
                    o.require(b == (vs == e.value),
                              n.name + " slave " + std::to_string(j) + " start entry " + str(e.value));
                    hits += a;
                    start_hits += b;
                }
                o.require(hits == !v.is_plus_infinity() && start_hits == !vs.is_plus_infinity(),
                          n.name + ": word of length " + std::to_string(w.size()) + " value " + str(v) + "/" + str(vs) +
                              " hits " + std::to_string(hits) + "/" + std::to_string(start_hits));
            }
        }
    }
    for (const auto& [n, text] : crafted_regular()) {
        ExtendedValue inf = emptiness_regular(n, 0).infimum;
        Evaluation e = evaluate_lasso(n, parse_lasso(text, n.alphabet));
        o.require(e.exact && e.value == inf, n.name + ": infimum " + str(inf) + ", lasso " + str(e.value));
    }
    return o;
}

// 7: condition (*)
Outcome condition_star_soundness() {
    Outcome o;
    for (int i = 0; i < 10; ++i) {
        Nwa n = oracle::planted_negative_nwa(1 + i % 4, i);
        KConfigGraph g = build_config_graph(n, 2);
        auto star = condition_star(g);
        o.require(star && star->gain < 0, n.name + ": no witness");
        EmptinessVerdict v = emptiness_bounded(n, 2, 0);
        if (!v.witness) {
            o.require(false, n.name + ": no pumped lasso");
            continue;
        }
        EvalOptions opts;
        opts.horizon = 4;
        Evaluation e = evaluate_lasso(n, *v.witness, opts);
        auto avg = partial_averages(e.trace, e.trace.size());
        bool below = !avg.empty() && *std::min_element(avg.begin(), avg.end()) < -1000;
        o.require(below, n.name + ": partial averages stay above -1000");
    }
    for (const auto& name : corpus_names()) {
        Nwa n = corpus_build(name);
        bool sumplus = !n.slaves.empty();
        for (const auto& [j, s] : n.slaves)
            sumplus = sumplus && s.fn == ValueFunction::sumplus();
        if (!sumplus)
            continue;
        o.require(!condition_star(build_config_graph(n, 3)), name + ": condition holds");
    }
    return o;
}

// 8: cycle algorithms
Outcome graph_oracles() {
    Outcome o;
    std::mt19937 rng(8);
    for (int i = 0; i < 200; ++i) {
        RatioGraph g = oracle::random_graph(rng, 8, i % 2 == 1);
        CycleResult mean = min_mean_cycle(g);
        CycleResult ratio = min_ratio_cycle(g);
        o.require(mean.value == oracle::min_mean(g), "graph " + std::to_string(i) + ": mean " + str(mean.value));
        o.require(ratio.value == oracle::min_ratio(g), "graph " + std::to_string(i) + ": ratio " + str(ratio.value));
        if (mean.cycle) {
            const Cycle& c = *mean.cycle;
            o.require(is_cycle(g, c) &&
                          ExtendedValue::finite(Rational(cycle_cost(g, c), static_cast<long long>(c.size()))) ==
                              mean.value,
                      "graph " + std::to_string(i) + ": mean cycle");
        }
    }
    return o;
}

// 9: determinization
Outcome determinization() {
    Outcome o;
    for (const auto& name : corpus_names()) {
        Nwa n = corpus_build(name);
        DeterminizedNwa d = determinize(n);
        o.require(validate(d.nwa).deterministic, name + ": not deterministic");
        o.require(barrier_bound(d.nwa).conf == barrier_bound(n).conf, name + ": conf changed");
    }
    std::mt19937 rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        Nwa n = oracle::random_forward_nwa(rng, trial);
        DeterminizedNwa d = determinize(n);
        o.require(barrier_bound(d.nwa).conf == barrier_bound(n).conf, n.name + ": conf changed");
        for (const char* text : {"| a", "| b", "| a b", "a | b", "| a a b"}) {
            LassoWord w = parse_lasso(text, n.alphabet);
            LiftResult r = lift_search(d, w, w.period_length());
            o.require(project_lasso(d, r.word) == canonical_lasso(w) || r.value.is_plus_infinity(),
                      n.name + ": lift does not project back");
            ExtendedValue runs = oracle::enumerated_run_minimum(n, w, 2);
            o.require(!(runs < r.value), n.name + " on \"" + std::string(text) + "\": lift " + str(r.value) +
                                             " above run " + str(runs));
        }
    }
    return o;
}

// 10: format stability and fuzzing
Outcome format_stability() {
    Outcome o;
    std::vector<std::string> texts;
    for (const auto& name : corpus_names()) {
        std::string once = serialize_nwa(corpus_build(name));
        std::string twice = serialize_nwa(parse_nwa(once));
        o.require(once == twice, name + ": not byte stable");
        texts.push_back(once);
    }
    std::mt19937 rng(10);
    const std::string noise = "{};,:-> \n#|$@+0123456789abcmsinvokeslaveforwardbackward()\"";
    int counts[5] = {};
    for (int i = 0; i < 10'000; ++i) {
        std::string t = texts[rng() % texts.size()];
        for (int m = 1 + static_cast<int>(rng() % 4); m > 0; --m) {
            std::size_t p = rng() % (t.size() + 1);
            switch (rng() % 4) {
                case 0:
                    if (p < t.size())
                        t.erase(p, 1 + rng() % 8);
                    break;
                case 1:
                    t.insert(p, 1, noise[rng() % noise.size()]);
                    break;
                case 2:
                    if (p < t.size())
                        t[p] = noise[rng() % noise.size()];
                    break;
                default: {
                    std::size_t q = rng() % (t.size() + 1);
                    t.insert(p, t.substr(std::min(p, q), 1 + rng() % 16));
                }
            }
        }
        int code = -1;
        try {
            code = cli_run({"validate"}, t).code;
        } catch (const std::exception& e) {
            o.require(false, std::string("escaped exception: ") + e.what());
        }
        o.require(code == 0 || code == 2 || code == 3, "exit code " + std::to_string(code));
        if (code >= 0 && code <= 4)
            ++counts[code];
    }
    if (o.pass)
        o.detail = "fuzz exits: 0=" + std::to_string(counts[0]) + " 3=" + std::to_string(counts[3]) +
                   " 2=" + std::to_string(counts[2]);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        double limit;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all{{1, 1, trace_windows},
                               {2, 1, energy_example},
                               {3, 10, width_three_example},
                               {4, 5, infinite_width_example},
                               {5, 60, bounded_oracle_equivalence},
                               {6, 120, regular_reduction},
                               {7, 30, condition_star_soundness},
                               {8, 10, graph_oracles},
                               {9, 60, determinization},
                               {10, 30, format_stability}};
    int failed = 0;
    for (const auto& c : all) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= c.limit)
            o.require(false, "over time limit");
        failed += !o.pass;
        std::ostringstream line;
        line.precision(3);
        line << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << std::fixed << secs << "s, limit "
             << std::defaultfloat << c.limit << "s)";
        if (!o.detail.empty())
            line << " " << o.detail;
        std::cout << line.str() << std::endl;
    }
    return failed;
}
