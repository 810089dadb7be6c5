#pragma once

// Brute-force reference computations and random instance generators shared
// by the unit tests and the acceptance binary.

#include "nwa/bounded.hpp"
#include "nwa/evaluator.hpp"
#include "nwa/graph.hpp"
#include "nwa/nwa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using namespace nwa;

// Every simple cycle, each listed once starting from its least node.
inline std::vector<Cycle> simple_cycles(const RatioGraph& g) {
    auto out = g.outgoing();
    std::vector<Cycle> cycles;
    std::vector<int> path;
    std::vector<char> on(g.node_count, 0);
    for (int s = 0; s < g.node_count; ++s) {
        std::function<void(int)> dfs = [&](int v) {
            on[v] = 1;
            for (int e : out[v]) {
                int t = g.edges[e].target;
                path.push_back(e);
                if (t == s)
                    cycles.push_back(path);
                else if (t > s && !on[t])
                    dfs(t);
                path.pop_back();
            }
            on[v] = 0;
        };
        dfs(s);
    }
    return cycles;
}

inline ExtendedValue min_mean(const RatioGraph& g) {
    ExtendedValue best = ExtendedValue::plus_infinity();
    for (const auto& c : simple_cycles(g)) {
        ExtendedValue v(Rational(cycle_cost(g, c), static_cast<std::int64_t>(c.size())));
        if (v < best)
            best = v;
    }
    return best;
}

inline ExtendedValue min_ratio(const RatioGraph& g) {
    ExtendedValue best = ExtendedValue::plus_infinity();
    for (const auto& c : simple_cycles(g)) {
        auto cost = cycle_cost(g, c);
        auto count = cycle_count(g, c);
        if (count == 0) {
            if (cost < 0)
                return ExtendedValue::minus_infinity();
            continue;
        }
        ExtendedValue v(Rational(cost, count));
        if (v < best)
            best = v;
    }
    return best;
}

inline RatioGraph random_graph(std::mt19937& rng, int max_nodes, bool zero_counts) {
    std::uniform_int_distribution<int> nodes(1, max_nodes), cost(-5, 5), count(zero_counts ? 0 : 1, 3);
    RatioGraph g;
    int n = nodes(rng);
    for (int i = 0; i < n; ++i)
        g.add_node();
    std::uniform_int_distribution<int> pick(0, n - 1), edges(n, 3 * n);
    for (int e = edges(rng); e > 0; --e) {
        int c = count(rng);
        // zero-count edges stay nonnegative most of the time so ratios stay finite
        int w = cost(rng);
        if (c == 0 && w < 0 && rng() % 4 != 0)
            w = -w;
        g.add_edge(pick(rng), pick(rng), w, c);
    }
    return g;
}

// Value of a finite word by enumerating every run.
inline ExtendedValue runs_value(const Automaton& a, const ValueFunction& f, const std::vector<int>& word,
                                bool reaches_start) {
    ExtendedValue best = ExtendedValue::plus_infinity();
    bool empty_accepted = false;
    std::vector<std::int64_t> weights;
    std::function<void(int, std::size_t)> walk = [&](int q, std::size_t i) {
        if (i == word.size()) {
            if (a.accepting[q] || (reaches_start && a.at_start[q])) {
                ExtendedValue v = apply_value_function(f, weights);
                if (v.is_bottom())
                    empty_accepted = true;
                else if (v < best)
                    best = v;
            }
            return;
        }
        for (const auto& t : a.transitions)
            if (t.source == q && t.letter == word[i]) {
                weights.push_back(t.label);
                walk(t.target, i + 1);
                weights.pop_back();
            }
    };
    for (int q : a.initial)
        walk(q, 0);
    if (empty_accepted && word.empty())
        return ExtendedValue::bottom();
    return best;
}

inline std::vector<std::vector<int>> all_words(int letters, int max_length) {
    std::vector<std::vector<int>> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (static_cast<int>(out[i].size()) == max_length)
            continue;
        for (int a = 0; a < letters; ++a) {
            auto w = out[i];
            w.push_back(a);
            out.push_back(std::move(w));
        }
    }
    return out;
}

inline LassoWord random_lasso(std::mt19937& rng, int letters, int max_prefix, int max_period) {
    std::uniform_int_distribution<int> letter(0, letters - 1), pre(0, max_prefix), per(1, max_period);
    LassoWord w;
    for (int i = pre(rng); i > 0; --i)
        w.prefix.push_back(letter(rng));
    for (int i = per(rng); i > 0; --i)
        w.period.push_back(letter(rng));
    return w;
}

// Least value over the simple cycles of the filtered k-configuration graph,
// each averaged with every realizable restriction of its fixed backward slots.
inline ExtendedValue bounded_oracle(const std::vector<CycleStats>& cycles) {
    ExtendedValue best = ExtendedValue::plus_infinity();
    for (const auto& c : cycles) {
        for (std::size_t f = 1; f < c.gain.size(); ++f)
            if (c.gain[f] < 0)
                return ExtendedValue::minus_infinity();
        for (const auto& r : c.restrictions) {
            if (!r.realizable)
                continue;
            if (c.count == 0) {
                if (r.cost < 0)
                    return ExtendedValue::minus_infinity();
                continue;
            }
            ExtendedValue v(Rational(r.cost, c.count));
            if (v < best)
                best = v;
        }
    }
    return best;
}

// Slave with states 0..n-1, initial 0 and the last state accepting and final.
inline Slave random_slave(std::mt19937& rng, int index, ValueFunction fn, int letters, int states, int lo, int hi,
                          bool deterministic) {
    Slave s;
    s.index = index;
    s.fn = fn;
    for (int q = 0; q < states; ++q)
        s.core.add_state("s" + std::to_string(q));
    s.core.initial = {0};
    s.core.accepting[states - 1] = true;
    std::uniform_int_distribution<int> weight(lo, hi), target(0, states - 1);
    for (int q = 0; q + 1 < states; ++q)
        for (int a = 0; a < letters; ++a) {
            if (q == 0 && a == letters - 1) {
                // some path to acceptance keeps most invocations finite
                s.core.add_transition(q, a, states - 1, weight(rng));
                continue;
            }
            if (rng() % 8 == 0)
                continue;
            s.core.add_transition(q, a, target(rng), weight(rng));
            if (!deterministic && rng() % 3 == 0)
                s.core.add_transition(q, a, target(rng), weight(rng));
        }
    if (index < 0 && rng() % 3 == 0)
        s.core.at_start[0] = true;
    return s;
}

inline Automaton random_master(std::mt19937& rng, int letters, int states, const std::vector<int>& labels,
                               bool deterministic) {
    Automaton m;
    for (int q = 0; q < states; ++q)
        m.add_state("m" + std::to_string(q));
    m.initial = {0};
    m.accepting[0] = true;
    if (states > 1 && rng() % 2)
        m.accepting[states - 1] = true;
    std::uniform_int_distribution<int> target(0, states - 1);
    std::uniform_int_distribution<std::size_t> label(0, labels.size() - 1);
    for (int q = 0; q < states; ++q)
        for (int a = 0; a < letters; ++a) {
            m.add_transition(q, a, target(rng), labels[label(rng)]);
            if (!deterministic && rng() % 3 == 0)
                m.add_transition(q, a, target(rng), labels[label(rng)]);
        }
    return m;
}

inline Alphabet letters_ab(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        names.push_back(std::string(1, static_cast<char>('a' + i)));
    return Alphabet(names);
}

// Deterministic NWA with a forward and a backward slave of a regular value function.
inline Nwa random_regular_nwa(std::mt19937& rng, int variant) {
    ValueFunction fns[] = {ValueFunction::min(), ValueFunction::max(), ValueFunction::bsum(-2, 2)};
    ValueFunction fn = fns[variant % 3];
    Nwa n;
    n.name = "rr" + std::to_string(variant);
    n.alphabet = letters_ab(2);
    n.master = random_master(rng, 2, 2, {0, 1, -1}, true);
    n.slaves.emplace(1, random_slave(rng, 1, fn, 2, 3, -2, 2, true));
    n.slaves.emplace(-1, random_slave(rng, -1, fn, 2, 2, -2, 2, true));
    return n;
}

// Sum or sumplus slaves; may be nondeterministic.
inline Nwa random_sum_nwa(std::mt19937& rng, int variant) {
    ValueFunction fn = variant % 2 ? ValueFunction::sum() : ValueFunction::sumplus();
    Nwa n;
    n.name = "rs" + std::to_string(variant);
    n.alphabet = letters_ab(2);
    n.master = random_master(rng, 2, 1 + static_cast<int>(rng() % 2), {0, 1, -1}, variant % 4 < 2);
    n.slaves.emplace(1, random_slave(rng, 1, fn, 2, 2, -2, 2, variant % 3 != 0));
    n.slaves.emplace(-1, random_slave(rng, -1, fn, 2, 2, -2, 2, true));
    return n;
}

// Nondeterministic master over a forward sumplus slave.
inline Nwa random_forward_nwa(std::mt19937& rng, int variant) {
    Nwa n;
    n.name = "rf" + std::to_string(variant);
    n.alphabet = letters_ab(2);
    n.master = random_master(rng, 2, 1 + static_cast<int>(rng() % 2), {0, 1}, false);
    n.slaves.emplace(1, random_slave(rng, 1, ValueFunction::sumplus(), 2, 2, 0, 3, variant % 2 == 0));
    return n;
}

// Least LimAvg over master runs on `w` that repeat with period `periods`·|v|
// after the prefix, every invocation taking its cheapest accepting slave run
// independently. Only forward slaves.
inline ExtendedValue enumerated_run_minimum(const Nwa& n, const LassoWord& w, int periods) {
    const long long U = w.prefix_length(), P = w.period_length();
    const long long window = periods * P;
    const long long reach = static_cast<long long>(n.max_slave_states() + 1) * P + 1;
    auto invocation = [&](int j, long long p) {
        if (j == 0)
            return ExtendedValue::bottom();
        const Slave& s = n.slave(j);
        for (int q : s.core.initial)
            if (s.core.accepting[q])
                return ExtendedValue::bottom();
        ExtendedValue best = ExtendedValue::plus_infinity();
        std::vector<int> word;
        for (long long e = p; e < p + reach; ++e) {
            word.push_back(w.at(e));
            ExtendedValue v = runs_value(s.core, s.fn, word, false);
            if (!v.is_bottom() && v < best)
                best = v;
        }
        return best;
    };
    std::map<std::pair<int, long long>, ExtendedValue> memo;
    auto value_at = [&](int j, long long p) {
        long long key = p <= U ? p : U + 1 + (p - U - 1) % P;
        auto it = memo.find({j, key});
        if (it != memo.end())
            return it->second;
        ExtendedValue v = invocation(j, p);
        memo.emplace(std::make_pair(j, key), v);
        return v;
    };

    auto out = n.master.outgoing();
    ExtendedValue best = ExtendedValue::plus_infinity();
    // Prefix: any run reaching a state at U.
    std::set<int> at_u;
    std::function<void(int, long long)> prefix = [&](int q, long long p) {
        if (p > U) {
            at_u.insert(q);
            return;
        }
        for (int t : out[q])
            if (n.master.transitions[t].letter == w.at(p)) {
                if (value_at(static_cast<int>(n.master.transitions[t].label), p).is_plus_infinity())
                    continue;
                prefix(n.master.transitions[t].target, p + 1);
            }
    };
    for (int q : n.master.initial)
        prefix(q, 1);
    for (int start : at_u) {
        Rational sum = 0;
        long long count = 0;
        bool accepting = false;
        std::function<void(int, long long)> loop = [&](int q, long long p) {
            if (p > U + window) {
                if (q == start && accepting && count > 0) {
                    ExtendedValue v(sum / count);
                    if (v < best)
                        best = v;
                }
                return;
            }
            bool was = accepting;
            accepting = accepting || n.master.accepting[q];
            for (int t : out[q]) {
                const auto& tr = n.master.transitions[t];
                if (tr.letter != w.at(p))
                    continue;
                ExtendedValue v = value_at(static_cast<int>(tr.label), p);
                if (v.is_plus_infinity())
                    continue;
                if (v.is_finite()) {
                    sum += v.value();
                    ++count;
                }
                loop(tr.target, p + 1);
                if (v.is_finite()) {
                    sum -= v.value();
                    --count;
                }
            }
            accepting = was;
        };
        loop(start, U + 1);
    }
    return best;
}

// Master (a a* b)^ω invoking on the first a a forward sum slave that loses
// `loss` per a and stops at b. Variants add a silent letter or a second,
// positive slave on b.
inline Nwa planted_negative_nwa(int loss, int variant) {
    Nwa n;
    n.name = "planted" + std::to_string(loss) + "_" + std::to_string(variant);
    n.alphabet = variant % 2 ? Alphabet({"a", "b", "c"}) : Alphabet({"a", "b"});
    Automaton& m = n.master;
    m.add_state("m0");
    m.add_state("m1");
    m.initial = {0};
    m.accepting[0] = true;
    m.add_transition(0, 0, 1, 1);
    m.add_transition(1, 0, 1, 0);
    m.add_transition(1, 1, 0, variant % 3 == 2 ? 2 : 0);
    if (variant % 2)
        m.add_transition(1, 2, 1, 0);
    Slave s;
    s.index = 1;
    s.fn = ValueFunction::sum();
    s.core.add_state("s");
    s.core.add_state("f");
    s.core.initial = {0};
    s.core.accepting[1] = true;
    s.core.add_transition(0, 0, 0, -loss);
    s.core.add_transition(0, 1, 1, 0);
    if (variant % 2)
        s.core.add_transition(0, 2, 0, 1);
    n.slaves.emplace(1, s);
    if (variant % 3 == 2) {
        Slave t;
        t.index = 2;
        t.fn = ValueFunction::sum();
        t.core.add_state("u");
        t.core.add_state("g");
        t.core.initial = {0};
        t.core.accepting[1] = true;
        for (int a = 0; a < n.alphabet.size(); ++a)
            t.core.add_transition(0, a, 1, loss + variant);
        n.slaves.emplace(2, t);
    }
    return n;
}

}  // namespace oracle
