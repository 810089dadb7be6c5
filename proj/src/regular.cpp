#include "nwa/regular.hpp"

#include "nwa/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace nwa {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v)
            h ^= std::hash<int>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

ExtendedValue least_value(const std::vector<std::pair<int, Summary>>& set, const Slave& s, bool at_start_mode) {
    ExtendedValue best = ExtendedValue::plus_infinity();
    bool bottom = false;
    for (const auto& [q, sum] : set) {
        if (!s.core.accepting[q] && !(at_start_mode && s.core.at_start[q]))
            continue;
        ExtendedValue v = sum.value(s.fn);
        if (v.is_bottom())
            bottom = true;
        else if (v < best)
            best = v;
    }
    return bottom && best.is_plus_infinity() ? ExtendedValue::bottom() : best;
}

std::int64_t as_cost(const Rational& v) {
    if (boost::multiprecision::denominator(v) != 1)
        throw std::logic_error("regular slave value is not an integer");
    return static_cast<std::int64_t>(boost::multiprecision::numerator(v));
}

}  // namespace

SlaveDfa build_slave_dfa(const Nwa& nwa, int slave, std::size_t cap) {
    const Slave& s = nwa.slave(slave);
    if (!s.fn.is_regular())
        throw input_error("slave " + std::to_string(slave) + " uses " + s.fn.keyword() +
                          ", which is not a regular value function (use --method bounded)");
    using Key = std::vector<std::pair<int, Summary>>;
    std::map<Key, int> index;
    std::vector<Key> sets;
    auto intern = [&](Key k) {
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        auto it = index.find(k);
        if (it != index.end())
            return it->second;
        if (sets.size() >= cap)
            throw resource_error("value decomposition of slave " + std::to_string(slave) + " exceeds " +
                                 std::to_string(cap) + " states");
        int id = static_cast<int>(sets.size());
        index.emplace(k, id);
        sets.push_back(std::move(k));
        return id;
    };

    SlaveDfa d;
    d.slave = slave;
    Key init;
    for (int q : s.core.initial)
        init.push_back({q, Summary{}});
    d.initial = intern(init);
    auto out = s.core.outgoing();
    const int letters = nwa.alphabet.size();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::vector<int> row(letters);
        for (int a = 0; a < letters; ++a) {
            Key next;
            for (const auto& [q, sum] : sets[i])
                for (int ti : out[q]) {
                    const auto& t = s.core.transitions[ti];
                    if (t.letter != a)
                        continue;
                    Summary s2 = sum;
                    s2.push(s.fn, t.label);
                    next.push_back({t.target, s2});
                }
            row[a] = intern(std::move(next));
        }
        d.delta.push_back(std::move(row));
    }
    d.dead = intern({});
    if (static_cast<int>(d.delta.size()) < static_cast<int>(sets.size()))
        d.delta.push_back(std::vector<int>(letters, d.dead));
    for (const auto& set : sets) {
        d.value.push_back(least_value(set, s, false));
        d.start_value.push_back(slave < 0 ? least_value(set, s, true) : least_value(set, s, false));
    }
    return d;
}

std::vector<Rational> value_range(const Nwa& nwa, int slave) {
    SlaveDfa d = build_slave_dfa(nwa, slave);
    std::vector<Rational> out;
    for (int i = 0; i < d.size(); ++i)
        for (const auto* v : {&d.value[i], &d.start_value[i]})
            if (v->is_finite())
                out.push_back(v->value());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ValueDecomposition decompose_regular(const Nwa& nwa, int slave) {
    SlaveDfa d = build_slave_dfa(nwa, slave);
    ValueDecomposition out;
    out.slave = slave;
    // values reached only at the word start count too
    std::vector<ExtendedValue> values;
    if (d.value[d.initial].is_bottom() || d.start_value[d.initial].is_bottom())
        values.push_back(ExtendedValue::bottom());
    std::vector<Rational> range;
    for (int i = 0; i < d.size(); ++i)
        for (const auto* v : {&d.value[i], &d.start_value[i]})
            if (v->is_finite())
                range.push_back(v->value());
    std::sort(range.begin(), range.end());
    range.erase(std::unique(range.begin(), range.end()), range.end());
    for (const auto& v : range)
        values.emplace_back(v);
    for (const auto& v : values) {
        DecompositionEntry e;
        e.value = v;
        for (auto [a, start] : {std::pair{&e.recognizer, false}, std::pair{&e.start_recognizer, true}}) {
            for (int i = 0; i < d.size(); ++i) {
                a->add_state("d" + std::to_string(i));
                a->accepting[i] = (start ? d.start_value[i] : d.value[i]) == v;
            }
            a->initial = {d.initial};
            for (int i = 0; i < d.size(); ++i)
                for (int l = 0; l < nwa.alphabet.size(); ++l)
                    a->add_transition(i, l, d.delta[i][l], 0);
        }
        e.deterministic = true;
        out.entries.push_back(std::move(e));
    }
    return out;
}

std::string ReducedAutomaton::describe_state(int id, const Nwa& nwa) const {
    const ReducedState& s = states.at(id);
    std::ostringstream out;
    auto obligations_text = [&](const std::vector<int>& f) {
        std::string t = "{";
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto& o = obligations[f[i]];
            t += (i ? "," : "") + std::to_string(o.slave) + ":v=" + to_string(o.value) + ":d" +
                 std::to_string(o.dfa_state);
        }
        return t + "}";
    };
    out << "(" << nwa.master.states[s.master] << ", F1=" << obligations_text(s.f1) << ", F2=" << obligations_text(s.f2)
        << ", B={";
    for (std::size_t k = 0; k < s.b.size(); ++k) {
        out << (k ? "," : "") << backward_keys[k].first << ":v=" << to_string(backward_keys[k].second) << ":{";
        for (std::size_t i = 0; i < s.b[k].size(); ++i)
            out << (i ? "," : "") << "d" << s.b[k][i];
        out << "}";
    }
    out << "})";
    return out.str();
}

ReducedAutomaton reduce_to_limavg(const Nwa& nwa, std::size_t cap) {
    validate(nwa);
    ReducedAutomaton R;
    std::map<int, int> dfa_of;
    std::map<int, std::vector<ExtendedValue>> options;
    for (const auto& [j, s] : nwa.slaves) {
        dfa_of[j] = static_cast<int>(R.dfas.size());
        R.dfas.push_back(build_slave_dfa(nwa, j));
        const SlaveDfa& d = R.dfas.back();
        auto& opts = options[j];
        if (d.value[d.initial].is_bottom())
            opts.push_back(ExtendedValue::bottom());
        std::vector<Rational> range;
        for (int i = 0; i < d.size(); ++i)
            for (const auto* v : {&d.value[i], &d.start_value[i]})
                if (v->is_finite())
                    range.push_back(v->value());
        std::sort(range.begin(), range.end());
        range.erase(std::unique(range.begin(), range.end()), range.end());
        for (const auto& v : range)
            opts.emplace_back(v);
    }

    // Backward bookkeeping: per (slave, value), the DFA states from which the
    // letters read so far, reversed, lead to termination with that value.
    std::map<std::pair<int, Rational>, int> key_of;
    std::vector<std::vector<char>> acc, start_acc;
    for (const auto& [j, opts] : options) {
        if (j > 0)
            continue;
        const SlaveDfa& d = R.dfas[dfa_of[j]];
        for (const auto& v : opts) {
            if (v.is_bottom())
                continue;
            key_of[{j, v.value()}] = static_cast<int>(R.backward_keys.size());
            R.backward_keys.push_back({j, v.value()});
            std::vector<char> a(d.size()), s(d.size());
            for (int i = 0; i < d.size(); ++i) {
                a[i] = d.value[i] == v;
                s[i] = d.start_value[i] == v;
            }
            acc.push_back(std::move(a));
            start_acc.push_back(std::move(s));
        }
    }

    std::map<std::tuple<int, Rational, int>, int> obligation_id;
    auto obligation = [&](int slave, const Rational& v, int dstate) {
        auto key = std::make_tuple(slave, v, dstate);
        auto it = obligation_id.find(key);
        if (it != obligation_id.end())
            return it->second;
        int id = static_cast<int>(R.obligations.size());
        obligation_id.emplace(key, id);
        R.obligations.push_back({slave, v, dstate});
        return id;
    };

    std::unordered_map<std::vector<int>, int, VectorHash> state_id;
    auto intern = [&](ReducedState s) {
        std::vector<int> key{s.master, static_cast<int>(s.f1.size())};
        key.insert(key.end(), s.f1.begin(), s.f1.end());
        key.push_back(static_cast<int>(s.f2.size()));
        key.insert(key.end(), s.f2.begin(), s.f2.end());
        for (const auto& u : s.b) {
            key.push_back(static_cast<int>(u.size()));
            key.insert(key.end(), u.begin(), u.end());
        }
        auto it = state_id.find(key);
        if (it != state_id.end())
            return it->second;
        if (R.states.size() >= cap)
            throw resource_error("reduced automaton exceeds " + std::to_string(cap) + " states");
        int id = R.graph.add_node();
        state_id.emplace(std::move(key), id);
        R.states.push_back(std::move(s));
        return id;
    };

    std::vector<std::vector<int>> u0;
    for (std::size_t k = 0; k < R.backward_keys.size(); ++k) {
        std::vector<int> u;
        for (std::size_t i = 0; i < acc[k].size(); ++i)
            if (acc[k][i] || start_acc[k][i])
                u.push_back(static_cast<int>(i));
        u0.push_back(std::move(u));
    }
    for (int q : nwa.master.initial)
        R.initial.push_back(intern(ReducedState{q, {}, {}, u0}));

    auto master_out = nwa.master.outgoing();
    for (std::size_t sid = 0; sid < R.states.size(); ++sid) {
        const ReducedState cur = R.states[sid];
        for (int ti : master_out[cur.master]) {
            const Transition& t = nwa.master.transitions[ti];
            const int a = t.letter;
            const int j = static_cast<int>(t.label);

            std::vector<int> f1 = cur.f1, f2 = cur.f2;
            if (f1.empty())
                std::swap(f1, f2);
            bool alive = true;
            auto advance = [&](const std::vector<int>& in) {
                std::vector<int> out;
                for (int id : in) {
                    ForwardObligation o = R.obligations[id];
                    const SlaveDfa& d = R.dfas[dfa_of[o.slave]];
                    int next = d.delta[o.dfa_state][a];
                    if (next == d.dead) {
                        alive = false;
                        return out;
                    }
                    if (d.value[next] == ExtendedValue(o.value))
                        continue;
                    out.push_back(obligation(o.slave, o.value, next));
                }
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                return out;
            };
            std::vector<int> n1 = advance(f1);
            std::vector<int> n2 = alive ? advance(f2) : std::vector<int>{};
            if (!alive)
                continue;

            std::vector<std::vector<int>> nb(cur.b.size());
            for (std::size_t k = 0; k < cur.b.size(); ++k) {
                const SlaveDfa& d = R.dfas[dfa_of[R.backward_keys[k].first]];
                std::vector<char> in(d.size(), 0);
                for (int x : cur.b[k])
                    in[x] = 1;
                for (int x = 0; x < d.size(); ++x)
                    if (in[d.delta[x][a]] || acc[k][x])
                        nb[k].push_back(x);
            }

            std::vector<ExtendedValue> opts = j == 0 ? std::vector<ExtendedValue>{ExtendedValue::bottom()} : options[j];
            for (const auto& v : opts) {
                std::vector<int> m2 = n2;
                if (!v.is_bottom()) {
                    const SlaveDfa& d = R.dfas[dfa_of[j]];
                    int first = d.delta[d.initial][a];
                    if (first == d.dead)
                        continue;
                    if (j > 0) {
                        if (!(d.value[first] == v)) {
                            m2.push_back(obligation(j, v.value(), first));
                            std::sort(m2.begin(), m2.end());
                            m2.erase(std::unique(m2.begin(), m2.end()), m2.end());
                        }
                    } else {
                        const auto& u = cur.b[key_of.at({j, v.value()})];
                        if (!std::binary_search(u.begin(), u.end(), first))
                            continue;
                    }
                }
                int target = intern(ReducedState{t.target, n1, m2, nb});
                int info = static_cast<int>(R.edge_info.size());
                R.edge_info.push_back({ti, v});
                if (v.is_bottom())
                    R.graph.add_edge(static_cast<int>(sid), target, 0, 0, info);
                else
                    R.graph.add_edge(static_cast<int>(sid), target, as_cost(v.value()), 1, info);
            }
        }
    }

    std::vector<bool> master_acc(R.states.size()), f1_empty(R.states.size());
    for (std::size_t i = 0; i < R.states.size(); ++i) {
        master_acc[i] = nwa.master.accepting[R.states[i].master];
        f1_empty[i] = R.states[i].f1.empty();
    }
    R.accepting_sets = {master_acc, f1_empty};
    return R;
}

EmptinessVerdict emptiness_regular(const Nwa& nwa, const Rational& lambda, std::size_t cap) {
    ReducedAutomaton R = reduce_to_limavg(nwa, cap);
    BuchiResult br = buchi_ratio_infimum(R.graph, R.initial, R.accepting_sets);
    EmptinessVerdict v;
    v.infimum = br.value;
    v.lambda = lambda;
    v.yes = !br.value.is_plus_infinity() && br.value <= ExtendedValue(lambda);
    if (!br.value.is_finite())
        return v;
    LassoPlan plan;
    auto letters = [&](const std::vector<int>& edges, std::vector<int>& into, Rational* cost, long long* count) {
        for (int e : edges) {
            const RatioEdge& E = R.graph.edges[e];
            into.push_back(nwa.master.transitions[R.edge_info[E.tag].master_transition].letter);
            if (cost) {
                *cost += E.cost;
                *count += E.count;
            }
        }
    };
    letters(br.stem, plan.stem, nullptr, nullptr);
    letters(br.cycle, plan.cycle, &plan.cycle_cost, &plan.cycle_count);
    letters(br.tour, plan.tour, &plan.tour_cost, &plan.tour_count);
    // aim within 1/100 of the infimum; it need not be attained by a lasso
    v.witness = canonical_lasso(plan_lasso(plan, br.value.value() + Rational(1, 100)));
    for (int e : br.cycle)
        v.witness_cycle.push_back("s" + std::to_string(R.graph.edges[e].source));
    return v;
}

std::pair<Nwa, std::string> reduced_as_nwa(const ReducedAutomaton& R, const Nwa& nwa) {
    Nwa out;
    out.name = nwa.name + "-reduced";
    std::map<std::string, int> letter_ids;
    auto letter_for = [&](int e) {
        const RatioEdge& E = R.graph.edges[e];
        std::string base = nwa.alphabet.name(nwa.master.transitions[R.edge_info[E.tag].master_transition].letter);
        std::string name = E.count == 0 ? base : base + "@w" + std::to_string(E.cost);
        auto it = letter_ids.find(name);
        if (it == letter_ids.end())
            it = letter_ids.emplace(name, out.alphabet.add(name)).first;
        return it->second;
    };

    Slave unit;
    unit.index = 1;
    unit.fn = ValueFunction::min();
    unit.core.add_state("s0");
    unit.core.add_state("s1");
    unit.core.initial = {0};
    unit.core.accepting[1] = true;

    const int m = static_cast<int>(R.accepting_sets.size());
    std::map<std::pair<int, int>, int> node;
    std::deque<std::pair<int, int>> queue;
    auto intern = [&](int s, int k) {
        auto it = node.find({s, k});
        if (it != node.end())
            return it->second;
        int id = out.master.add_state("s" + std::to_string(s) + "_" + std::to_string(k));
        out.master.accepting[id] = k == 0 && R.accepting_sets[0][s];
        node.emplace(std::make_pair(s, k), id);
        queue.push_back({s, k});
        return id;
    };
    for (int s : R.initial)
        out.master.initial.push_back(intern(s, 0));
    auto graph_out = R.graph.outgoing();
    std::map<int, std::int64_t> unit_letters;
    while (!queue.empty()) {
        auto [s, k] = queue.front();
        queue.pop_front();
        int from = node.at({s, k});
        int next_k = R.accepting_sets[k][s] ? (k + 1) % m : k;
        for (int e : graph_out[s]) {
            int l = letter_for(e);
            int to = intern(R.graph.edges[e].target, next_k);
            bool silent = R.graph.edges[e].count == 0;
            out.master.add_transition(from, l, to, silent ? 0 : 1);
            if (!silent)
                unit_letters[l] = R.graph.edges[e].cost;
        }
    }
    if (out.alphabet.size() == 0)
        out.alphabet.add(nwa.alphabet.name(0));
    for (const auto& [l, c] : unit_letters)
        unit.core.add_transition(0, l, 1, c);
    out.slaves.emplace(1, std::move(unit));

    std::string sidecar;
    for (int s = 0; s < static_cast<int>(R.states.size()); ++s)
        sidecar += "state s" + std::to_string(s) + " = " + R.describe_state(s, nwa) + "\n";
    return {std::move(out), sidecar};
}

LassoWord plan_lasso(const LassoPlan& plan, const Rational& lambda) {
    long long m = 1;
    if (!plan.tour.empty()) {
        for (long long t = 1; t <= (1LL << 20); t *= 2) {
            long long count = t * plan.cycle_count + plan.tour_count;
            if (count > 0 && (plan.cycle_cost * t + plan.tour_cost) / count <= lambda) {
                m = t;
                break;
            }
        }
    }
    LassoWord w;
    w.prefix = plan.stem;
    for (long long i = 0; i < m; ++i)
        w.period.insert(w.period.end(), plan.cycle.begin(), plan.cycle.end());
    w.period.insert(w.period.end(), plan.tour.begin(), plan.tour.end());
    return w;
}

}  // namespace nwa
