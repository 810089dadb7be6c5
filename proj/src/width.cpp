#include "nwa/width.hpp"

#include "nwa/errors.hpp"
#include "nwa/graph_impl.hpp"

#include <algorithm>
#include <map>
#include <set>
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

void normalize(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Global view of all slave states.
struct SlaveSpace {
    std::map<int, int> offset;
    std::vector<int> owner;
    std::vector<bool> accepting, at_start;
    std::vector<std::vector<std::vector<int>>> succ;  // [state][letter] -> targets
    std::vector<std::vector<std::vector<int>>> pred;  // [letter][state] -> sources
    std::vector<int> backward_births, backward_births_at_start;

    SlaveSpace(const Nwa& nwa) {
        const int letters = nwa.alphabet.size();
        for (const auto& [j, s] : nwa.slaves) {
            offset[j] = static_cast<int>(owner.size());
            for (int q = 0; q < s.core.state_count(); ++q) {
                owner.push_back(j);
                accepting.push_back(s.core.accepting[q]);
                at_start.push_back(s.core.at_start[q]);
            }
        }
        const int n = static_cast<int>(owner.size());
        succ.assign(n, std::vector<std::vector<int>>(letters));
        pred.assign(letters, std::vector<std::vector<int>>(n));
        for (const auto& [j, s] : nwa.slaves)
            for (const auto& t : s.core.transitions) {
                int from = offset[j] + t.source, to = offset[j] + t.target;
                succ[from][t.letter].push_back(to);
                pred[t.letter][to].push_back(from);
            }
        for (int g = 0; g < n; ++g) {
            if (owner[g] >= 0)
                continue;
            if (accepting[g])
                backward_births.push_back(g);
            if (accepting[g] || at_start[g])
                backward_births_at_start.push_back(g);
        }
    }

    std::vector<int> pre(const std::vector<int>& set, int a) const {
        std::vector<int> out;
        for (int g : set)
            out.insert(out.end(), pred[a][g].begin(), pred[a][g].end());
        normalize(out);
        return out;
    }

    // Every way the forward slaves in `set` can read `a`; terminated ones drop out.
    std::vector<std::vector<int>> step(const std::vector<int>& set, int a, std::size_t cap) const {
        std::vector<std::vector<int>> alts{{}};
        for (int g : set) {
            std::vector<std::vector<int>> next;
            for (int t : succ[g][a])
                for (const auto& alt : alts) {
                    auto v = alt;
                    if (!accepting[t])
                        v.push_back(t);
                    next.push_back(std::move(v));
                }
            if (next.size() > cap)
                throw resource_error("width monitor branching exceeds " + std::to_string(cap));
            alts = std::move(next);
        }
        for (auto& v : alts)
            normalize(v);
        std::sort(alts.begin(), alts.end());
        alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
        return alts;
    }
};

}  // namespace

WidthMonitor build_width_monitor(const Nwa& nwa, std::size_t cap) {
    validate(nwa);
    SlaveSpace sp(nwa);
    WidthMonitor m;
    for (const auto& [j, off] : sp.offset)
        m.slave_offset.push_back(off);
    m.slave_of_state = sp.owner;

    std::unordered_map<std::vector<int>, int, VectorHash> ids;
    auto intern = [&](MonitorState s) {
        std::vector<int> key{s.master, s.armed ? 1 : 0};
        for (const auto* v : {&s.f1, &s.f2, &s.b1, &s.b2}) {
            key.push_back(static_cast<int>(v->size()));
            key.insert(key.end(), v->begin(), v->end());
        }
        auto it = ids.find(key);
        if (it != ids.end())
            return it->second;
        if (m.states.size() >= cap)
            throw resource_error("width monitor exceeds " + std::to_string(cap) + " states");
        int id = m.graph.add_node();
        ids.emplace(std::move(key), id);
        m.states.push_back(std::move(s));
        return id;
    };

    for (int q : nwa.master.initial) {
        m.initial.push_back(intern(MonitorState{q, {}, {}, {}, sp.backward_births_at_start, false}));
        m.initial.push_back(
            intern(MonitorState{q, {}, {}, sp.backward_births_at_start, sp.backward_births_at_start, true}));
    }

    auto master_out = nwa.master.outgoing();
    for (std::size_t sid = 0; sid < m.states.size(); ++sid) {
        const MonitorState cur = m.states[sid];
        for (int ti : master_out[cur.master]) {
            const Transition& t = nwa.master.transitions[ti];
            const int a = t.letter;
            const int j = static_cast<int>(t.label);

            std::vector<int> f1 = cur.f1, f2 = cur.f2;
            if (f1.empty())
                std::swap(f1, f2);
            auto alts1 = sp.step(f1, a, cap);
            auto alts2 = sp.step(f2, a, cap);
            if (alts1.empty() || alts2.empty())
                continue;

            // The new invocation's contribution to F2: empty when it ends at once.
            std::vector<std::optional<int>> born;
            bool valid = true, hit = false;
            std::vector<int> p1 = cur.armed ? sp.pre(cur.b1, a) : std::vector<int>{};
            std::vector<int> p2 = sp.pre(cur.b2, a);
            if (j > 0) {
                const Slave& s = nwa.slave(j);
                for (int q0 : s.core.initial) {
                    int g0 = sp.offset[j] + q0;
                    if (sp.accepting[g0]) {
                        born.push_back(std::nullopt);
                        continue;
                    }
                    for (int g1 : sp.succ[g0][a])
                        born.push_back(sp.accepting[g1] ? std::nullopt : std::optional<int>(g1));
                }
                std::sort(born.begin(), born.end());
                born.erase(std::unique(born.begin(), born.end()), born.end());
                valid = !born.empty();
            } else if (j < 0) {
                const Slave& s = nwa.slave(j);
                valid = false;
                for (int q0 : s.core.initial) {
                    int g0 = sp.offset[j] + q0;
                    bool in1 = std::binary_search(p1.begin(), p1.end(), g0);
                    bool in2 = std::binary_search(p2.begin(), p2.end(), g0);
                    if (sp.accepting[g0] || in1 || in2)
                        valid = true;
                    if (in1)
                        hit = true;
                }
            }
            if (!valid)
                continue;
            if (born.empty())
                born.push_back(std::nullopt);

            std::vector<int> b2 = p2;
            b2.insert(b2.end(), sp.backward_births.begin(), sp.backward_births.end());
            normalize(b2);

            for (const auto& n1 : alts1)
                for (const auto& n2base : alts2)
                    for (const auto& b : born) {
                        std::vector<int> n2 = n2base;
                        if (b) {
                            n2.push_back(*b);
                            normalize(n2);
                        }
                        auto add = [&](MonitorState target) {
                            int to = intern(std::move(target));
                            m.graph.add_edge(static_cast<int>(sid), to, hit ? 1 : 0, 1, a);
                            m.hit.push_back(hit);
                        };
                        add(MonitorState{t.target, n1, n2, p1, b2, cur.armed});
                        if (!cur.armed)
                            add(MonitorState{t.target, n1, n2, sp.backward_births, b2, true});
                    }
        }
    }
    return m;
}

FiniteWidthResult check_finite_width(const Nwa& nwa, std::size_t cap) {
    WidthMonitor m = build_width_monitor(nwa, cap);
    FiniteWidthResult r;
    r.monitor_states = m.states.size();
    SccResult scc = sccs(m.graph);
    const std::size_t ncomp = scc.members.size();
    std::vector<char> has_master(ncomp), has_empty(ncomp), has_hit(ncomp);
    for (int v = 0; v < m.graph.node_count; ++v) {
        if (m.master_accepting(nwa, v))
            has_master[scc.component[v]] = 1;
        if (m.states[v].f1.empty())
            has_empty[scc.component[v]] = 1;
    }
    for (std::size_t e = 0; e < m.graph.edges.size(); ++e) {
        const auto& E = m.graph.edges[e];
        if (m.hit[e] && scc.component[E.source] == scc.component[E.target])
            has_hit[scc.component[E.source]] = 1;
    }
    auto good = [&](int c) { return has_master[c] && has_empty[c] && has_hit[c]; };
    std::vector<char> hit_source(m.graph.node_count, 0);
    for (std::size_t e = 0; e < m.graph.edges.size(); ++e) {
        const auto& E = m.graph.edges[e];
        int c = scc.component[E.source];
        if (m.hit[e] && c == scc.component[E.target] && good(c))
            hit_source[E.source] = 1;
    }
    auto everywhere = [](int) { return true; };
    auto stem = shortest_path(m.graph, m.initial, [&](int v) { return hit_source[v] != 0; }, everywhere);
    if (!stem)
        return r;
    r.finite = false;

    int start = -1;
    if (!stem->empty())
        start = m.graph.edges[stem->back()].target;
    else
        for (int s : m.initial)
            if (start < 0 && hit_source[s])
                start = s;
    const int comp = scc.component[start];
    auto inside = [&](int e) {
        const auto& E = m.graph.edges[e];
        return scc.component[E.source] == comp && scc.component[E.target] == comp;
    };
    std::vector<int> cycle;
    for (std::size_t e = 0; e < m.graph.edges.size(); ++e)
        if (m.hit[e] && m.graph.edges[e].source == start && inside(static_cast<int>(e))) {
            cycle.push_back(static_cast<int>(e));
            break;
        }
    int at = m.graph.edges[cycle.front()].target;
    auto walk = [&](auto goal) {
        auto p = shortest_path(m.graph, {at}, goal, inside);
        for (int e : *p)
            cycle.push_back(e);
        if (!p->empty())
            at = m.graph.edges[p->back()].target;
    };
    walk([&](int v) { return m.master_accepting(nwa, v); });
    walk([&](int v) { return m.states[v].f1.empty(); });
    walk([&](int v) { return v == start; });

    LassoWord w;
    for (int e : *stem)
        w.prefix.push_back(static_cast<int>(m.graph.edges[e].tag));
    for (int e : cycle)
        w.period.push_back(static_cast<int>(m.graph.edges[e].tag));
    r.witness = canonical_lasso(std::move(w));
    return r;
}

BarrierBound barrier_bound(const Nwa& nwa) {
    BarrierBound b;
    b.slave_states = nwa.slave_state_total();
    b.master_states = nwa.master.state_count();
    b.max_weight = nwa.max_weight();
    b.conf = Integer(b.master_states) << b.slave_states;
    Integer power = 1;
    for (int k = 0; k < 2 * b.slave_states; ++k)
        power *= b.slave_states;
    b.bound = Integer(b.slave_states + 2) * b.conf * power;
    return b;
}

std::string to_string(Tri t) {
    switch (t) {
    case Tri::pass:
        return "pass";
    case Tri::fail:
        return "fail";
    default:
        return "indeterminate";
    }
}

Tri BarrierReport::is_barrier() const {
    Tri r = Tri::pass;
    for (const auto& c : bc) {
        if (c.status == Tri::fail)
            return Tri::fail;
        if (c.status == Tri::indeterminate)
            r = Tri::indeterminate;
    }
    return r;
}

namespace {

enum class End { accepted, rejected, open };

struct Trajectory {
    int slave = 0;
    long long start = 0;
    std::vector<int> states;  // states[k]: after k letters
    std::vector<std::int64_t> weights;
    End end = End::open;

    long long steps() const { return static_cast<long long>(weights.size()); }
    // Position read by step k (0-based).
    long long position(long long k) const { return slave > 0 ? start + k : start - k; }
};

Trajectory trace_slave(const Nwa& nwa, int j, const std::vector<std::vector<int>>& table, const LassoWord& w,
                       long long s, long long limit) {
    const Slave& sl = nwa.slave(j);
    Trajectory t;
    t.slave = j;
    t.start = s;
    int q = sl.core.initial.front();
    t.states.push_back(q);
    if (sl.core.accepting[q]) {
        t.end = End::accepted;
        return t;
    }
    for (long long p = s;; p += j > 0 ? 1 : -1) {
        if (j < 0 && p < 1) {
            t.end = sl.core.at_start[q] ? End::accepted : End::rejected;
            return t;
        }
        if (j > 0 && p > limit) {
            t.end = End::open;
            return t;
        }
        int ti = table[q][w.at(p)];
        if (ti < 0) {
            t.end = End::rejected;
            return t;
        }
        q = sl.core.transitions[ti].target;
        t.states.push_back(q);
        t.weights.push_back(sl.core.transitions[ti].label);
        if (sl.core.accepting[q]) {
            t.end = End::accepted;
            return t;
        }
    }
}

struct Simulation {
    std::vector<int> master;  // master[p]: state after p letters
    std::vector<Trajectory> runs;
    std::map<long long, int> run_at;  // invocation position -> index in runs
};

Simulation simulate(const Nwa& nwa, const LassoWord& w, long long reach, long long forward_limit) {
    require_deterministic(nwa, "barrier-check");
    Simulation sim;
    auto mtable = nwa.master.transition_table(nwa.alphabet.size());
    std::map<int, std::vector<std::vector<int>>> tables;
    for (const auto& [j, s] : nwa.slaves)
        tables[j] = s.core.transition_table(nwa.alphabet.size());
    int q = nwa.master.initial.front();
    sim.master.push_back(q);
    for (long long p = 1; p <= reach; ++p) {
        int ti = mtable[q][w.at(p)];
        if (ti < 0)
            throw input_error("master has no transition at position " + std::to_string(p));
        const Transition& t = nwa.master.transitions[ti];
        q = t.target;
        sim.master.push_back(q);
        if (t.label != 0) {
            int j = static_cast<int>(t.label);
            sim.run_at[p] = static_cast<int>(sim.runs.size());
            sim.runs.push_back(trace_slave(nwa, j, tables[j], w, p, forward_limit));
        }
    }
    return sim;
}

// Active slaves at the boundary after position p, as (slave, state) -> count.
std::map<std::pair<int, int>, long long> active_at(const Simulation& sim, long long p) {
    std::map<std::pair<int, int>, long long> mult;
    for (const auto& r : sim.runs) {
        long long k;
        bool active;
        if (r.slave > 0) {
            if (r.start > p)
                continue;
            k = p - r.start + 1;
            active = r.steps() > k || (r.end == End::open && r.steps() == k);
        } else {
            if (r.start <= p)
                continue;
            k = r.start - p;
            active = r.steps() > k;
        }
        if (active)
            ++mult[{r.slave, r.states[k]}];
    }
    return mult;
}

std::set<std::pair<int, int>> support(const std::map<std::pair<int, int>, long long>& m) {
    std::set<std::pair<int, int>> s;
    for (const auto& [k, v] : m)
        s.insert(k);
    return s;
}

std::string describe(const std::pair<int, int>& slot, const Nwa& nwa) {
    return std::to_string(slot.first) + ":" + nwa.slave(slot.first).core.states[slot.second];
}

ExtendedValue segment_value(const Nwa& nwa, const Trajectory& r, bool at_or_below, long long boundary) {
    std::vector<std::int64_t> ws;
    for (long long k = 0; k < r.steps(); ++k) {
        long long pos = r.position(k);
        if (at_or_below ? pos <= boundary : pos > boundary)
            ws.push_back(r.weights[k]);
    }
    return apply_value_function(nwa.slave(r.slave).fn, ws);
}

}  // namespace

BarrierReport check_barrier(const Nwa& nwa, const LassoWord& word, long long i, const std::vector<int>& u,
                            long long horizon) {
    if (i < 0)
        throw input_error("barrier position must be >= 0");
    if (word.period.empty())
        throw input_error("lasso period must be nonempty");
    const long long ul = static_cast<long long>(u.size());
    const long long L = word.period_length();

    // w' = w[1,i] u w[i+1,..], cut where w is back at a period boundary.
    long long cut = std::max(i, word.prefix_length());
    cut += (L - (cut - word.prefix_length()) % L) % L;
    LassoWord wp;
    for (long long p = 1; p <= i; ++p)
        wp.prefix.push_back(word.at(p));
    wp.prefix.insert(wp.prefix.end(), u.begin(), u.end());
    for (long long p = i + 1; p <= cut; ++p)
        wp.prefix.push_back(word.at(p));
    for (long long p = cut + 1; p <= cut + L; ++p)
        wp.period.push_back(word.at(p));

    const long long needed = static_cast<long long>(nwa.slave_state_total() + 2) * nwa.master.state_count();
    const bool conclusive = horizon >= needed;
    const long long reach_w = cut + std::max<long long>(horizon, 1) * L;
    const long long reach_wp = reach_w + ul;

    Simulation sw = simulate(nwa, word, reach_w, reach_w);
    Simulation swp = simulate(nwa, wp, reach_wp, reach_wp);

    BarrierReport rep;
    rep.window = reach_wp;
    auto settle = [&](BarrierCondition& c, bool definite) {
        if (c.status == Tri::pass && !definite) {
            c.status = Tri::indeterminate;
            c.detail = "window of " + std::to_string(reach_wp) + " positions is not conclusive";
        }
    };

    // BC1
    {
        auto& c = rep.bc[0];
        for (const auto& r : swp.runs) {
            if (r.slave > 0 || r.start <= i + ul)
                continue;
            long long first = r.start - r.steps() + 1;
            if (r.end != End::accepted || first <= i) {
                c.status = Tri::fail;
                c.detail = "slave " + std::to_string(r.slave) + " invoked at " + std::to_string(r.start) +
                           (r.end == End::accepted ? " terminates at " + std::to_string(first) : " rejects");
                break;
            }
        }
        settle(c, conclusive);
    }
    // BC2
    {
        auto& c = rep.bc[1];
        for (const auto& r : swp.runs) {
            if (r.slave < 0 || r.start > i)
                continue;
            long long last = r.start + r.steps() - 1;
            if (r.end != End::accepted || last > i + ul) {
                c.status = Tri::fail;
                c.detail = "slave " + std::to_string(r.slave) + " invoked at " + std::to_string(r.start) +
                           (r.end == End::accepted ? " terminates at " + std::to_string(last) : " does not terminate");
                break;
            }
        }
    }
    // BC3
    auto conf_w = active_at(sw, i);
    auto conf_a = active_at(swp, i);
    auto conf_b = active_at(swp, i + ul);
    {
        auto& c = rep.bc[2];
        if (sw.master[i] != swp.master[i] || swp.master[i] != swp.master[i + ul]) {
            c.status = Tri::fail;
            c.detail = "master states differ: " + nwa.master.states[sw.master[i]] + ", " +
                       nwa.master.states[swp.master[i]] + ", " + nwa.master.states[swp.master[i + ul]];
        } else if (support(conf_w) != support(conf_a) || support(conf_w) != support(conf_b)) {
            c.status = conclusive ? Tri::fail : Tri::indeterminate;
            c.detail = "active slave states differ";
        }
    }
    // BC4
    {
        auto& c = rep.bc[3];
        Integer n = barrier_bound(nwa).bound;
        c.detail = "|u|=" + std::to_string(ul) + " N=" + n.str();
        if (Integer(ul) > n)
            c.status = Tri::fail;
    }
    // BC5
    {
        auto& c = rep.bc[4];
        bool backward_violation = false;
        for (const auto& [slot, count] : conf_a) {
            if (slot.first > 0)
                continue;
            auto it = conf_w.find(slot);
            long long before = it == conf_w.end() ? 0 : it->second;
            if (count > before) {
                backward_violation = true;
                c.detail = "mult(" + describe(slot, nwa) + ") " + std::to_string(count) + " > " + std::to_string(before);
            }
        }
        for (const auto& [slot, count] : conf_b) {
            if (slot.first < 0)
                continue;
            auto it = conf_w.find(slot);
            long long before = it == conf_w.end() ? 0 : it->second;
            if (count > before) {
                c.status = Tri::fail;
                c.detail = "mult(" + describe(slot, nwa) + ") " + std::to_string(count) + " > " + std::to_string(before);
            }
        }
        if (c.status == Tri::pass && backward_violation)
            c.status = conclusive ? Tri::fail : Tri::indeterminate;
        settle(c, conclusive);
    }
    // BC6
    {
        auto& c = rep.bc[5];
        bool open = false;
        for (const auto& r : sw.runs) {
            bool active;
            long long partner;
            if (r.slave > 0) {
                active = r.start <= i && (r.steps() > i - r.start + 1 || r.end == End::open);
                partner = r.start;
            } else {
                active = r.start > i && r.steps() > r.start - i;
                partner = r.start + ul;
            }
            if (!active)
                continue;
            auto it = swp.run_at.find(partner);
            if (it == swp.run_at.end())
                continue;
            const Trajectory& r2 = swp.runs[it->second];
            if (r.end == End::open || r2.end == End::open) {
                open = true;
                continue;
            }
            ExtendedValue before = r.slave > 0 ? segment_value(nwa, r, false, i) : segment_value(nwa, r, true, i);
            ExtendedValue after = r.slave > 0 ? segment_value(nwa, r2, false, i) : segment_value(nwa, r2, true, i + ul);
            bool ok = after.is_bottom() || (!before.is_bottom() && !(before < after));
            if (!ok) {
                c.status = Tri::fail;
                c.detail = "slave " + std::to_string(r.slave) + " invoked at " + std::to_string(r.start) + " accumulates " +
                           after.to_string() + " > " + before.to_string();
                break;
            }
        }
        if (c.status == Tri::pass && open) {
            c.status = Tri::indeterminate;
            c.detail = "a forward slave active at the insert does not terminate in the window";
        }
        settle(c, conclusive);
    }
    return rep;
}

}  // namespace nwa
