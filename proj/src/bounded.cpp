#include "nwa/bounded.hpp"

#include "nwa/errors.hpp"
#include "nwa/graph_impl.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace nwa {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = v.size();
        for (auto x : v)
            h ^= std::hash<std::int64_t>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct Step {
    int state;
    std::int64_t weight;
};

struct Space {
    std::map<int, int> offset;
    std::vector<int> owner;
    std::vector<bool> accepting, at_start;
    std::vector<std::vector<std::vector<Step>>> succ;  // [state][letter]
    std::vector<std::vector<std::vector<Step>>> pred;  // [letter][state]
    std::vector<int> births, births_at_start;

    explicit Space(const Nwa& nwa) {
        const int letters = nwa.alphabet.size();
        for (const auto& [j, s] : nwa.slaves) {
            if (s.fn.kind != ValueKind::sum && s.fn.kind != ValueKind::sumplus)
                throw input_error("slave " + std::to_string(j) + " uses " + s.fn.keyword() +
                                  "; the bounded method handles sum and sumplus slaves (use --method regular)");
            offset[j] = static_cast<int>(owner.size());
            for (int q = 0; q < s.core.state_count(); ++q) {
                owner.push_back(j);
                accepting.push_back(s.core.accepting[q]);
                at_start.push_back(s.core.at_start[q]);
            }
        }
        const int n = static_cast<int>(owner.size());
        succ.assign(n, std::vector<std::vector<Step>>(letters));
        pred.assign(letters, std::vector<std::vector<Step>>(n));
        for (const auto& [j, s] : nwa.slaves)
            for (const auto& t : s.core.transitions) {
                std::int64_t w = s.fn.kind == ValueKind::sumplus && t.label < 0 ? -t.label : t.label;
                int from = offset[j] + t.source, to = offset[j] + t.target;
                succ[from][t.letter].push_back({to, w});
                pred[t.letter][to].push_back({from, w});
            }
        for (int g = 0; g < n; ++g) {
            if (owner[g] > 0)
                continue;
            if (accepting[g])
                births.push_back(g);
            if (accepting[g] || at_start[g])
                births_at_start.push_back(g);
        }
    }
};

// Nondecreasing sequences over `items` of length <= max_size.
std::vector<std::vector<int>> multisets(const std::vector<int>& items, int max_size) {
    std::vector<std::vector<int>> out{{}};
    std::vector<int> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (static_cast<int>(cur.size()) == max_size)
            return;
        for (std::size_t i = from; i < items.size(); ++i) {
            cur.push_back(items[i]);
            out.push_back(cur);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<std::int64_t> edge_key(const ConfigEdge& e) {
    std::vector<std::int64_t> k{e.target, e.letter, e.invoked, e.non_silent, e.consumed, e.fresh_weight};
    for (const auto* v : {&e.fwd_weight, &e.bwd_weight})
        k.insert(k.end(), v->begin(), v->end());
    for (const auto* v : {&e.fwd_map, &e.bwd_map})
        k.insert(k.end(), v->begin(), v->end());
    return k;
}

unsigned full_mask(int n) { return n >= 32 ? ~0u : (1u << n) - 1; }

unsigned map_mask(unsigned mask, const std::vector<int>& map) {
    unsigned out = 0;
    for (std::size_t i = 0; i < map.size(); ++i)
        if ((mask >> i) & 1u && map[i] >= 0)
            out |= 1u << map[i];
    return out;
}

std::int64_t masked_weight(unsigned mask, const std::vector<std::int64_t>& w) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if ((mask >> i) & 1u)
            s += w[i];
    return s;
}

}  // namespace

int KConfigGraph::good_count() const { return static_cast<int>(std::count(good.begin(), good.end(), true)); }

std::string KConfigGraph::node_label(int v, const Nwa& nwa) const {
    const KConfig& c = nodes[v];
    std::string s = nwa.master.states[c.master] + " |";
    bool first = true;
    for (const auto* list : {&c.fwd, &c.bwd})
        for (int g : *list) {
            s += (first ? " " : ",") + std::to_string(slave_of_state[g]) + ":" + state_name[g];
            first = false;
        }
    return s;
}

RatioGraph KConfigGraph::good_graph(std::vector<int>* node_of) const {
    RatioGraph r;
    std::vector<int> id(nodes.size(), -1);
    for (std::size_t v = 0; v < nodes.size(); ++v)
        if (good[v]) {
            id[v] = r.add_node();
            if (node_of)
                node_of->push_back(static_cast<int>(v));
        }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& E = edges[e];
        if (id[E.source] >= 0 && id[E.target] >= 0)
            r.add_edge(id[E.source], id[E.target], E.total, E.non_silent ? 1 : 0, static_cast<std::int64_t>(e));
    }
    return r;
}

KConfigGraph build_config_graph(const Nwa& nwa, int k, std::size_t cap) {
    if (k < 1)
        throw input_error("width must be >= 1");
    validate(nwa);
    Space sp(nwa);
    KConfigGraph g;
    g.k = k;
    g.slave_of_state = sp.owner;
    for (const auto& [j, s] : nwa.slaves)
        for (const auto& n : s.core.states)
            g.state_name.push_back(n);

    std::unordered_map<std::vector<std::int64_t>, int, VectorHash> ids;
    auto intern = [&](KConfig c) {
        std::vector<std::int64_t> key{c.master, static_cast<std::int64_t>(c.fwd.size())};
        key.insert(key.end(), c.fwd.begin(), c.fwd.end());
        key.insert(key.end(), c.bwd.begin(), c.bwd.end());
        auto it = ids.find(key);
        if (it != ids.end())
            return it->second;
        if (g.nodes.size() >= cap)
            throw resource_error("k-configuration graph exceeds " + std::to_string(cap) + " nodes");
        int id = static_cast<int>(g.nodes.size());
        ids.emplace(std::move(key), id);
        g.nodes.push_back(std::move(c));
        return id;
    };

    for (int q : nwa.master.initial)
        for (auto& b : multisets(sp.births_at_start, k))
            g.initial.push_back(intern(KConfig{q, {}, b}));

    auto master_out = nwa.master.outgoing();
    const auto births = multisets(sp.births, k);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        const KConfig cur = g.nodes[v];
        const int nf = static_cast<int>(cur.fwd.size()), nb = static_cast<int>(cur.bwd.size());
        std::set<std::vector<std::int64_t>> seen;
        for (int ti : master_out[cur.master]) {
            const Transition& t = nwa.master.transitions[ti];
            const int a = t.letter;
            const int j = static_cast<int>(t.label);

            std::vector<std::vector<Step>> fopts(nf), bopts(nb);
            bool dead = false;
            for (int i = 0; i < nf; ++i) {
                fopts[i] = sp.succ[cur.fwd[i]][a];
                dead |= fopts[i].empty();
            }
            for (int i = 0; i < nb; ++i) {
                for (const Step& s : sp.pred[a][cur.bwd[i]])
                    if (!sp.accepting[s.state])
                        bopts[i].push_back(s);
                dead |= bopts[i].empty();
            }
            if (dead)
                continue;

            std::vector<int> fchoice(nf, 0), bchoice(nb, 0);
            for (;;) {
                // One invocation option: kind 0 silent, 1 new forward, 2 forward ending at once,
                // 3 backward of length one, 4 consume a backward slot.
                struct Option {
                    int kind;
                    int state;
                    std::int64_t weight;
                };
                std::vector<Option> options;
                if (j == 0) {
                    options.push_back({0, -1, 0});
                } else {
                    for (int q0 : nwa.slave(j).core.initial) {
                        int g0 = sp.offset[j] + q0;
                        if (sp.accepting[g0]) {
                            options.push_back({0, -1, 0});
                            continue;
                        }
                        if (j > 0) {
                            for (const Step& s : sp.succ[g0][a])
                                options.push_back({sp.accepting[s.state] ? 2 : 1, s.state, s.weight});
                        } else {
                            for (const Step& s : sp.succ[g0][a])
                                if (sp.accepting[s.state])
                                    options.push_back({3, -1, s.weight});
                            for (int i = 0; i < nb; ++i)
                                if (bopts[i][bchoice[i]].state == g0)
                                    options.push_back({4, i, 0});
                        }
                    }
                }
                for (const Option& o : options) {
                    ConfigEdge e;
                    e.source = static_cast<int>(v);
                    e.letter = a;
                    e.invoked = j;
                    e.non_silent = o.kind != 0;
                    KConfig next;
                    next.master = t.target;
                    e.fwd_map.assign(nf, -1);
                    e.bwd_map.assign(nb, -1);
                    for (int i = 0; i < nf; ++i) {
                        const Step& s = fopts[i][fchoice[i]];
                        e.fwd_weight.push_back(s.weight);
                        if (!sp.accepting[s.state]) {
                            e.fwd_map[i] = static_cast<int>(next.fwd.size());
                            next.fwd.push_back(s.state);
                        }
                    }
                    if (o.kind == 1)
                        next.fwd.push_back(o.state);
                    if (o.kind >= 1 && o.kind <= 3)
                        e.fresh_weight = o.weight;
                    for (int i = 0; i < nb; ++i) {
                        const Step& s = bopts[i][bchoice[i]];
                        e.bwd_weight.push_back(s.weight);
                        if (o.kind == 4 && o.state == i) {
                            e.consumed = i;
                            continue;
                        }
                        e.bwd_map[i] = static_cast<int>(next.bwd.size());
                        next.bwd.push_back(s.state);
                    }
                    e.total = e.fresh_weight;
                    for (auto w : e.fwd_weight)
                        e.total += w;
                    for (auto w : e.bwd_weight)
                        e.total += w;
                    if (next.occupied() > k)
                        continue;
                    for (const auto& b : births) {
                        if (next.occupied() + static_cast<int>(b.size()) > k)
                            continue;
                        KConfig target = next;
                        target.bwd.insert(target.bwd.end(), b.begin(), b.end());
                        ConfigEdge edge = e;
                        edge.target = intern(std::move(target));
                        if (seen.insert(edge_key(edge)).second)
                            g.edges.push_back(std::move(edge));
                    }
                }

                int i = 0;
                for (; i < nf + nb; ++i) {
                    int& c = i < nf ? fchoice[i] : bchoice[i - nf];
                    int limit = static_cast<int>(i < nf ? fopts[i].size() : bopts[i - nf].size());
                    if (++c < limit)
                        break;
                    c = 0;
                }
                if (i == nf + nb)
                    break;
            }
        }
    }

    // Breakpoint product: the mask holds the slots alive since the last
    // breakpoint; an accepting run needs infinitely many breakpoints.
    g.master_accepting.resize(g.nodes.size());
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        g.master_accepting[v] = nwa.master.accepting[g.nodes[v].master];
    std::vector<std::vector<int>> out(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        out[g.edges[e].source].push_back(static_cast<int>(e));

    RatioGraph h;
    std::map<std::pair<int, unsigned>, int> hid;
    std::vector<std::pair<int, unsigned>> hnode;
    std::vector<bool> breakpoint;
    auto hintern = [&](int v, unsigned m) {
        auto it = hid.find({v, m});
        if (it != hid.end())
            return it->second;
        if (hnode.size() >= 4 * cap)
            throw resource_error("acceptance product exceeds " + std::to_string(4 * cap) + " nodes");
        int id = h.add_node();
        hid.emplace(std::make_pair(v, m), id);
        hnode.push_back({v, m});
        return id;
    };
    for (int v : g.initial)
        hintern(v, full_mask(g.nodes[v].occupied()));
    for (std::size_t x = 0; x < hnode.size(); ++x) {
        auto [v, m] = hnode[x];
        const int nf = static_cast<int>(g.nodes[v].fwd.size());
        for (int e : out[v]) {
            const auto& E = g.edges[e];
            const int tf = static_cast<int>(g.nodes[E.target].fwd.size());
            unsigned next = map_mask(m & full_mask(nf), E.fwd_map) | (map_mask(m >> nf, E.bwd_map) << tf);
            bool bp = next == 0;
            if (bp)
                next = full_mask(g.nodes[E.target].occupied());
            h.add_edge(static_cast<int>(x), hintern(E.target, next), 0, E.non_silent ? 1 : 0, e);
            breakpoint.push_back(bp);
        }
    }
    SccResult s = sccs(h);
    std::vector<char> acc(s.members.size()), ns(s.members.size()), bp(s.members.size());
    for (int x = 0; x < h.node_count; ++x)
        if (g.master_accepting[hnode[x].first])
            acc[s.component[x]] = 1;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        const auto& E = h.edges[e];
        int c = s.component[E.source];
        if (c != s.component[E.target])
            continue;
        if (E.count > 0)
            ns[c] = 1;
        if (breakpoint[e])
            bp[c] = 1;
    }
    g.good.assign(g.nodes.size(), false);
    for (int x = 0; x < h.node_count; ++x) {
        int c = s.component[x];
        if (acc[c] && ns[c] && bp[c])
            g.good[hnode[x].first] = true;
    }
    return g;
}

std::string to_dot(const KConfigGraph& g, const Nwa& nwa) {
    std::ostringstream out;
    out << "digraph kconfig {\n";
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (g.good[v])
            out << "  n" << v << " [label=\"" << g.node_label(static_cast<int>(v), nwa) << "\""
                << (g.master_accepting[v] ? ", peripheries=2" : "") << "];\n";
    for (const auto& e : g.edges) {
        if (!g.good[e.source] || !g.good[e.target])
            continue;
        out << "  n" << e.source << " -> n" << e.target << " [label=\"" << nwa.alphabet.name(e.letter) << " / invoke "
            << e.invoked << " / w=[";
        bool first = true;
        auto put = [&](std::int64_t w) {
            out << (first ? "" : ",") << w;
            first = false;
        };
        for (auto w : e.fwd_weight)
            put(w);
        for (auto w : e.bwd_weight)
            put(w);
        if (e.non_silent && e.consumed < 0)
            put(e.fresh_weight);
        out << "]\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::optional<StarWitness> condition_star(const KConfigGraph& g) {
    for (int f = 1; f <= g.k; ++f) {
        RatioGraph layer;
        std::vector<int> id(g.nodes.size(), -1);
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            if (g.good[v] && static_cast<int>(g.nodes[v].fwd.size()) >= f)
                id[v] = layer.add_node();
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const auto& E = g.edges[e];
            if (id[E.source] < 0 || id[E.target] < 0)
                continue;
            bool keep = true;
            std::int64_t cost = 0;
            for (int i = 0; i < f && keep; ++i) {
                keep = E.fwd_map[i] == i;
                cost += E.fwd_weight[i];
            }
            if (keep)
                layer.add_edge(id[E.source], id[E.target], cost, 1, static_cast<std::int64_t>(e));
        }
        if (auto c = negative_cycle(layer)) {
            StarWitness w;
            w.focus = f;
            for (int e : *c) {
                w.cycle.push_back(static_cast<int>(layer.edges[e].tag));
                w.gain += layer.edges[e].cost;
            }
            return w;
        }
    }
    return std::nullopt;
}

bool restriction_realizable(const KConfigGraph& g, int v, unsigned restricted) {
    const unsigned all = full_mask(static_cast<int>(g.nodes[v].bwd.size()));
    restricted &= all;
    if (restricted == 0 || restricted == all)
        return true;
    std::vector<std::vector<int>> out(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (g.good[g.edges[e].source] && g.good[g.edges[e].target])
            out[g.edges[e].source].push_back(static_cast<int>(e));
    std::set<std::tuple<int, unsigned, unsigned>> seen;
    std::deque<std::tuple<int, unsigned, unsigned>> queue;
    queue.push_back({v, restricted, all & ~restricted});
    seen.insert(queue.front());
    while (!queue.empty()) {
        auto [u, r, o] = queue.front();
        queue.pop_front();
        if (o == 0)
            return true;
        for (int e : out[u]) {
            const auto& E = g.edges[e];
            if (E.consumed >= 0 && ((r >> E.consumed) & 1u))
                continue;
            std::tuple<int, unsigned, unsigned> next{E.target, map_mask(r, E.bwd_map), map_mask(o, E.bwd_map)};
            if (seen.insert(next).second)
                queue.push_back(next);
        }
    }
    return false;
}

RestrictedInfimum restricted_cycle_infimum(const KConfigGraph& g) {
    // States (v, R, O): O are the non-restricted backward slots still to be
    // invoked before any slot of R. Realizable iff a state with O empty is reachable.
    std::vector<std::vector<int>> out(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (g.good[g.edges[e].source] && g.good[g.edges[e].target])
            out[g.edges[e].source].push_back(static_cast<int>(e));

    using State = std::tuple<int, unsigned, unsigned>;
    std::map<State, int> sid;
    std::vector<State> states;
    std::vector<std::vector<int>> rev;
    auto intern = [&](const State& s) {
        auto it = sid.find(s);
        if (it != sid.end())
            return it->second;
        int id = static_cast<int>(states.size());
        sid.emplace(s, id);
        states.push_back(s);
        rev.emplace_back();
        return id;
    };
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (!g.good[v])
            continue;
        const unsigned all = full_mask(static_cast<int>(g.nodes[v].bwd.size()));
        for (unsigned r = 1; r < all; ++r)
            if ((r & all) == r)
                intern({static_cast<int>(v), r, all & ~r});
    }
    for (std::size_t x = 0; x < states.size(); ++x) {
        auto [u, r, o] = states[x];
        if (o == 0)
            continue;
        for (int e : out[u]) {
            const auto& E = g.edges[e];
            if (E.consumed >= 0 && ((r >> E.consumed) & 1u))
                continue;
            int y = intern({E.target, map_mask(r, E.bwd_map), map_mask(o, E.bwd_map)});
            rev[y].push_back(static_cast<int>(x));
        }
    }
    std::vector<char> ok(states.size(), 0);
    std::deque<int> queue;
    for (std::size_t x = 0; x < states.size(); ++x)
        if (std::get<2>(states[x]) == 0) {
            ok[x] = 1;
            queue.push_back(static_cast<int>(x));
        }
    while (!queue.empty()) {
        int y = queue.front();
        queue.pop_front();
        for (int x : rev[y])
            if (!ok[x]) {
                ok[x] = 1;
                queue.push_back(x);
            }
    }
    auto realizable = [&](int v, unsigned r) {
        const unsigned all = full_mask(static_cast<int>(g.nodes[v].bwd.size()));
        if (r == 0 || r == all)
            return true;
        auto it = sid.find({v, r, all & ~r});
        return it != sid.end() && ok[it->second];
    };

    RatioGraph p;
    std::map<std::pair<int, unsigned>, int> pid;
    std::vector<std::pair<int, unsigned>> pnode;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (!g.good[v])
            continue;
        const unsigned all = full_mask(static_cast<int>(g.nodes[v].bwd.size()));
        for (unsigned r = 0; r <= all; ++r)
            if ((r & all) == r && realizable(static_cast<int>(v), r)) {
                pid[{static_cast<int>(v), r}] = p.add_node();
                pnode.push_back({static_cast<int>(v), r});
            }
    }
    for (int x = 0; x < p.node_count; ++x) {
        auto [v, r] = pnode[x];
        for (int e : out[v]) {
            const auto& E = g.edges[e];
            if (E.consumed >= 0 && ((r >> E.consumed) & 1u))
                continue;
            auto it = pid.find({E.target, map_mask(r, E.bwd_map)});
            if (it == pid.end())
                continue;
            p.add_edge(x, it->second, E.total - masked_weight(r, E.bwd_weight), E.non_silent ? 1 : 0, e);
        }
    }
    CycleResult c = min_ratio_cycle(p);
    RestrictedInfimum res;
    res.value = c.value;
    if (!c.cycle)
        return res;
    for (int e : *c.cycle)
        res.cycle.push_back(static_cast<int>(p.edges[e].tag));
    res.restriction = pnode[p.edges[c.cycle->front()].source].second;
    bool confirmed = res.restriction == 0;
    for (int e : res.cycle)
        confirmed = confirmed || restriction_realizable(g, g.edges[e].source, res.restriction);
    if (!confirmed)
        res.status = "unconfirmed bound";
    return res;
}

namespace {

std::vector<int> tour_from(const KConfigGraph& g, int v) {
    // Closed walk at v through a master-accepting node and a non-silent edge
    // on which every slot present at v ends.
    std::vector<std::vector<int>> out(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (g.good[g.edges[e].source] && g.good[g.edges[e].target])
            out[g.edges[e].source].push_back(static_cast<int>(e));
    using State = std::tuple<int, unsigned, int>;
    std::map<State, std::pair<State, int>> via;
    State start{v, full_mask(g.nodes[v].occupied()), g.master_accepting[v] ? 1 : 0};
    std::deque<State> queue{start};
    via.emplace(start, std::make_pair(start, -1));
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        auto [u, m, flags] = s;
        if (u == v && m == 0 && flags == 3 && s != start) {
            std::vector<int> path;
            while (via.at(s).second >= 0) {
                path.push_back(via.at(s).second);
                s = via.at(s).first;
            }
            return {path.rbegin(), path.rend()};
        }
        const int nf = static_cast<int>(g.nodes[u].fwd.size());
        for (int e : out[u]) {
            const auto& E = g.edges[e];
            const int tf = static_cast<int>(g.nodes[E.target].fwd.size());
            unsigned next = map_mask(m & full_mask(nf), E.fwd_map) | (map_mask(m >> nf, E.bwd_map) << tf);
            int f = flags | (g.master_accepting[E.target] ? 1 : 0) | (E.non_silent ? 2 : 0);
            State t{E.target, next, f};
            if (via.emplace(t, std::make_pair(s, e)).second)
                queue.push_back(t);
        }
    }
    return {};
}

}  // namespace

EmptinessVerdict emptiness_bounded(const Nwa& nwa, int k, const Rational& lambda, std::size_t cap) {
    KConfigGraph g = build_config_graph(nwa, k, cap);
    EmptinessVerdict verdict;
    verdict.lambda = lambda;

    std::vector<int> cycle;
    unsigned restriction = 0;
    if (auto star = condition_star(g)) {
        verdict.infimum = ExtendedValue::minus_infinity();
        cycle = star->cycle;
        verdict.status = "condition (*): focus of " + std::to_string(star->focus) + " forward slot(s), gain " +
                         std::to_string(star->gain);
    } else {
        RestrictedInfimum r = restricted_cycle_infimum(g);
        verdict.infimum = r.value;
        cycle = r.cycle;
        restriction = r.restriction;
        verdict.status = r.status;
    }
    verdict.yes = !verdict.infimum.is_plus_infinity() && verdict.infimum <= ExtendedValue(lambda);
    if (cycle.empty())
        return verdict;

    const int v = g.edges[cycle.front()].source;
    for (int e : cycle)
        verdict.witness_cycle.push_back("n" + std::to_string(g.edges[e].source));
    for (int i = 0; i < 32; ++i)
        if ((restriction >> i) & 1u)
            verdict.restriction.push_back("b" + std::to_string(i));

    RatioGraph all;
    for (std::size_t x = 0; x < g.nodes.size(); ++x)
        all.add_node();
    for (const auto& e : g.edges)
        all.add_edge(e.source, e.target, 0, 1, e.letter);
    auto stem = shortest_path(all, g.initial, [&](int u) { return u == v; }, [](int) { return true; });
    std::vector<int> tour = tour_from(g, v);
    if (!stem || tour.empty()) {
        verdict.status += "; no witness lasso found";
        return verdict;
    }
    LassoPlan plan;
    for (int e : *stem)
        plan.stem.push_back(g.edges[e].letter);
    for (int e : cycle) {
        plan.cycle.push_back(g.edges[e].letter);
        plan.cycle_cost += g.edges[e].total;
        plan.cycle_count += g.edges[e].non_silent;
    }
    for (int e : tour) {
        plan.tour.push_back(g.edges[e].letter);
        plan.tour_cost += g.edges[e].total;
        plan.tour_count += g.edges[e].non_silent;
    }
    if (verdict.infimum.is_minus_infinity()) {
        LassoWord w;
        w.prefix = plan.stem;
        for (int i = 0; i < 2048; ++i)
            w.period.insert(w.period.end(), plan.cycle.begin(), plan.cycle.end());
        w.period.insert(w.period.end(), plan.tour.begin(), plan.tour.end());
        verdict.witness = std::move(w);
        verdict.status += "; witness pumps the cycle 2048 times";
        return verdict;
    }
    Rational target = verdict.infimum.value() + Rational(1, 100);
    if (restriction != 0) {
        target = plan.cycle_count > 0 ? plan.cycle_cost / plan.cycle_count + Rational(1, 100) : target;
        verdict.status += "; lasso witness cannot exclude the restricted slots";
    }
    verdict.witness = canonical_lasso(plan_lasso(plan, target));
    return verdict;
}

std::vector<CycleStats> enumerate_simple_cycles(const KConfigGraph& g, std::size_t cap) {
    if (static_cast<std::size_t>(g.good_count()) > cap)
        throw resource_error("cycle enumeration limited to " + std::to_string(cap) + " nodes");
    std::vector<int> nodes;
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (g.good[v])
            nodes.push_back(static_cast<int>(v));
    std::vector<std::vector<int>> out(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (g.good[g.edges[e].source] && g.good[g.edges[e].target])
            out[g.edges[e].source].push_back(static_cast<int>(e));

    std::vector<CycleStats> result;
    std::vector<int> stack;
    std::vector<char> on(g.nodes.size(), 0);
    auto record = [&]() {
        CycleStats c;
        c.cycle = stack;
        const KConfig& first = g.nodes[g.edges[stack.front()].source];
        int f = static_cast<int>(first.fwd.size());
        for (int e : stack) {
            const auto& E = g.edges[e];
            int ff = 0;
            while (ff < static_cast<int>(E.fwd_map.size()) && E.fwd_map[ff] == ff)
                ++ff;
            f = std::min(f, ff);
            c.total += E.total;
            c.count += E.non_silent;
        }
        c.fixed_forward = f;
        c.gain.assign(f + 1, 0);
        for (int e : stack)
            for (int i = 0; i < f; ++i)
                for (int j = i + 1; j <= f; ++j)
                    c.gain[j] += g.edges[e].fwd_weight[i];
        for (int p = 0; p < static_cast<int>(first.bwd.size()); ++p) {
            int pos = p;
            for (int e : stack) {
                const auto& E = g.edges[e];
                pos = pos >= 0 ? E.bwd_map[pos] : -1;
            }
            if (pos == p)
                c.fixed_backward |= 1u << p;
        }
        for (unsigned r = 0;; r = (r - c.fixed_backward) & c.fixed_backward) {
            CycleStats::Restriction R;
            R.mask = r;
            R.cost = c.total;
            for (int e : stack)
                for (int p = 0; p < 32; ++p)
                    if ((r >> p) & 1u)
                        R.cost -= g.edges[e].bwd_weight[p];
            for (int e : stack)
                R.realizable = R.realizable || restriction_realizable(g, g.edges[e].source, r);
            c.restrictions.push_back(R);
            if (r == c.fixed_backward)
                break;
        }
        result.push_back(std::move(c));
        if (result.size() > 1'000'000)
            throw resource_error("more than 10^6 simple cycles");
    };

    for (int s : nodes) {
        // Nodes >= s that can reach s inside the subgraph of nodes >= s.
        std::vector<char> useful(g.nodes.size(), 0);
        std::vector<std::vector<int>> in(g.nodes.size());
        for (int u : nodes)
            if (u >= s)
                for (int e : out[u])
                    if (g.edges[e].target >= s)
                        in[g.edges[e].target].push_back(u);
        std::deque<int> q{s};
        useful[s] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int w : in[u])
                if (!useful[w]) {
                    useful[w] = 1;
                    q.push_back(w);
                }
        }
        std::function<void(int)> dfs = [&](int u) {
            on[u] = 1;
            for (int e : out[u]) {
                int t = g.edges[e].target;
                if (t == s) {
                    stack.push_back(e);
                    record();
                    stack.pop_back();
                } else if (t > s && useful[t] && !on[t]) {
                    stack.push_back(e);
                    dfs(t);
                    stack.pop_back();
                }
            }
            on[u] = 0;
        };
        dfs(s);
    }
    return result;
}

}  // namespace nwa
