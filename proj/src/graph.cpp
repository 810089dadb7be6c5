#include "nwa/graph.hpp"

#include "nwa/automaton.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nwa {

namespace {

using i128 = __int128;

struct LocalEdge {
    int source;
    int target;
    i128 cost;
};

/// Bellman-Ford from a virtual source reaching every node at distance 0.
/// Returns local edge indices of a negative cycle, in path order.
std::optional<std::vector<int>> bellman_ford_cycle(int n, const std::vector<LocalEdge>& edges) {
    std::vector<i128> dist(n, 0);
    std::vector<int> parent(n, -1);
    std::vector<int> mark(n);

    auto parent_cycle = [&]() -> std::optional<std::vector<int>> {
        std::fill(mark.begin(), mark.end(), 0);
        for (int s = 0; s < n; ++s) {
            if (mark[s])
                continue;
            int v = s;
            while (v >= 0 && mark[v] == 0) {
                mark[v] = s + 1;
                v = parent[v] < 0 ? -1 : edges[parent[v]].source;
            }
            if (v >= 0 && mark[v] == s + 1) {
                std::vector<int> cyc;
                int u = v;
                do {
                    cyc.push_back(parent[u]);
                    u = edges[parent[u]].source;
                } while (u != v);
                std::reverse(cyc.begin(), cyc.end());
                return cyc;
            }
            for (int u = s; u >= 0 && mark[u] == s + 1; u = parent[u] < 0 ? -1 : edges[parent[u]].source)
                mark[u] = -1;
        }
        return std::nullopt;
    };

    for (int round = 0; round <= n; ++round) {
        bool changed = false;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            const auto& E = edges[e];
            if (dist[E.source] + E.cost < dist[E.target]) {
                dist[E.target] = dist[E.source] + E.cost;
                parent[E.target] = e;
                changed = true;
            }
        }
        if (!changed)
            return std::nullopt;
        if (auto c = parent_cycle())
            return c;
    }
    // Unreachable: after n rounds of change the parent graph holds a cycle.
    throw std::logic_error("bellman-ford: change without parent cycle");
}

std::vector<int> internal_edges(const RatioGraph& g, const SccResult& s) {
    std::vector<int> ids;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (s.component[g.edges[e].source] == s.component[g.edges[e].target])
            ids.push_back(e);
    return ids;
}

std::optional<Cycle> negative_cycle_on(const RatioGraph& g, const std::vector<int>& ids,
                                       const std::vector<i128>& costs) {
    std::vector<LocalEdge> local;
    local.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        local.push_back({g.edges[ids[i]].source, g.edges[ids[i]].target, costs[i]});
    auto c = bellman_ford_cycle(g.node_count, local);
    if (!c)
        return std::nullopt;
    Cycle out;
    for (int le : *c)
        out.push_back(ids[le]);
    return out;
}

Rational ratio_of(const RatioGraph& g, const Cycle& c) { return Rational(cycle_cost(g, c), cycle_count(g, c)); }

}  // namespace

int RatioGraph::add_edge(int source, int target, std::int64_t cost, std::int64_t count, std::int64_t tag) {
    edges.push_back({source, target, cost, count, tag});
    return static_cast<int>(edges.size()) - 1;
}

std::vector<std::vector<int>> RatioGraph::outgoing() const {
    std::vector<std::vector<int>> out(node_count);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        out[edges[e].source].push_back(e);
    return out;
}

SccResult sccs(const RatioGraph& g) {
    auto out = g.outgoing();
    int n = g.node_count;
    SccResult r;
    r.component.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    int counter = 0;
    struct Frame {
        int v;
        std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0)
            continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < out[f.v].size()) {
                int w = g.edges[out[f.v][f.next++]].target;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            int v = f.v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    r.component[w] = static_cast<int>(r.members.size());
                    comp.push_back(w);
                } while (w != v);
                r.members.push_back(std::move(comp));
            }
        }
    }
    return r;
}

std::int64_t cycle_cost(const RatioGraph& g, const Cycle& c) {
    std::int64_t s = 0;
    for (int e : c)
        s += g.edges[e].cost;
    return s;
}

std::int64_t cycle_count(const RatioGraph& g, const Cycle& c) {
    std::int64_t s = 0;
    for (int e : c)
        s += g.edges[e].count;
    return s;
}

bool is_cycle(const RatioGraph& g, const Cycle& c) {
    if (c.empty())
        return false;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (g.edges[c[i]].target != g.edges[c[(i + 1) % c.size()]].source)
            return false;
    return true;
}

CycleResult min_mean_cycle(const RatioGraph& g) {
    SccResult s = sccs(g);
    auto out_all = g.outgoing();
    CycleResult best;
    std::vector<int> local(g.node_count, -1);
    for (const auto& members : s.members) {
        int n = static_cast<int>(members.size());
        for (int i = 0; i < n; ++i)
            local[members[i]] = i;
        std::vector<int> ids;
        for (int v : members)
            for (int e : out_all[v])
                if (s.component[g.edges[e].target] == s.component[v])
                    ids.push_back(e);
        if (ids.empty())
            continue;

        // Karp: D[k][v] = least cost of a k-edge walk from members[0] to v.
        constexpr i128 inf = std::numeric_limits<std::int64_t>::max();
        std::vector<std::vector<i128>> D(n + 1, std::vector<i128>(n, inf));
        D[0][0] = 0;
        for (int k = 1; k <= n; ++k)
            for (int e : ids) {
                int u = local[g.edges[e].source], v = local[g.edges[e].target];
                if (D[k - 1][u] != inf && D[k - 1][u] + g.edges[e].cost < D[k][v])
                    D[k][v] = D[k - 1][u] + g.edges[e].cost;
            }
        std::optional<Rational> lambda;
        for (int v = 0; v < n; ++v) {
            if (D[n][v] == inf)
                continue;
            std::optional<Rational> worst;
            for (int k = 0; k < n; ++k) {
                if (D[k][v] == inf)
                    continue;
                Rational r(static_cast<std::int64_t>(D[n][v] - D[k][v]), static_cast<std::int64_t>(n - k));
                if (!worst || *worst < r)
                    worst = r;
            }
            if (worst && (!lambda || *worst < *lambda))
                lambda = worst;
        }
        if (!lambda || !(ExtendedValue(*lambda) < best.value))
            continue;

        // Witness: a cycle of zero reduced cost among tight edges.
        std::int64_t p = static_cast<std::int64_t>(boost::multiprecision::numerator(*lambda));
        std::int64_t q = static_cast<std::int64_t>(boost::multiprecision::denominator(*lambda));
        std::vector<LocalEdge> red;
        for (int e : ids)
            red.push_back({local[g.edges[e].source], local[g.edges[e].target], i128(g.edges[e].cost) * q - p});
        std::vector<i128> d(n, 0);
        for (int round = 0; round < n; ++round)
            for (const auto& E : red)
                d[E.target] = std::min(d[E.target], d[E.source] + E.cost);
        std::vector<std::vector<int>> tight(n);
        for (std::size_t i = 0; i < red.size(); ++i)
            if (d[red[i].source] + red[i].cost == d[red[i].target])
                tight[red[i].source].push_back(static_cast<int>(i));
        std::vector<int> color(n, 0), via(n, -1);
        std::optional<Cycle> found;
        for (int root = 0; root < n && !found; ++root) {
            if (color[root])
                continue;
            std::vector<std::pair<int, std::size_t>> st{{root, 0}};
            color[root] = 1;
            while (!st.empty() && !found) {
                auto& [v, i] = st.back();
                if (i == tight[v].size()) {
                    color[v] = 2;
                    st.pop_back();
                    continue;
                }
                int le = tight[v][i++];
                int w = red[le].target;
                if (color[w] == 0) {
                    color[w] = 1;
                    via[w] = le;
                    st.push_back({w, 0});
                } else if (color[w] == 1) {
                    Cycle c{ids[le]};
                    for (int u = v; u != w; u = red[via[u]].source)
                        c.push_back(ids[via[u]]);
                    std::reverse(c.begin() + 1, c.end());
                    std::rotate(c.begin(), c.begin() + 1, c.end());
                    found = c;
                }
            }
        }
        if (!found || Rational(cycle_cost(g, *found), static_cast<std::int64_t>(found->size())) != *lambda)
            throw std::logic_error("min_mean_cycle: witness does not attain Karp value");
        best.value = *lambda;
        best.cycle = found;
    }
    return best;
}

std::optional<Cycle> negative_cycle(const RatioGraph& g) {
    std::vector<int> ids(g.edges.size());
    std::vector<i128> costs(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        ids[e] = static_cast<int>(e);
        costs[e] = g.edges[e].cost;
    }
    return negative_cycle_on(g, ids, costs);
}

CycleResult min_ratio_cycle(const RatioGraph& g) {
    SccResult s = sccs(g);
    std::vector<int> ids = internal_edges(g, s);

    std::vector<int> zero;
    std::vector<i128> zero_costs;
    for (int e : ids)
        if (g.edges[e].count == 0) {
            zero.push_back(e);
            zero_costs.push_back(g.edges[e].cost);
        }
    if (auto c = negative_cycle_on(g, zero, zero_costs))
        return {ExtendedValue::minus_infinity(), c};

    std::optional<Cycle> current;
    for (int e : ids) {
        if (g.edges[e].count == 0)
            continue;
        int comp = s.component[g.edges[e].source];
        auto back = shortest_path(
            g, {g.edges[e].target}, [&](int v) { return v == g.edges[e].source; },
            [&](int f) { return s.component[g.edges[f].source] == comp && s.component[g.edges[f].target] == comp; });
        Cycle c{e};
        c.insert(c.end(), back->begin(), back->end());
        current = c;
        break;
    }
    if (!current)
        return {};

    Rational lambda = ratio_of(g, *current);
    std::vector<i128> costs(ids.size());
    for (;;) {
        i128 p = static_cast<std::int64_t>(boost::multiprecision::numerator(lambda));
        i128 q = static_cast<std::int64_t>(boost::multiprecision::denominator(lambda));
        for (std::size_t i = 0; i < ids.size(); ++i)
            costs[i] = i128(g.edges[ids[i]].cost) * q - p * g.edges[ids[i]].count;
        auto c = negative_cycle_on(g, ids, costs);
        if (!c)
            break;
        if (cycle_count(g, *c) <= 0)
            throw std::logic_error("min_ratio_cycle: improving cycle without count");
        current = c;
        lambda = ratio_of(g, *c);
    }
    return {ExtendedValue(lambda), current};
}

BuchiResult buchi_ratio_infimum(const RatioGraph& g, const std::vector<int>& initial,
                                const std::vector<std::vector<bool>>& accepting_sets) {
    BuchiResult best;
    std::vector<bool> reachable(g.node_count, false);
    {
        auto out = g.outgoing();
        std::vector<int> stack;
        for (int v : initial)
            if (!reachable[v]) {
                reachable[v] = true;
                stack.push_back(v);
            }
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : out[v]) {
                int t = g.edges[e].target;
                if (!reachable[t]) {
                    reachable[t] = true;
                    stack.push_back(t);
                }
            }
        }
    }

    SccResult s = sccs(g);
    std::vector<std::vector<int>> comp_edges(s.members.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (s.component[g.edges[e].source] == s.component[g.edges[e].target])
            comp_edges[s.component[g.edges[e].source]].push_back(e);

    int best_comp = -1;
    for (int c = 0; c < static_cast<int>(s.members.size()); ++c) {
        const auto& members = s.members[c];
        if (comp_edges[c].empty() || !reachable[members.front()])
            continue;
        bool ok = std::all_of(accepting_sets.begin(), accepting_sets.end(), [&](const std::vector<bool>& set) {
            return std::any_of(members.begin(), members.end(), [&](int v) { return set[v]; });
        });
        ok = ok && std::any_of(comp_edges[c].begin(), comp_edges[c].end(), [&](int e) { return g.edges[e].count > 0; });
        if (!ok)
            continue;
        RatioGraph sub;
        sub.node_count = g.node_count;
        for (int e : comp_edges[c])
            sub.add_edge(g.edges[e].source, g.edges[e].target, g.edges[e].cost, g.edges[e].count, e);
        CycleResult r = min_ratio_cycle(sub);
        if (best_comp >= 0 && !(r.value < best.value))
            continue;
        best_comp = c;
        best.value = r.value;
        best.cycle.clear();
        for (int e : *r.cycle)
            best.cycle.push_back(static_cast<int>(sub.edges[e].tag));
    }
    if (best_comp < 0)
        return best;

    int start = g.edges[best.cycle.front()].source;
    best.stem = *shortest_path(g, initial, [&](int v) { return v == start; }, [](int) { return true; });
    auto inside = [&](int e) {
        return s.component[g.edges[e].source] == best_comp && s.component[g.edges[e].target] == best_comp;
    };
    int at = start;
    if (cycle_count(g, best.cycle) == 0) {
        auto counted = [&](int e) { return inside(e) && g.edges[e].count > 0; };
        auto out = g.outgoing();
        auto p = *shortest_path(
            g, {at}, [&](int v) { return std::any_of(out[v].begin(), out[v].end(), counted); }, inside);
        best.tour.insert(best.tour.end(), p.begin(), p.end());
        int v = p.empty() ? at : g.edges[p.back()].target;
        int e = *std::find_if(out[v].begin(), out[v].end(), counted);
        best.tour.push_back(e);
        at = g.edges[e].target;
    }
    for (const auto& set : accepting_sets) {
        bool hit = std::any_of(best.cycle.begin(), best.cycle.end(), [&](int e) { return set[g.edges[e].source]; }) ||
                   std::any_of(best.tour.begin(), best.tour.end(), [&](int e) { return set[g.edges[e].source]; });
        if (hit)
            continue;
        auto p = *shortest_path(g, {at}, [&](int v) { return set[v]; }, inside);
        best.tour.insert(best.tour.end(), p.begin(), p.end());
        if (!p.empty())
            at = g.edges[p.back()].target;
    }
    if (at != start) {
        auto p = *shortest_path(g, {at}, [&](int v) { return v == start; }, inside);
        best.tour.insert(best.tour.end(), p.begin(), p.end());
    }
    return best;
}

BuchiResult limavg_buchi_infimum(const Automaton& a, const std::vector<std::vector<int>>& accepting_sets) {
    RatioGraph g;
    g.node_count = a.state_count();
    for (int i = 0; i < static_cast<int>(a.transitions.size()); ++i)
        g.add_edge(a.transitions[i].source, a.transitions[i].target, a.transitions[i].label, 1, i);
    std::vector<std::vector<bool>> sets;
    for (const auto& set : accepting_sets) {
        std::vector<bool> b(g.node_count, false);
        for (int q : set)
            b.at(q) = true;
        sets.push_back(std::move(b));
    }
    BuchiResult r = buchi_ratio_infimum(g, a.initial, sets);
    auto retag = [&](std::vector<int>& v) {
        for (int& e : v)
            e = static_cast<int>(g.edges[e].tag);
    };
    retag(r.stem);
    retag(r.cycle);
    retag(r.tour);
    return r;
}

}  // namespace nwa
