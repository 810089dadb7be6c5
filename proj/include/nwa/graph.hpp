#pragma once

#include "nwa/value.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nwa {

struct RatioEdge {
    int source = 0;
    int target = 0;
    std::int64_t cost = 0;
    std::int64_t count = 1;
    std::int64_t tag = 0;
};

/// Directed multigraph with integer costs and nonnegative counts.
struct RatioGraph {
    int node_count = 0;
    std::vector<RatioEdge> edges;

    int add_node() { return node_count++; }
    int add_edge(int source, int target, std::int64_t cost, std::int64_t count = 1, std::int64_t tag = 0);
    /// out[v] lists edge indices leaving v.
    std::vector<std::vector<int>> outgoing() const;
};

struct SccResult {
    std::vector<int> component;               // node -> component id
    std::vector<std::vector<int>> members;    // in reverse topological order
};

SccResult sccs(const RatioGraph& g);

/// A cycle as a sequence of edge indices, each edge's target being the next
/// edge's source and the last edge's target the first edge's source.
using Cycle = std::vector<int>;

struct CycleResult {
    ExtendedValue value = ExtendedValue::plus_infinity();
    std::optional<Cycle> cycle;
};

std::int64_t cycle_cost(const RatioGraph& g, const Cycle& c);
std::int64_t cycle_count(const RatioGraph& g, const Cycle& c);
bool is_cycle(const RatioGraph& g, const Cycle& c);

/// Minimum of cost/length over all cycles (Karp, per component).
CycleResult min_mean_cycle(const RatioGraph& g);

/// Minimum of cost/count over cycles with count >= 1; -inf if a count-0
/// cycle has negative cost.
CycleResult min_ratio_cycle(const RatioGraph& g);

/// Some cycle of negative total cost, or nothing.
std::optional<Cycle> negative_cycle(const RatioGraph& g);

/// Shortest edge path from any of `sources` to any node satisfying `goal`
/// using only edges accepted by `allowed`. Empty path if a source is a goal.
template <class Goal, class Allowed>
std::optional<std::vector<int>> shortest_path(const RatioGraph& g, const std::vector<int>& sources, Goal goal,
                                              Allowed allowed);

struct BuchiResult {
    ExtendedValue value = ExtendedValue::plus_infinity();
    std::vector<int> stem;   // edges from an initial node to the cycle start
    Cycle cycle;             // optimal cycle
    std::vector<int> tour;   // closed walk from the cycle start through every accepting set
};

/// Infimum over infinite paths from `initial` that visit every accepting set
/// infinitely often of the liminf of cost/count prefix ratios. Paths must
/// take count >= 1 edges infinitely often.
BuchiResult buchi_ratio_infimum(const RatioGraph& g, const std::vector<int>& initial,
                                const std::vector<std::vector<bool>>& accepting_sets);

struct Automaton;

/// LimAvg infimum of an automaton whose transition labels are costs, under
/// generalized Büchi acceptance. Edge tags of the witness are transition
/// indices.
BuchiResult limavg_buchi_infimum(const Automaton& a, const std::vector<std::vector<int>>& accepting_sets);

}  // namespace nwa

#include "nwa/graph_impl.hpp"
