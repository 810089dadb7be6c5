#pragma once

#include "nwa/graph.hpp"
#include "nwa/nwa.hpp"
#include "nwa/verdict.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nwa {

/// Master state plus active slaves. Forward slots are in invocation order,
/// backward slots in birth order; entries are global slave state ids.
struct KConfig {
    int master = 0;
    std::vector<int> fwd, bwd;

    int occupied() const { return static_cast<int>(fwd.size() + bwd.size()); }
    friend bool operator==(const KConfig&, const KConfig&) = default;
};

struct ConfigEdge {
    int source = 0, target = 0;
    int letter = 0;
    int invoked = 0;
    bool non_silent = false;
    std::vector<std::int64_t> fwd_weight, bwd_weight;  // per source slot
    std::vector<int> fwd_map, bwd_map;                 // source slot -> target slot, -1 when it ends
    int consumed = -1;                                 // backward slot consumed by the invocation
    std::int64_t fresh_weight = 0;                     // first step of a slave that ends on this letter or starts here
    std::int64_t total = 0;                            // all slave weight on this edge
};

struct KConfigGraph {
    int k = 0;
    std::vector<KConfig> nodes;
    std::vector<ConfigEdge> edges;
    std::vector<int> initial;
    std::vector<bool> good;  // node occurs infinitely often in some accepting run
    std::vector<int> slave_of_state;
    std::vector<std::string> state_name;
    std::vector<bool> master_accepting;

    int good_count() const;
    std::string node_label(int v, const Nwa& nwa) const;
    /// Good nodes and the edges among them as a ratio graph; tag = edge index.
    RatioGraph good_graph(std::vector<int>* node_of = nullptr) const;
};

/// Sum and sumplus slaves only (sumplus contributes absolute weights).
KConfigGraph build_config_graph(const Nwa& nwa, int k, std::size_t cap = 1'000'000);

std::string to_dot(const KConfigGraph& g, const Nwa& nwa);

struct StarWitness {
    std::vector<int> cycle;  // config edge ids
    int focus = 0;           // leading forward slots
    std::int64_t gain = 0;
};

std::optional<StarWitness> condition_star(const KConfigGraph& g);

/// Whether, leaving the graph at node v, the backward slots outside
/// `restricted` (a bitmask over v's backward slots) can all be invoked
/// before any restricted one.
bool restriction_realizable(const KConfigGraph& g, int v, unsigned restricted);

struct RestrictedInfimum {
    ExtendedValue value = ExtendedValue::plus_infinity();
    std::vector<int> cycle;     // config edge ids
    unsigned restriction = 0;   // backward slots of the cycle's first node
    std::string status = "confirmed";
};

RestrictedInfimum restricted_cycle_infimum(const KConfigGraph& g);

EmptinessVerdict emptiness_bounded(const Nwa& nwa, int k, const Rational& lambda, std::size_t cap = 1'000'000);

struct CycleStats {
    std::vector<int> cycle;  // config edge ids, starting at its least node
    int fixed_forward = 0;   // leading forward slots persisting around the cycle
    unsigned fixed_backward = 0;
    std::vector<std::int64_t> gain;  // gain[f] for focus = first f forward slots
    std::int64_t total = 0;
    std::int64_t count = 0;
    struct Restriction {
        unsigned mask = 0;
        std::int64_t cost = 0;  // total minus restricted slots
        bool realizable = false;
    };
    std::vector<Restriction> restrictions;
};

/// Every simple cycle among good nodes. Throws resource_error above `cap`
/// good nodes or 10^6 cycles.
std::vector<CycleStats> enumerate_simple_cycles(const KConfigGraph& g, std::size_t cap = 200);

}  // namespace nwa
