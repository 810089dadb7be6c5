#pragma once

#include "nwa/graph.hpp"
#include "nwa/nwa.hpp"
#include "nwa/verdict.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace nwa {

/// Subset construction of a slave over (state, summary) pairs. Every DFA
/// state carries the least value over accepting runs, and the least value
/// when the word start is reached (backward slaves with atstart states).
struct SlaveDfa {
    int slave = 0;
    std::vector<std::vector<int>> delta;  // total; includes the empty set
    std::vector<ExtendedValue> value;
    std::vector<ExtendedValue> start_value;
    int initial = 0;
    int dead = -1;

    int size() const { return static_cast<int>(delta.size()); }
};

/// Throws input_error for sum and sumplus slaves.
SlaveDfa build_slave_dfa(const Nwa& nwa, int slave, std::size_t cap = 100'000);

/// Finite values some accepted word attains (bottom excluded).
std::vector<Rational> value_range(const Nwa& nwa, int slave);

struct DecompositionEntry {
    ExtendedValue value;   // bottom for the empty run
    Automaton recognizer;        // accepts the words whose value is `value`
    Automaton start_recognizer;  // same, for backward runs that reach the word start
    bool deterministic = true;
};

struct ValueDecomposition {
    int slave = 0;
    std::vector<DecompositionEntry> entries;
};

ValueDecomposition decompose_regular(const Nwa& nwa, int slave);

struct ReducedState {
    int master = 0;
    std::vector<int> f1, f2;               // forward obligation ids
    std::vector<std::vector<int>> b;        // per backward (slave, value): DFA states
};

struct ForwardObligation {
    int slave = 0;
    Rational value = 0;
    int dfa_state = 0;
};

struct ReducedEdge {
    int master_transition = 0;
    ExtendedValue value;  // bottom on silent edges
};

/// Generalized Büchi automaton with costs; each graph edge's tag indexes
/// `edge_info`. Accepting sets: master accepting, no pending F1 obligation.
struct ReducedAutomaton {
    RatioGraph graph;
    std::vector<int> initial;
    std::vector<ReducedState> states;
    std::vector<ReducedEdge> edge_info;
    std::vector<ForwardObligation> obligations;
    std::vector<std::pair<int, Rational>> backward_keys;  // (slave, value) per b entry
    std::vector<std::vector<bool>> accepting_sets;
    std::vector<SlaveDfa> dfas;

    std::string describe_state(int id, const Nwa& nwa) const;
};

ReducedAutomaton reduce_to_limavg(const Nwa& nwa, std::size_t cap = 1'000'000);

EmptinessVerdict emptiness_regular(const Nwa& nwa, const Rational& lambda, std::size_t cap = 1'000'000);

/// The reduced automaton as a master-only NWA over letters `a@w<cost>`
/// (non-silent, invoking a one-step min slave) and `a` (silent), with
/// acceptance sets merged by a round-robin counter; plus the sidecar map.
std::pair<Nwa, std::string> reduced_as_nwa(const ReducedAutomaton& r, const Nwa& nwa);

}  // namespace nwa
