#pragma once

#include "nwa/graph.hpp"
#include "nwa/nwa.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nwa {

/// Slave states are numbered globally: slaves in index order, states in
/// declaration order.
struct MonitorState {
    int master = 0;
    std::vector<int> f1, f2;  // forward slave states
    std::vector<int> b1, b2;  // backward slave states that may still be consumed
    bool armed = false;

    friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

struct WidthMonitor {
    RatioGraph graph;  // edge tag = master letter; cost 1 on hit edges
    std::vector<MonitorState> states;
    std::vector<int> initial;
    std::vector<bool> hit;  // per edge: invocation consumed from B1
    std::vector<int> slave_offset;
    std::vector<int> slave_of_state;  // global slave state -> slave index

    bool master_accepting(const Nwa& nwa, int s) const { return nwa.master.accepting[states[s].master]; }
};

WidthMonitor build_width_monitor(const Nwa& nwa, std::size_t cap = 1'000'000);

struct FiniteWidthResult {
    bool finite = true;
    std::optional<LassoWord> witness;
    std::size_t monitor_states = 0;
};

FiniteWidthResult check_finite_width(const Nwa& nwa, std::size_t cap = 1'000'000);

struct BarrierBound {
    int slave_states = 0;
    int master_states = 0;
    Integer conf = 0;
    std::int64_t max_weight = 0;
    Integer bound = 0;
};

BarrierBound barrier_bound(const Nwa& nwa);

enum class Tri { pass, fail, indeterminate };
std::string to_string(Tri t);

struct BarrierCondition {
    Tri status = Tri::pass;
    std::string detail;
};

struct BarrierReport {
    std::array<BarrierCondition, 6> bc;
    long long window = 0;  // positions of w' simulated

    Tri is_barrier() const;
};

/// Checks whether `u` is a barrier at `i` in `word` for a deterministic NWA.
/// Backward invocations are simulated over `horizon` periods past the insert;
/// when that is shorter than the conclusive window, passes degrade to
/// indeterminate.
BarrierReport check_barrier(const Nwa& nwa, const LassoWord& word, long long i, const std::vector<int>& u,
                            long long horizon = 64);

}  // namespace nwa
