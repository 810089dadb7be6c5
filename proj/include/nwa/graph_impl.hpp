#pragma once

#include <deque>

namespace nwa {

template <class Goal, class Allowed>
std::optional<std::vector<int>> shortest_path(const RatioGraph& g, const std::vector<int>& sources, Goal goal,
                                              Allowed allowed) {
    auto out = g.outgoing();
    std::vector<int> via(g.node_count, -2);
    std::deque<int> queue;
    for (int s : sources) {
        if (via[s] != -2)
            continue;
        via[s] = -1;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (goal(v)) {
            std::vector<int> path;
            while (via[v] >= 0) {
                path.push_back(via[v]);
                v = g.edges[via[v]].source;
            }
            return std::vector<int>(path.rbegin(), path.rend());
        }
        for (int e : out[v]) {
            int t = g.edges[e].target;
            if (via[t] != -2 || !allowed(e))
                continue;
            via[t] = e;
            queue.push_back(t);
        }
    }
    return std::nullopt;
}

}  // namespace nwa
