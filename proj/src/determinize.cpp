#include "nwa/determinize.hpp"

#include "nwa/errors.hpp"
#include "nwa/evaluator.hpp"

#include <functional>
#include <map>

namespace nwa {

namespace {

std::string fresh_name(const Automaton& a, std::string base) {
    while (a.find_state(base) >= 0)
        base += "$";
    return base;
}

// Several initial states become one fresh state with their outgoing transitions.
void merge_initial(Automaton& a, bool& added) {
    if (a.initial.size() <= 1)
        return;
    int s = a.add_state(fresh_name(a, "init$"));
    std::vector<Transition> extra;
    for (int q : a.initial)
        for (const auto& t : a.transitions)
            if (t.source == q)
                extra.push_back({s, t.letter, t.target, t.label});
    for (const auto& t : extra)
        a.add_transition(t.source, t.letter, t.target, t.label);
    a.initial = {s};
    added = true;
}

// An accepting state that can continue is split: the original ends the run,
// a non-accepting copy carries the outgoing transitions.
void split_accepting(Automaton& a, int index, bool& added) {
    const int n = a.state_count();
    for (int q = 0; q < n; ++q) {
        if (!a.accepting[q])
            continue;
        bool continues = false;
        for (const auto& t : a.transitions)
            continues |= t.source == q;
        if (!continues)
            continue;
        for (int i : a.initial)
            if (i == q)
                throw input_error("slave " + std::to_string(index) + ": initial state " + a.states[q] +
                                  " is accepting and has outgoing transitions");
        int c = a.add_state(fresh_name(a, a.states[q] + "$c"));
        a.at_start[c] = a.at_start[q];
        std::vector<Transition> kept;
        std::vector<Transition> extra;
        for (const auto& t : a.transitions) {
            Transition u = t;
            if (t.source == q)
                u.source = c;
            kept.push_back(u);
            if (t.target == q)
                extra.push_back({u.source, t.letter, c, t.label});
        }
        for (const auto& t : extra)
            kept.push_back(t);
        a.transitions = std::move(kept);
        added = true;
    }
}

void check_initial(const Automaton& a, int index) {
    if (a.initial.size() <= 1)
        return;
    for (int q : a.initial)
        if (a.accepting[q])
            throw input_error("slave " + std::to_string(index) + " has several initial states, " + a.states[q] +
                              " among them accepting");
}

}  // namespace

std::string DeterminizedNwa::sidecar() const {
    std::string out;
    for (std::size_t k = 0; k < steering.size(); ++k) {
        out += "h" + std::to_string(k) + ":";
        bool first = true;
        for (const auto& c : steering[k].choices) {
            const Automaton& a = c.automaton == 0 ? normalized.master : normalized.slave(c.automaton).core;
            const Transition& t = a.transitions[c.transition];
            out += first ? " " : ", ";
            first = false;
            if (c.automaton != 0)
                out += std::to_string(c.automaton) + ".";
            out += a.states[t.source] + "->" + a.states[t.target] + ":" + std::to_string(t.label);
        }
        out += "\n";
    }
    return out;
}

DeterminizedNwa determinize(const Nwa& input, std::size_t letter_cap) {
    validate(input);
    DeterminizedNwa d;
    d.normalized = input;
    Nwa& n = d.normalized;
    merge_initial(n.master, d.states_added);
    for (auto& [j, s] : n.slaves) {
        check_initial(s.core, j);
        split_accepting(s.core, j, d.states_added);
        merge_initial(s.core, d.states_added);
    }

    // Automata in a fixed order: master, then slaves by index.
    std::vector<std::pair<int, const Automaton*>> autos{{0, &n.master}};
    for (const auto& [j, s] : n.slaves)
        autos.push_back({j, &s.core});

    d.nwa.name = input.name;
    d.nwa.declared_width = input.declared_width;
    d.nwa.master = n.master;
    d.nwa.master.transitions.clear();
    for (const auto& [j, s] : n.slaves) {
        Slave t = s;
        t.core.transitions.clear();
        d.nwa.slaves.emplace(j, std::move(t));
    }

    for (int a = 0; a < input.alphabet.size(); ++a) {
        // Choice points: every state with at least one transition on a.
        struct Point {
            int automaton;
            int state;
            std::vector<int> options;
        };
        std::vector<Point> points;
        std::size_t combos = 1;
        for (const auto& [j, au] : autos) {
            std::vector<std::vector<int>> by_state(au->state_count());
            for (std::size_t t = 0; t < au->transitions.size(); ++t)
                if (au->transitions[t].letter == a)
                    by_state[au->transitions[t].source].push_back(static_cast<int>(t));
            for (int q = 0; q < au->state_count(); ++q)
                if (!by_state[q].empty()) {
                    combos *= by_state[q].size();
                    if (combos + d.steering.size() > letter_cap)
                        throw resource_error("steering alphabet exceeds " + std::to_string(letter_cap) +
                                             " letters (more than " + std::to_string(combos) + " on letter " +
                                             input.alphabet.name(a) + ")");
                    points.push_back({j, q, std::move(by_state[q])});
                }
        }
        std::vector<std::size_t> pick(points.size(), 0);
        for (;;) {
            SteeringFunction h;
            int letter = d.nwa.alphabet.add(input.alphabet.name(a) + "@h" + std::to_string(d.steering.size()));
            for (std::size_t p = 0; p < points.size(); ++p) {
                int t = points[p].options[pick[p]];
                h.choices.push_back({points[p].automaton, points[p].state, t});
                const Automaton& src = points[p].automaton == 0 ? n.master : n.slave(points[p].automaton).core;
                Automaton& dst =
                    points[p].automaton == 0 ? d.nwa.master : d.nwa.slaves.at(points[p].automaton).core;
                const Transition& tr = src.transitions[t];
                dst.add_transition(tr.source, letter, tr.target, tr.label);
            }
            d.steering.push_back(std::move(h));
            d.base_letter.push_back(a);
            std::size_t p = 0;
            for (; p < points.size(); ++p) {
                if (++pick[p] < points[p].options.size())
                    break;
                pick[p] = 0;
            }
            if (p == points.size())
                break;
        }
    }
    return d;
}

LassoWord project_lasso(const DeterminizedNwa& d, const LassoWord& extended) {
    LassoWord w;
    for (int a : extended.prefix)
        w.prefix.push_back(d.base_letter.at(a));
    for (int a : extended.period)
        w.period.push_back(d.base_letter.at(a));
    return w;
}

LiftResult lift_search(const DeterminizedNwa& d, const LassoWord& base, long long period_cap, long long cap) {
    if (base.period.empty())
        throw input_error("lasso period is empty");
    std::map<int, std::vector<int>> lifts;
    for (std::size_t e = 0; e < d.base_letter.size(); ++e)
        lifts[d.base_letter[e]].push_back(static_cast<int>(e));

    LiftResult best;
    bool first = true;
    const long long p = base.period_length();
    for (long long r = 1; r == 1 || r * p <= period_cap; ++r) {
        std::vector<int> letters(base.prefix);
        for (long long i = 0; i < r; ++i)
            letters.insert(letters.end(), base.period.begin(), base.period.end());
        std::vector<int> ext(letters.size());
        std::function<bool(std::size_t)> rec = [&](std::size_t i) {
            if (i == letters.size()) {
                if (best.tried >= cap) {
                    best.non_exhaustive = true;
                    return false;
                }
                ++best.tried;
                LassoWord w;
                w.prefix.assign(ext.begin(), ext.begin() + base.prefix_length());
                w.period.assign(ext.begin() + base.prefix_length(), ext.end());
                ExtendedValue v = ExtendedValue::plus_infinity();
                try {
                    v = evaluate_lasso(d.nwa, w).value;
                } catch (const resource_error&) {
                    best.non_exhaustive = true;
                }
                if (first || v < best.value) {
                    best.value = v;
                    best.word = w;
                    first = false;
                }
                return true;
            }
            auto it = lifts.find(letters[i]);
            if (it == lifts.end())
                return true;
            for (int e : it->second) {
                ext[i] = e;
                if (!rec(i + 1))
                    return false;
            }
            return true;
        };
        if (!rec(0))
            break;
    }
    return best;
}

}  // namespace nwa
