#include "nwa/automaton.hpp"

#include "nwa/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nwa {

Alphabet::Alphabet(const std::vector<std::string>& names) {
    for (const auto& n : names)
        add(n);
}

bool Alphabet::valid_name(std::string_view name) {
    if (name.empty())
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '#' ||
               c == '$' || c == '+' || c == '-' || c == '@';
    });
}

int Alphabet::add(const std::string& name) {
    if (!valid_name(name))
        throw input_error("invalid letter name '" + name + "'");
    if (index_.count(name))
        throw input_error("duplicate letter '" + name + "'");
    int id = size();
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
}

int Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

int Alphabet::id(std::string_view name) const {
    int i = find(name);
    if (i < 0)
        throw input_error("letter '" + std::string(name) + "' not in alphabet");
    return i;
}

int Automaton::add_state(const std::string& name) {
    if (find_state(name) >= 0)
        throw input_error("duplicate state '" + name + "'");
    states.push_back(name);
    accepting.push_back(false);
    at_start.push_back(false);
    return state_count() - 1;
}

int Automaton::find_state(std::string_view name) const {
    for (int i = 0; i < state_count(); ++i)
        if (states[i] == name)
            return i;
    return -1;
}

void Automaton::add_transition(int source, int letter, int target, std::int64_t label) {
    transitions.push_back({source, letter, target, label});
}

std::vector<std::vector<int>> Automaton::outgoing() const {
    std::vector<std::vector<int>> out(state_count());
    for (int i = 0; i < static_cast<int>(transitions.size()); ++i)
        out[transitions[i].source].push_back(i);
    return out;
}

std::vector<std::vector<int>> Automaton::transition_table(int letters) const {
    std::vector<std::vector<int>> table(state_count(), std::vector<int>(letters, -1));
    for (int i = 0; i < static_cast<int>(transitions.size()); ++i)
        table[transitions[i].source][transitions[i].letter] = i;
    return table;
}

bool Automaton::is_deterministic() const {
    if (!single_initial())
        return false;
    std::set<std::pair<int, int>> seen;
    for (const auto& t : transitions)
        if (!seen.insert({t.source, t.letter}).second)
            return false;
    return true;
}

bool Automaton::accepting_is_final() const {
    return std::none_of(transitions.begin(), transitions.end(), [&](const Transition& t) { return accepting[t.source]; });
}

bool Automaton::has_at_start() const {
    return std::any_of(at_start.begin(), at_start.end(), [](bool b) { return b; });
}

std::int64_t Automaton::max_abs_label() const {
    std::int64_t m = 0;
    for (const auto& t : transitions)
        m = std::max(m, t.label < 0 ? -t.label : t.label);
    return m;
}

void Automaton::check_structure(int letters, const std::string& what) const {
    auto bad_state = [&](int q) { return q < 0 || q >= state_count(); };
    for (int q : initial)
        if (bad_state(q))
            throw input_error(what + ": dangling initial state id " + std::to_string(q));
    if (static_cast<int>(accepting.size()) != state_count() || static_cast<int>(at_start.size()) != state_count())
        throw input_error(what + ": state flag vectors do not match state count");
    for (const auto& t : transitions) {
        if (bad_state(t.source) || bad_state(t.target))
            throw input_error(what + ": transition references dangling state id");
        if (t.letter < 0 || t.letter >= letters)
            throw input_error(what + ": transition letter id " + std::to_string(t.letter) + " out of range");
    }
}

ExtendedValue value_of_finite_word(const Automaton& a, const ValueFunction& f, const std::vector<int>& word,
                                   bool reaches_start) {
    auto out = a.outgoing();
    for (int letter : word)
        if (letter < 0)
            throw input_error("letter not in alphabet");
    auto accepts = [&](int q) { return a.accepting[q] || (reaches_start && a.at_start[q]); };

    ExtendedValue best = ExtendedValue::plus_infinity();
    bool accepted_empty = false;
    auto collect = [&](int q, const Summary& s) {
        if (!accepts(q))
            return;
        ExtendedValue v = s.value(f);
        if (v.is_bottom())
            accepted_empty = true;
        else if (v < best)
            best = v;
    };

    if (f.kind != ValueKind::bsum) {
        // Every other summary extends monotonically, so the least one per state suffices.
        std::map<int, Summary> cur;
        for (int q : a.initial)
            cur[q] = Summary{};
        for (int letter : word) {
            std::map<int, Summary> next;
            for (const auto& [q, s] : cur)
                for (int ti : out[q]) {
                    const auto& t = a.transitions[ti];
                    if (t.letter != letter)
                        continue;
                    Summary s2 = s;
                    s2.push(f, t.label);
                    auto it = next.find(t.target);
                    if (it == next.end() || s2.acc < it->second.acc)
                        next[t.target] = s2;
                }
            cur = std::move(next);
        }
        for (const auto& [q, s] : cur)
            collect(q, s);
    } else {
        std::set<std::pair<int, Summary>> cur;
        for (int q : a.initial)
            cur.insert({q, Summary{}});
        for (int letter : word) {
            std::set<std::pair<int, Summary>> next;
            for (const auto& [q, s] : cur)
                for (int ti : out[q]) {
                    const auto& t = a.transitions[ti];
                    if (t.letter != letter)
                        continue;
                    Summary s2 = s;
                    s2.push(f, t.label);
                    next.insert({t.target, s2});
                }
            cur = std::move(next);
        }
        for (const auto& [q, s] : cur)
            collect(q, s);
    }
    if (accepted_empty && word.empty())
        return ExtendedValue::bottom();
    return best;
}

}  // namespace nwa
