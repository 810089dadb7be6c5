#pragma once

#include "nwa/value.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nwa {

/// Ordered set of letter names. Letters are referred to by their index.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(const std::vector<std::string>& names);

    /// Throws input_error on a duplicate or malformed name.
    int add(const std::string& name);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int id) const { return names_.at(id); }
    const std::vector<std::string>& names() const { return names_; }

    /// -1 when absent.
    int find(std::string_view name) const;
    /// Throws input_error when absent.
    int id(std::string_view name) const;

    static bool valid_name(std::string_view name);

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

struct Transition {
    int source = 0;
    int letter = 0;
    int target = 0;
    std::int64_t label = 0;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Finite automaton with integer-labelled transitions. Labels are weights for
/// slaves and slave indices for masters. `at_start` states accept a backward
/// run that has consumed the first letter of the word.
struct Automaton {
    std::vector<std::string> states;
    std::vector<int> initial;
    std::vector<bool> accepting;
    std::vector<bool> at_start;
    std::vector<Transition> transitions;

    int state_count() const { return static_cast<int>(states.size()); }
    int add_state(const std::string& name);
    /// -1 when absent.
    int find_state(std::string_view name) const;
    void add_transition(int source, int letter, int target, std::int64_t label);

    /// out[q] lists indices into `transitions` leaving q.
    std::vector<std::vector<int>> outgoing() const;
    /// Transition index for (q, a) per state and letter, or -1; requires a
    /// functional relation (use only on deterministic automata).
    std::vector<std::vector<int>> transition_table(int letters) const;

    bool single_initial() const { return initial.size() == 1; }
    /// Single initial state and no two transitions sharing (source, letter).
    bool is_deterministic() const;
    /// No accepting state has an outgoing transition.
    bool accepting_is_final() const;

    bool has_at_start() const;
    std::int64_t max_abs_label() const;

    /// Throws input_error naming the offending item when a state id or
    /// letter is out of range.
    void check_structure(int letters, const std::string& what) const;
};

/// Infimum over accepting runs on `word` of f applied to the run's weights.
/// When `reaches_start` holds, at_start states also accept at the end of the
/// word. No accepting run gives +inf; an accepted empty word gives bottom.
ExtendedValue value_of_finite_word(const Automaton& a, const ValueFunction& f, const std::vector<int>& word,
                                   bool reaches_start = false);

}  // namespace nwa
