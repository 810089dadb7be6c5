#pragma once

#include "nwa/automaton.hpp"
#include "nwa/value.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nwa {

enum class Direction { none, forward, backward };

inline Direction direction_of(int index) {
    return index > 0 ? Direction::forward : index < 0 ? Direction::backward : Direction::none;
}

/// A slave automaton. The sign of the index fixes its walking direction.
struct Slave {
    int index = 0;
    ValueFunction fn;
    Automaton core;

    Direction direction() const { return direction_of(index); }
};

/// Master LimAvg automaton over `alphabet` whose transition labels name
/// slaves. Slave 0 is the implicit silent dummy and never stored.
struct Nwa {
    std::string name;
    Alphabet alphabet;
    Automaton master;
    std::map<int, Slave> slaves;
    std::optional<int> declared_width;

    bool has_slave(int index) const { return index == 0 || slaves.count(index) > 0; }
    /// Throws input_error for an undeclared index or 0.
    const Slave& slave(int index) const;

    int slave_state_total() const;
    int max_slave_states() const;
    std::int64_t max_weight() const;
    bool has_backward() const;
    bool has_forward() const;
};

struct ValidationItem {
    std::string check;
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool deterministic = false;
};

/// Hard errors (dangling ids, undeclared slaves, direction mismatches) throw
/// input_error; determinism is reported per automaton.
ValidationReport validate(const Nwa& nwa);

/// Same as validate(nwa).deterministic.
bool is_deterministic(const Nwa& nwa);
void require_deterministic(const Nwa& nwa, const std::string& what);

/// Ultimately periodic word prefix·period^ω. Positions are 1-based.
struct LassoWord {
    std::vector<int> prefix;
    std::vector<int> period;

    long long prefix_length() const { return static_cast<long long>(prefix.size()); }
    long long period_length() const { return static_cast<long long>(period.size()); }
    int at(long long position) const;

    friend bool operator==(const LassoWord&, const LassoWord&) = default;
};

/// Parses "a b | c d". A token absent from the alphabet that reads as an
/// integer matches the letter with the same integer value ("2" -> "+2").
LassoWord parse_lasso(std::string_view text, const Alphabet& alphabet);
std::string format_lasso(const LassoWord& w, const Alphabet& alphabet);

/// Same infinite word with the shortest prefix and primitive period.
LassoWord canonical_lasso(LassoWord w);

/// Integer value of a letter name such as "+2", "-1", "0".
std::optional<std::int64_t> letter_integer(std::string_view name);

}  // namespace nwa
