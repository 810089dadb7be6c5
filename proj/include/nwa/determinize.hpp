#pragma once

#include "nwa/nwa.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace nwa {

/// One chosen transition per (automaton, state) enabled on a letter.
/// Automaton 0 is the master; slaves keep their index.
struct SteeringFunction {
    struct Choice {
        int automaton = 0;
        int state = 0;
        int transition = 0;  // index into that automaton's transitions after normalization
    };
    std::vector<Choice> choices;
};

struct DeterminizedNwa {
    Nwa nwa;                          // over letters `a@h<k>`
    std::vector<int> base_letter;     // extended letter -> letter of the input
    std::vector<SteeringFunction> steering;
    Nwa normalized;                   // input with single initial states and final accepting slave states
    bool states_added = false;        // normalization needed fresh states

    /// One line per extended letter: `h<k>: q->q':label, ...`.
    std::string sidecar() const;
};

/// Throws resource_error when more than `letter_cap` extended letters would
/// be emitted, input_error for a slave whose initial state is accepting and
/// has outgoing transitions.
DeterminizedNwa determinize(const Nwa& nwa, std::size_t letter_cap = 4096);

LassoWord project_lasso(const DeterminizedNwa& d, const LassoWord& extended);

struct LiftResult {
    LassoWord word;  // over the extended alphabet
    ExtendedValue value = ExtendedValue::plus_infinity();
    bool non_exhaustive = false;
    long long tried = 0;
};

/// Best extended lasso over `base` among steering letters chosen per
/// position of the prefix and of the period unrolled up to `period_cap`
/// letters; evaluates at most `cap` candidates.
LiftResult lift_search(const DeterminizedNwa& d, const LassoWord& base, long long period_cap, long long cap = 200'000);

}  // namespace nwa
