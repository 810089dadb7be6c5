#pragma once

#include <stdexcept>
#include <string>

namespace nwa {

/// Malformed or inconsistent input: syntax errors, dangling ids, letters
/// outside the alphabet, violated preconditions on the automaton shape.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured cap (state count, step budget, alphabet size) was hit.
/// Never a wrong answer, only an absent one.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nwa
