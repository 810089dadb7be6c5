#pragma once

#include "nwa/nwa.hpp"
#include "nwa/value.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nwa {

struct EmptinessVerdict {
    ExtendedValue infimum = ExtendedValue::plus_infinity();
    Rational lambda = 0;
    bool yes = false;  // some word has value <= lambda
    std::optional<LassoWord> witness;
    std::vector<std::string> witness_cycle;  // node labels along the optimal cycle
    std::vector<std::string> restriction;    // slot labels excluded from the average
    std::string status = "confirmed";
};

/// Lasso stem·(cycle^m·tour)^ω with the least m <= 2^20 whose period ratio
/// is <= lambda, or m = 1 when none qualifies.
struct LassoPlan {
    std::vector<int> stem, cycle, tour;  // letters
    Rational cycle_cost = 0, tour_cost = 0;
    long long cycle_count = 0, tour_count = 0;
};
LassoWord plan_lasso(const LassoPlan& plan, const Rational& lambda);

}  // namespace nwa
