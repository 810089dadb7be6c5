#pragma once

#include "nwa/nwa.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nwa {

struct SlaveOutcome {
    enum class Status { accepted, rejected, diverged };

    int slave = 0;
    long long position = 0;
    ExtendedValue value = ExtendedValue::bottom();
    long long first = 0;       // span of positions read; empty when run_length == 0
    long long last = -1;       // -1 with status diverged: unbounded
    long long run_length = 0;
    Status status = Status::accepted;

    bool silent() const { return status == Status::accepted && value.is_bottom(); }
};

struct EvalOptions {
    long long horizon = 64;        // periods simulated for the trace and width estimates
    long long budget = 1'000'000;  // steps per slave run
};

struct Evaluation {
    ExtendedValue value = ExtendedValue::plus_infinity();
    bool exact = false;
    int width_observed = 0;
    bool infinite_width_suspect = false;
    std::optional<long long> hotspot;
    std::vector<SlaveOutcome> trace;  // invocations at positions 1..|u|+horizon·|v|
    std::vector<Rational> partials;   // partial averages of the non-bottom trace values
    std::string reason;               // why the value is +inf, or why it is inexact
};

/// Runs deterministic slave `slave` invoked at `position`. Throws
/// resource_error once more than `budget` letters were read.
SlaveOutcome simulate_slave(const Nwa& nwa, int slave, const LassoWord& word, long long position,
                            long long budget = 1'000'000);

/// Exact LimAvg of the unique run of a deterministic NWA on `word`.
Evaluation evaluate_lasso(const Nwa& nwa, const LassoWord& word, const EvalOptions& options = {});

/// k-th element is the mean of the first k non-bottom values.
std::vector<Rational> partial_averages(const std::vector<SlaveOutcome>& trace, std::size_t up_to);

struct WidthMeasure {
    int width_observed = 0;
    bool infinite_width_suspect = false;
    std::optional<long long> hotspot;
    std::vector<long long> hotspot_counts;  // terminations at the hotspot per horizon
};

/// Width over invocations in the first `horizon` periods, with termination
/// counts compared at horizon/4, horizon/2 and horizon.
WidthMeasure measure_width(const Nwa& nwa, const LassoWord& word, long long horizon,
                           long long budget = 1'000'000);

/// `pos=<i> slave=<j> value=<v|⊥> span=<a>..<b>`
std::string format_trace_line(const SlaveOutcome& o);

}  // namespace nwa
