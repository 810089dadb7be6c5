#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace nwa {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& r);

/// Parses "p/q", "p" or "-p/q". Throws input_error on anything else.
Rational parse_rational(std::string_view text);

/// Rational extended with +inf, -inf and the non-numeric empty-run value.
class ExtendedValue {
public:
    enum class Kind { finite, plus_infinity, minus_infinity, bottom };

    ExtendedValue() : kind_(Kind::bottom) {}
    ExtendedValue(Rational value) : kind_(Kind::finite), value_(std::move(value)) {}  // NOLINT

    static ExtendedValue finite(Rational v) { return ExtendedValue(std::move(v)); }
    static ExtendedValue finite(std::int64_t v) { return ExtendedValue(Rational(v)); }
    static ExtendedValue plus_infinity() { return ExtendedValue(Kind::plus_infinity); }
    static ExtendedValue minus_infinity() { return ExtendedValue(Kind::minus_infinity); }
    static ExtendedValue bottom() { return ExtendedValue(Kind::bottom); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_bottom() const { return kind_ == Kind::bottom; }
    bool is_plus_infinity() const { return kind_ == Kind::plus_infinity; }
    bool is_minus_infinity() const { return kind_ == Kind::minus_infinity; }

    /// Only meaningful when is_finite().
    const Rational& value() const { return value_; }

    friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
    }

    /// Total order on non-bottom values; bottom compares unordered.
    friend std::partial_ordering operator<=>(const ExtendedValue& a, const ExtendedValue& b);

    /// "p/q", "p", "+inf", "-inf" or "⊥".
    std::string to_string() const;

private:
    explicit ExtendedValue(Kind k) : kind_(k) {}

    Kind kind_;
    Rational value_{0};
};

/// min that treats bottom as absent.
ExtendedValue min_value(const ExtendedValue& a, const ExtendedValue& b);

enum class ValueKind { min, max, sum, sumplus, bsum };

/// Finite-word value function. For bsum the window [lower, upper] applies to
/// every prefix sum; the first violated bound is returned on violation.
struct ValueFunction {
    ValueKind kind = ValueKind::sum;
    std::int64_t lower = 0;
    std::int64_t upper = 0;

    static ValueFunction min() { return {ValueKind::min, 0, 0}; }
    static ValueFunction max() { return {ValueKind::max, 0, 0}; }
    static ValueFunction sum() { return {ValueKind::sum, 0, 0}; }
    static ValueFunction sumplus() { return {ValueKind::sumplus, 0, 0}; }
    /// Throws input_error unless lower <= 0 <= upper.
    static ValueFunction bsum(std::int64_t lower, std::int64_t upper);

    /// min, max and bsum have finite range.
    bool is_regular() const {
        return kind == ValueKind::min || kind == ValueKind::max || kind == ValueKind::bsum;
    }

    std::string keyword() const;  // "min", "bsum(-3,7)", ...

    friend bool operator==(const ValueFunction&, const ValueFunction&) = default;
};

/// Running summary of a weight sequence under a value function: enough to
/// extend the sequence one weight at a time and read the final value.
struct Summary {
    bool empty = true;
    std::int64_t acc = 0;   // running min/max/sum; in-range prefix sum for bsum
    std::int8_t latch = 0;  // bsum only: -1 lower violated, +1 upper violated

    void push(const ValueFunction& f, std::int64_t weight);
    ExtendedValue value(const ValueFunction& f) const;

    friend auto operator<=>(const Summary&, const Summary&) = default;
};

ExtendedValue apply_value_function(const ValueFunction& f, std::span<const std::int64_t> weights);

}  // namespace nwa
