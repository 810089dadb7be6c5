#include "nwa/value.hpp"

#include "nwa/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace nwa {

std::string to_string(const Rational& r) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Integer to_integer(std::string_view s) {
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Integer v{std::string(s)};
    return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!is_integer_literal(num))
        throw input_error("not a rational: '" + std::string(text) + "'");
    if (slash == std::string_view::npos)
        return Rational(to_integer(num));
    std::string_view den = text.substr(slash + 1);
    if (!is_integer_literal(den) || den.front() == '-' || den.front() == '+')
        throw input_error("not a rational: '" + std::string(text) + "'");
    Integer d = to_integer(den);
    if (d == 0)
        throw input_error("zero denominator in '" + std::string(text) + "'");
    return Rational(to_integer(num), d);
}

std::partial_ordering operator<=>(const ExtendedValue& a, const ExtendedValue& b) {
    using K = ExtendedValue::Kind;
    if (a.kind_ == K::bottom || b.kind_ == K::bottom)
        return a.kind_ == b.kind_ ? std::partial_ordering::equivalent : std::partial_ordering::unordered;
    auto rank = [](K k) { return k == K::minus_infinity ? 0 : k == K::finite ? 1 : 2; };
    if (rank(a.kind_) != rank(b.kind_))
        return rank(a.kind_) <=> rank(b.kind_);
    if (a.kind_ != K::finite)
        return std::partial_ordering::equivalent;
    if (a.value_ < b.value_)
        return std::partial_ordering::less;
    if (b.value_ < a.value_)
        return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

std::string ExtendedValue::to_string() const {
    switch (kind_) {
    case Kind::finite: return nwa::to_string(value_);
    case Kind::plus_infinity: return "+inf";
    case Kind::minus_infinity: return "-inf";
    case Kind::bottom: return "⊥";
    }
    return "?";
}

ExtendedValue min_value(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.is_bottom())
        return b;
    if (b.is_bottom())
        return a;
    return b < a ? b : a;
}

ValueFunction ValueFunction::bsum(std::int64_t lower, std::int64_t upper) {
    if (lower > upper)
        throw input_error("bsum(" + std::to_string(lower) + "," + std::to_string(upper) + "): L ≤ U violated");
    if (lower > 0 || upper < 0)
        throw input_error("bsum(" + std::to_string(lower) + "," + std::to_string(upper) + "): L ≤ 0 ≤ U violated");
    return {ValueKind::bsum, lower, upper};
}

std::string ValueFunction::keyword() const {
    switch (kind) {
    case ValueKind::min: return "min";
    case ValueKind::max: return "max";
    case ValueKind::sum: return "sum";
    case ValueKind::sumplus: return "sumplus";
    case ValueKind::bsum: return "bsum(" + std::to_string(lower) + "," + std::to_string(upper) + ")";
    }
    return "?";
}

void Summary::push(const ValueFunction& f, std::int64_t weight) {
    switch (f.kind) {
    case ValueKind::min: acc = empty ? weight : std::min(acc, weight); break;
    case ValueKind::max: acc = empty ? weight : std::max(acc, weight); break;
    case ValueKind::sum: acc += weight; break;
    case ValueKind::sumplus: acc += weight < 0 ? -weight : weight; break;
    case ValueKind::bsum:
        if (latch == 0) {
            acc += weight;
            if (acc < f.lower)
                latch = -1;
            else if (acc > f.upper)
                latch = 1;
            if (latch != 0)
                acc = 0;
        }
        break;
    }
    empty = false;
}

ExtendedValue Summary::value(const ValueFunction& f) const {
    if (empty)
        return ExtendedValue::bottom();
    if (f.kind == ValueKind::bsum && latch != 0)
        return ExtendedValue::finite(latch < 0 ? f.lower : f.upper);
    return ExtendedValue::finite(acc);
}

ExtendedValue apply_value_function(const ValueFunction& f, std::span<const std::int64_t> weights) {
    Summary s;
    for (auto w : weights)
        s.push(f, w);
    return s.value(f);
}

}  // namespace nwa
