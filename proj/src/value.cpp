#include "henselkit/value.hpp"

#include "henselkit/errors.hpp"

#include <charconv>
#include <numeric>

namespace hk {

std::string rational_to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    std::size_t pos = 0;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        pos = 1;
    }
    auto first = s.data() + pos;
    auto last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) throw ParseError("bad integer '" + std::string(s) + "'");
    return neg ? -v : v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    auto den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(trim(text.substr(0, slash))), den);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

const Rational& Value::amount() const {
    if (!amount_) throw UsageError("amount of infinite value");
    return *amount_;
}

Value Value::operator+(const Value& o) const {
    if (is_infinite() || o.is_infinite()) return infinity();
    return Value(*amount_ + *o.amount_);
}

Value Value::operator-(const Value& o) const {
    if (o.is_infinite()) throw UsageError("subtracting an infinite value");
    if (is_infinite()) return infinity();
    return Value(*amount_ - *o.amount_);
}

Value Value::operator-() const {
    if (is_infinite()) throw UsageError("negating an infinite value");
    return Value(-*amount_);
}

Value Value::operator*(std::int64_t k) const {
    if (is_infinite()) {
        if (k <= 0) throw UsageError("non-positive multiple of an infinite value");
        return infinity();
    }
    return Value(*amount_ * k);
}

std::strong_ordering Value::operator<=>(const Value& o) const {
    if (is_infinite() || o.is_infinite()) {
        if (is_infinite() && o.is_infinite()) return std::strong_ordering::equal;
        return is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (*amount_ < *o.amount_) return std::strong_ordering::less;
    if (*amount_ == *o.amount_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
}

std::string Value::to_string() const { return is_infinite() ? "inf" : rational_to_string(*amount_); }

Value value_min(std::span<const Value> values) {
    if (values.empty()) throw UsageError("value_min of an empty list");
    Value best = values.front();
    for (const auto& v : values)
        if (v < best) best = v;
    return best;
}

Value value_min(std::initializer_list<Value> values) {
    return value_min(std::span<const Value>(values.begin(), values.size()));
}

Value parse_value(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "oo") return Value::infinity();
    return Value(parse_rational(text));
}

}  // namespace hk
