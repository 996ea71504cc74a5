#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace hk {

using Rational = boost::rational<std::int64_t>;

std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

// Element of the value group Q extended by a top element.
class Value {
public:
    Value() : amount_(Rational(0)) {}
    Value(Rational q) : amount_(q) {}
    Value(std::int64_t k) : amount_(Rational(k)) {}
    Value(int k) : amount_(Rational(k)) {}

    static Value infinity() { return Value(std::nullopt); }

    bool is_infinite() const { return !amount_.has_value(); }
    bool is_finite() const { return amount_.has_value(); }
    const Rational& amount() const;

    Value operator+(const Value& o) const;
    // Difference of a value and a finite value.
    Value operator-(const Value& o) const;
    Value operator-() const;
    Value operator*(std::int64_t k) const;

    bool operator==(const Value& o) const { return amount_ == o.amount_; }
    std::strong_ordering operator<=>(const Value& o) const;

    std::string to_string() const;

private:
    explicit Value(std::optional<Rational> q) : amount_(q) {}
    std::optional<Rational> amount_;
};

Value value_min(std::span<const Value> values);
Value value_min(std::initializer_list<Value> values);
Value parse_value(std::string_view text);

}  // namespace hk
