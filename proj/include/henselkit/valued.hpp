#pragma once

#include "henselkit/errors.hpp"
#include "henselkit/value.hpp"

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

namespace hk {

// Ring elements carrying their own context (field, grid, precision).
template <class R>
concept RingElement = requires(const R& a, const R& b, std::int64_t k) {
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a.is_zero() } -> std::same_as<bool>;
    { a.zero_like() } -> std::same_as<R>;
    { a.one_like() } -> std::same_as<R>;
    { a.int_like(k) } -> std::same_as<R>;
    { a.to_string() } -> std::convertible_to<std::string>;
};

// Truncated valued rings. valuation() of an element that is zero modulo its
// precision returns the precision itself, and is_zero() reports that case.
template <class R>
concept ValuedElement = RingElement<R> && requires(const R& a, const R& b, const Value& v) {
    { a.valuation() } -> std::same_as<Value>;
    { a.precision() } -> std::same_as<Value>;
    { a.with_precision(v) } -> std::same_as<R>;
    { a.same_ring(b) } -> std::same_as<bool>;
    { a / b } -> std::convertible_to<R>;
};

template <class R>
using Vec = std::vector<R>;

template <ValuedElement R>
Value value_of(const R& a) {
    return a.valuation();
}

template <ValuedElement R>
Value value_of(const Vec<R>& v) {
    if (v.empty()) throw UsageError("value of an empty vector");
    Value best = Value::infinity();
    for (const auto& x : v) {
        Value w = x.valuation();
        if (w < best) best = w;
    }
    return best;
}

template <ValuedElement R>
bool zero_mod_precision(const R& a) {
    return a.is_zero();
}

template <ValuedElement R>
bool zero_mod_precision(const Vec<R>& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

template <ValuedElement R>
Value precision_of(const R& a) {
    return a.precision();
}

template <ValuedElement R>
Value precision_of(const Vec<R>& v) {
    Value best = Value::infinity();
    for (const auto& x : v)
        if (x.precision() < best) best = x.precision();
    return best;
}

template <ValuedElement R>
R widen(const R& a, const Value& prec) {
    return a.with_precision(prec);
}

template <ValuedElement R>
Vec<R> widen(const Vec<R>& v, const Value& prec) {
    Vec<R> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.with_precision(prec));
    return out;
}

template <RingElement R>
Vec<R> operator+(const Vec<R>& a, const Vec<R>& b) {
    if (a.size() != b.size()) throw UsageError("vector length mismatch");
    Vec<R> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

template <RingElement R>
Vec<R> operator-(const Vec<R>& a, const Vec<R>& b) {
    if (a.size() != b.size()) throw UsageError("vector length mismatch");
    Vec<R> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

template <RingElement R>
Vec<R> scale(const R& s, const Vec<R>& v) {
    Vec<R> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(s * x);
    return out;
}

template <ValuedElement R>
std::string to_text(const R& a) {
    return a.to_string();
}

template <ValuedElement R>
std::string to_text(const Vec<R>& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += "; ";
        out += v[i].to_string();
    }
    return out + ")";
}

template <ValuedElement R>
bool same_ring_as(const R& a, const R& b) {
    return a.same_ring(b);
}

template <ValuedElement R>
bool same_ring_as(const Vec<R>& a, const Vec<R>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].same_ring(b[i])) return false;
    return true;
}

}  // namespace hk
