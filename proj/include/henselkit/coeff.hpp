#pragma once

#include "henselkit/fftower.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>

namespace hk {

// Coefficient field of a series ring: exact rationals, or the finite-field
// tower of characteristic p.
struct CoeffField {
    enum class Kind { Rational, Finite };
    Kind kind = Kind::Rational;
    std::uint32_t p = 0;

    static CoeffField rationals() { return {Kind::Rational, 0}; }
    static CoeffField finite(std::uint32_t p) { return {Kind::Finite, p}; }
    std::uint32_t characteristic() const { return kind == Kind::Finite ? p : 0; }
    bool operator==(const CoeffField&) const = default;
    std::string to_string() const;
    static CoeffField parse(const std::string& text);
};

class Coeff {
public:
    Coeff() : v_(mpq_class(0)) {}
    explicit Coeff(mpq_class q) : v_(std::move(q)) { std::get<mpq_class>(v_).canonicalize(); }
    explicit Coeff(FFElem e) : v_(std::move(e)) {}

    static Coeff from_int(const CoeffField& f, std::int64_t k);
    static Coeff from_rational(const CoeffField& f, const mpq_class& q);
    static Coeff parse(const CoeffField& f, const std::string& text);

    CoeffField field() const;
    bool is_rational() const { return std::holds_alternative<mpq_class>(v_); }
    const mpq_class& rational() const;
    const FFElem& ff() const;

    bool is_zero() const;
    bool is_one() const;

    Coeff operator+(const Coeff& o) const;
    Coeff operator-(const Coeff& o) const;
    Coeff operator*(const Coeff& o) const;
    Coeff operator/(const Coeff& o) const;
    Coeff operator-() const;
    Coeff inverse() const;
    Coeff pow(std::uint64_t e) const;
    // Frobenius in characteristic p, identity on rationals.
    Coeff frobenius() const;

    Coeff zero_like() const;
    Coeff one_like() const;
    Coeff int_like(std::int64_t k) const;

    bool operator==(const Coeff& o) const;
    bool operator!=(const Coeff& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    std::variant<mpq_class, FFElem> v_;
};

}  // namespace hk
