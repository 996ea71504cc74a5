#pragma once

#include "henselkit/coeff.hpp"
#include "henselkit/value.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hk {

// Truncated series sum c_e t^e over a coefficient field, exponents on the grid
// (1/d)Z, with every exponent >= order unknown.
class Series {
public:
    Series() : Series(CoeffField::rationals(), 1, Rational(0)) {}
    Series(CoeffField field, std::int64_t den, Rational order);

    static Series monomial(CoeffField field, const Coeff& c, Rational exponent, Rational order);
    static Series constant(CoeffField field, const Coeff& c, Rational order);
    // Reads `c*t^(e) + ... + O(t^(N))`; without an O-term the default order is used.
    static Series parse(const std::string& text, CoeffField field, std::int64_t den = 1,
                        std::optional<Rational> default_order = std::nullopt);

    const CoeffField& field() const { return field_; }
    std::int64_t denominator() const { return den_; }
    Rational order() const { return Rational(order_, den_); }
    std::vector<std::pair<Rational, Coeff>> terms() const;
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    Value valuation() const;
    Value precision() const { return Value(order()); }
    Coeff leading_coeff() const;
    Coeff coeff(Rational exponent) const;

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator/(const Series& o) const;
    Series operator-() const;
    Series scaled(const Coeff& c) const;
    Series shifted(Rational e) const;
    Series pow(unsigned k) const;
    // Unit-series inverse; requires a nonzero term at the valuation.
    Series inverse() const;
    Series derivative() const;
    // Termwise antiderivative; rejects exponent -1 with a HypothesisError.
    Series integral() const;
    Series frobenius_coeffs() const;
    Series truncated_below(Rational e) const;  // drops terms with exponent >= e, keeps order

    Series with_precision(const Value& v) const;
    Series with_denominator(std::int64_t den) const;
    Series zero_like() const { return Series(field_, den_, order()); }
    Series one_like() const { return constant(field_, Coeff::from_int(field_, 1), order()); }
    Series int_like(std::int64_t k) const { return constant(field_, Coeff::from_int(field_, k), order()); }
    Series monomial_like(Rational exponent) const;
    bool same_ring(const Series& o) const { return field_ == o.field_; }

    bool operator==(const Series& o) const;
    bool operator!=(const Series& o) const { return !(*this == o); }

    std::string to_string() const;

    // Grid-unit access: exponent k/denominator().
    const std::map<std::int64_t, Coeff>& raw_terms() const { return terms_; }
    std::int64_t raw_order() const { return order_; }
    static Series from_raw(CoeffField field, std::int64_t den, std::map<std::int64_t, Coeff> terms,
                           std::int64_t order);

private:
    void normalize();
    CoeffField field_;
    std::int64_t den_;
    std::map<std::int64_t, Coeff> terms_;
    std::int64_t order_;
};

std::int64_t to_grid(Rational q, std::int64_t den);

}  // namespace hk
