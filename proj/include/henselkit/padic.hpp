#pragma once

#include "henselkit/value.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hk {

// p-adic integer known modulo p^N. Zero-padding to a larger N reads the stored
// residue as the exact digit string.
class PAdic {
public:
    PAdic() : PAdic(2, 0) {}
    PAdic(std::uint32_t p, int N);

    static PAdic from_int(std::uint32_t p, int N, const mpz_class& v);
    static PAdic from_rational(std::uint32_t p, int N, const mpq_class& q);
    // Accepts the canonical digit form `d0d1... + O(p^N)` or an integer/rational literal.
    static PAdic parse(const std::string& text, std::uint32_t p, int N);

    std::uint32_t p() const { return p_; }
    int digits_known() const { return N_; }
    const mpz_class& residue() const { return r_; }

    bool is_zero() const { return r_ == 0; }
    Value valuation() const;
    Value precision() const { return Value(std::int64_t(N_)); }
    int val_int() const;

    PAdic operator+(const PAdic& o) const;
    PAdic operator-(const PAdic& o) const;
    PAdic operator*(const PAdic& o) const;
    // Requires v(this) >= v(o); the result loses v(o) digits.
    PAdic operator/(const PAdic& o) const;
    PAdic operator-() const;
    PAdic pow(unsigned k) const;

    PAdic with_precision(const Value& v) const;
    PAdic zero_like() const { return PAdic(p_, N_); }
    PAdic one_like() const { return from_int(p_, N_, 1); }
    PAdic int_like(std::int64_t k) const { return from_int(p_, N_, mpz_class(static_cast<long>(k))); }
    PAdic monomial_like(int k) const;
    bool same_ring(const PAdic& o) const { return p_ == o.p_; }

    bool operator==(const PAdic& o) const { return p_ == o.p_ && N_ == o.N_ && r_ == o.r_; }
    bool operator!=(const PAdic& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    mpz_class modulus() const;
    std::uint32_t p_;
    int N_;
    mpz_class r_;
};

}  // namespace hk
