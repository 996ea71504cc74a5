#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hk {

struct FFLevel;

// Element of F_{p^m}, stored as the base-p packing of its coordinates in the
// power basis of a fixed primitive generator. Levels are connected by the
// norm-compatible embeddings F_{p^m} -> F_{p^{ml}}.
class FFElem {
public:
    FFElem() = default;

    static FFElem from_int(std::uint32_t p, std::int64_t k);
    static FFElem from_digits(std::uint32_t p, const std::vector<std::uint32_t>& digits);
    static FFElem from_code(std::uint32_t p, std::uint32_t degree, std::uint64_t code);
    static FFElem generator(std::uint32_t p, std::uint32_t degree);

    bool valid() const { return level_ != nullptr; }
    std::uint32_t p() const;
    std::uint32_t degree() const;
    std::uint64_t code() const { return code_; }
    std::vector<std::uint32_t> digits() const;

    bool is_zero() const { return code_ == 0; }
    bool is_one() const;

    FFElem operator+(const FFElem& o) const;
    FFElem operator-(const FFElem& o) const;
    FFElem operator*(const FFElem& o) const;
    FFElem operator/(const FFElem& o) const;
    FFElem operator-() const;
    FFElem inverse() const;
    FFElem pow(std::uint64_t e) const;
    FFElem frobenius() const;
    FFElem embed(std::uint32_t degree) const;
    FFElem zero_like() const;
    FFElem one_like() const;
    FFElem int_like(std::int64_t k) const;

    bool operator==(const FFElem& o) const;
    bool operator!=(const FFElem& o) const { return !(*this == o); }

    std::string to_string() const;
    static FFElem parse(std::uint32_t p, const std::string& text);

private:
    FFElem(const FFLevel* level, std::uint64_t code) : level_(level), code_(code) {}
    const FFLevel* level_ = nullptr;
    std::uint64_t code_ = 0;
    friend struct FFLevel;
};

// Monic defining polynomial of F_{p^m} over F_p, low degree first.
std::vector<std::uint32_t> ff_modulus(std::uint32_t p, std::uint32_t m);
std::uint32_t ff_primitive_root(std::uint32_t p);
bool is_prime_u32(std::uint32_t p);

constexpr std::uint32_t kDefaultDegreeCap = 64;

// Solves sum_j b_j x^{p^j} = target, searching levels m, 2m, 3m, ... where m is
// the common level of the inputs. Throws ResourceCapError past degree_cap.
FFElem additive_poly_solve(const std::vector<FFElem>& b, const FFElem& target,
                           std::uint32_t degree_cap = kDefaultDegreeCap);

// Evaluates sum_j b_j x^{p^j}.
FFElem additive_poly_eval(const std::vector<FFElem>& b, const FFElem& x);

}  // namespace hk
