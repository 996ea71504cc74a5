#pragma once

#include "henselkit/padic.hpp"
#include "henselkit/series.hpp"
#include "henselkit/valued.hpp"

#include <cstdint>
#include <random>

namespace hk {

using SampleRng = std::mt19937_64;

// Random elements of exactly the given value, at the precision of `like`.
// Values at or beyond the precision give zero.
PAdic sample_with_value(const PAdic& like, const Value& v, SampleRng& rng);
// Finite-field coefficients are drawn from F_{p^coeff_degree}.
Series sample_with_value(const Series& like, const Value& v, SampleRng& rng, std::uint32_t coeff_degree = 1,
                         std::size_t max_terms = 12);

// Smallest positive value step of the ring's grid.
Rational grid_step(const PAdic& like);
Rational grid_step(const Series& like);

template <ValuedElement R>
Vec<R> sample_with_value(const Vec<R>& like, const Value& v, SampleRng& rng) {
    Vec<R> out;
    std::size_t lead = std::uniform_int_distribution<std::size_t>(0, like.size() - 1)(rng);
    Rational step = grid_step(like.front());
    for (std::size_t i = 0; i < like.size(); ++i) {
        Value vi = v;
        if (i != lead) vi = v + Value(step * static_cast<std::int64_t>(std::uniform_int_distribution<int>(0, 3)(rng)));
        out.push_back(sample_with_value(like[i], vi, rng));
    }
    return out;
}

template <ValuedElement R>
Rational grid_step(const Vec<R>& like) {
    return grid_step(like.front());
}

// Random value on the grid in the open interval (lo, hi); lo itself when the interval is empty.
template <class P>
Value sample_value_between(const P& like, const Value& lo, const Value& hi, SampleRng& rng) {
    Rational step = grid_step(like);
    Rational first = (lo.amount() / step);
    std::int64_t k0 = first.numerator() / first.denominator();
    if (Rational(k0) <= first) ++k0;
    Rational top = hi.amount() / step;
    std::int64_t k1 = top.numerator() / top.denominator();
    if (Rational(k1) >= top) --k1;
    if (k1 < k0) return lo;
    std::int64_t k = std::uniform_int_distribution<std::int64_t>(k0, k1)(rng);
    return Value(step * k);
}

}  // namespace hk
