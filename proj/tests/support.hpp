#pragma once

#include "henselkit/coeff.hpp"
#include "henselkit/multipoly.hpp"
#include "henselkit/padic.hpp"
#include "henselkit/series.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hk::testing {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& g, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

inline mpz_class pow_z(std::uint32_t p, unsigned n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, n);
    return r;
}

inline PAdic random_padic(Rng& g, std::uint32_t p, int N, int min_val = 0) {
    mpz_class v = 0;
    for (int i = N - 1; i >= min_val; --i) v = v * p + static_cast<unsigned long>(uniform(g, 0, p - 1));
    return PAdic::from_int(p, N, v * pow_z(p, static_cast<unsigned>(min_val)));
}

inline Coeff random_coeff(Rng& g, const CoeffField& f, bool nonzero = false) {
    while (true) {
        Coeff c = f.kind == CoeffField::Kind::Rational
                      ? Coeff(mpq_class(uniform(g, -9, 9), uniform(g, 1, 4)))
                      : Coeff::from_int(f, uniform(g, 0, f.p - 1));
        if (!nonzero || !c.is_zero()) return c;
    }
}

// Random series with integer exponents in [lo, order).
inline Series random_series(Rng& g, const CoeffField& f, std::int64_t lo, std::int64_t order, double density = 0.6) {
    std::map<std::int64_t, Coeff> terms;
    std::bernoulli_distribution keep(density);
    for (std::int64_t k = lo; k < order; ++k)
        if (keep(g)) terms.emplace(k, random_coeff(g, f, true));
    return Series::from_raw(f, 1, std::move(terms), order);
}

// Random polynomial with at most `terms` monomials of total degree <= deg.
template <class R, class Gen>
MultiPoly<R> random_poly(Rng& g, std::size_t nvars, unsigned deg, unsigned terms, const R& zero, Gen&& coeff) {
    MultiPoly<R> f(nvars, zero);
    for (unsigned t = 0; t < terms; ++t) {
        MultiIndex k = MultiIndex::zero(nvars);
        unsigned budget = static_cast<unsigned>(uniform(g, 0, deg));
        for (unsigned u = 0; u < budget; ++u) ++k.e[static_cast<std::size_t>(uniform(g, 0, nvars - 1))];
        f.add_term(k, coeff());
    }
    return f;
}

}  // namespace hk::testing
