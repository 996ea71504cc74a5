#include "henselkit/sampling.hpp"

#include "henselkit/errors.hpp"

namespace hk {

PAdic sample_with_value(const PAdic& like, const Value& v, SampleRng& rng) {
    if (v.is_infinite() || v.amount().denominator() != 1) throw UsageError("p-adic sample value must be an integer");
    std::int64_t k = v.amount().numerator();
    int N = like.digits_known();
    if (k >= N) return like.zero_like();
    if (k < 0) throw UsageError("p-adic sample value must be non-negative");
    std::uniform_int_distribution<std::uint32_t> digit(0, like.p() - 1), unit(1, like.p() - 1);
    mpz_class r = unit(rng);
    mpz_class pw = like.p();
    for (std::int64_t i = k + 1; i < N; ++i) {
        r += pw * digit(rng);
        pw *= like.p();
    }
    return PAdic::from_int(like.p(), N, r) * like.monomial_like(static_cast<int>(k));
}

Series sample_with_value(const Series& like, const Value& v, SampleRng& rng, std::uint32_t coeff_degree,
                         std::size_t max_terms) {
    if (v.is_infinite()) throw UsageError("series sample value must be finite");
    std::int64_t den = lcm64(like.denominator(), v.amount().denominator());
    Series base = like.with_denominator(den);
    std::int64_t k = to_grid(v.amount(), den), order = base.raw_order();
    const CoeffField& f = like.field();
    auto coeff = [&](bool nonzero) {
        while (true) {
            Coeff c;
            if (f.kind == CoeffField::Kind::Rational) {
                c = Coeff(mpq_class(std::uniform_int_distribution<int>(-5, 5)(rng), std::uniform_int_distribution<int>(1, 3)(rng)));
            } else {
                std::uint64_t q = 1;
                for (std::uint32_t i = 0; i < coeff_degree; ++i) q *= f.p;
                c = Coeff(FFElem::from_code(f.p, coeff_degree, std::uniform_int_distribution<std::uint64_t>(0, q - 1)(rng)));
            }
            if (!nonzero || !c.is_zero()) return c;
        }
    };
    std::map<std::int64_t, Coeff> terms;
    if (k < order) terms.emplace(k, coeff(true));
    std::bernoulli_distribution keep(0.5);
    for (std::int64_t e = k + 1; e < order && terms.size() < max_terms; ++e)
        if (keep(rng)) terms.emplace(e, coeff(false));
    return Series::from_raw(f, den, std::move(terms), order);
}

Rational grid_step(const PAdic&) { return Rational(1); }
Rational grid_step(const Series& like) { return Rational(1, like.denominator()); }

}  // namespace hk
