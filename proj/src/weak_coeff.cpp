#include "henselkit/weak_coeff.hpp"

#include "henselkit/errors.hpp"

namespace hk {

CoeffReading weak_coeff(const Series& a) {
    if (a.is_zero()) return {Coeff::from_int(a.field(), 0), true};
    return {a.leading_coeff(), false};
}

CoeffReading weak_coeff(const PAdic& a) {
    if (a.is_zero()) return {Coeff(FFElem::from_int(a.p(), 0)), true};
    mpz_class u;
    mpz_class p(a.p());
    mpz_remove(u.get_mpz_t(), a.residue().get_mpz_t(), p.get_mpz_t());
    mpz_class d = u % p;
    return {Coeff(FFElem::from_int(a.p(), d.get_si())), false};
}

Coeff residue(const Series& a) {
    if (a.valuation() < Value(0)) throw UsageError("residue of an element of negative value");
    if (a.order() <= Rational(0)) throw PrecisionLossError("residue of a series known below order 0 only");
    return a.coeff(Rational(0));
}

Coeff residue(const PAdic& a) {
    if (a.digits_known() == 0) throw PrecisionLossError("residue of a p-adic number with no known digits");
    mpz_class d = a.residue() % a.p();
    return Coeff(FFElem::from_int(a.p(), d.get_si()));
}

Series weak_monomial(const Value& alpha, const Series& like) {
    if (alpha.is_infinite()) throw UsageError("monomial of infinite value");
    return Series::monomial(like.field(), Coeff::from_int(like.field(), 1), alpha.amount(), like.order())
        .with_denominator(lcm64(like.denominator(), alpha.amount().denominator()));
}

PAdic weak_monomial(const Value& alpha, const PAdic& like) {
    if (alpha.is_infinite() || alpha.amount().denominator() != 1) throw UsageError("p-adic monomial needs an integer value");
    return like.monomial_like(static_cast<int>(alpha.amount().numerator()));
}

Series weak_lift(const Coeff& c, const Value& gamma, const Series& like) {
    return weak_monomial(gamma, like).scaled(c);
}

PAdic weak_lift(const Coeff& c, const Value& gamma, const PAdic& like) {
    if (c.is_rational() || c.ff().degree() != 1 || c.ff().p() != like.p())
        throw UsageError("p-adic residues live in the prime field F_p");
    PAdic unit = PAdic::from_int(like.p(), like.digits_known(), mpz_class(static_cast<unsigned long>(c.ff().code())));
    return unit * weak_monomial(gamma, like);
}

}  // namespace hk
