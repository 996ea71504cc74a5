#pragma once

#include "henselkit/coeff.hpp"
#include "henselkit/padic.hpp"
#include "henselkit/series.hpp"

#include <functional>

namespace hk {

struct CoeffReading {
    Coeff value;
    bool zero_mod_precision = false;
};

// co(a): the residue of m_{-va} a, with m_alpha = t^alpha (series) or p^alpha (p-adic).
CoeffReading weak_coeff(const Series& a);
CoeffReading weak_coeff(const PAdic& a);

// Residue class of an element of value >= 0.
Coeff residue(const Series& a);
Coeff residue(const PAdic& a);

// m_alpha, at the precision of `like`.
Series weak_monomial(const Value& alpha, const Series& like);
PAdic weak_monomial(const Value& alpha, const PAdic& like);

// An element of value gamma with co equal to c (the realization of any value and residue).
Series weak_lift(const Coeff& c, const Value& gamma, const Series& like);
PAdic weak_lift(const Coeff& c, const Value& gamma, const PAdic& like);

template <class R>
struct WeakCoeffMap {
    std::function<Coeff(const R&)> co;
    std::function<R(const Value&, const R&)> monomial;
    std::function<R(const Coeff&, const Value&, const R&)> lift;
};

template <class R>
WeakCoeffMap<R> default_weak_coeff_map() {
    return WeakCoeffMap<R>{
        [](const R& a) { return weak_coeff(a).value; },
        [](const Value& alpha, const R& like) { return weak_monomial(alpha, like); },
        [](const Coeff& c, const Value& g, const R& like) { return weak_lift(c, g, like); },
    };
}

}  // namespace hk
