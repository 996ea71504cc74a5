#pragma once

#include "henselkit/operator_hensel.hpp"
#include "henselkit/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hk {

struct AxiomCheck {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string counterexample;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_passed() const;
    std::string to_string() const;
};

// Truncated series over the F_p tower with D(sum c_g t^g) = sum (c_g^p - c_g) t^g.
struct VDFieldInstance {
    std::uint32_t p = 2;
    std::int64_t den = 1;
    Rational precision = Rational(16);
    // Largest tower degree the residue solver may reach; 1 restricts to F_p.
    std::uint32_t degree_cap = kDefaultDegreeCap;
    // Tower degree of coefficients drawn by the axiom sampler.
    std::uint32_t sample_degree = 4;

    CoeffField field() const { return CoeffField::finite(p); }
    Series zero() const { return Series(field(), den, precision); }
    Series parse(const std::string& text) const;
    Series D(const Series& a) const;
    Series D_power(const Series& a, std::size_t i) const;
    OperatorFamily<Series> family(std::size_t n) const;
    // Solves sum_i c_i Dbar^i x = target on the residue tower.
    Coeff residue_solve(const std::vector<Coeff>& c, const Coeff& target) const;
};

AxiomReport vd_axiom_report(const VDFieldInstance& inst, std::size_t samples, std::uint64_t seed = 1);

// a with v(a' - D a) >= precision, one Artin-Schreier solve per exponent.
Series d_solve(const VDFieldInstance& inst, const Series& target, const Value& precision);

// Root a of f(a, Da, ..., D^n a) with v(a - b) > gamma.
OperatorLift<Series> dhensel_solve(const VDFieldInstance& inst, const MultiPoly<Series>& f, const Series& b,
                                   const Value& precision, const OperatorOptions& opts = {});

// Rational-grid series with D = d/dt.
struct RosenlichtInstance {
    std::int64_t den = 1;
    Rational precision = Rational(16);

    CoeffField field() const { return CoeffField::rationals(); }
    Series zero() const { return Series(field(), den, precision); }
    Series parse(const std::string& text) const;
    Series D(const Series& a) const { return a.derivative(); }
    Series D_power(const Series& a, std::size_t i) const;
    // Operators D^0..D^n on the safe region v > n, dominant index n, hook = n-fold integral.
    OperatorFamily<Series> family(std::size_t n) const;
};

// Samples the differential-valuation axioms and the Rosenlicht dominance inequality.
AxiomReport rosenlicht_axiom_report(const RosenlichtInstance& inst, std::size_t samples, std::size_t order = 2,
                                    std::uint64_t seed = 1);

// Integral of the leading term: v(a' - Da) > v a'.
Series asymptotic_integrate(const RosenlichtInstance& inst, const Series& target);
// Termwise antiderivative truncated at `precision`.
Series integrate(const RosenlichtInstance& inst, const Series& target, const Value& precision);
// The same antiderivative built by repeated asymptotic integration.
Series integrate_iterative(const RosenlichtInstance& inst, const Series& target, const Value& precision);

struct OdeSolution {
    OperatorLift<Series> lift;
    std::string regime;          // "rosenlicht" or "dominant"
    Value a_priori_value;        // r + 2n - 1, the guaranteed lower bound for v y
    Rational tightest_witness;   // largest rho with e_k = t^{(n-k) rho} passing the coefficient test
};

// Solves D^n y = g(y, Dy, ..., D^n y) + c for an infinitesimal y. `start` defaults to 0.
OdeSolution ode_solve(const RosenlichtInstance& inst, const MultiPoly<Series>& g, const Series& c, const Rational& r,
                      const Value& precision, const OperatorOptions& opts = {},
                      const std::optional<Series>& start = std::nullopt);

}  // namespace hk
