#include "henselkit/diff_fields.hpp"

#include "henselkit/sampling.hpp"
#include "henselkit/weak_coeff.hpp"

#include <fmt/format.h>

namespace hk {

bool AxiomReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string AxiomReport::to_string() const {
    std::string out;
    for (const auto& c : checks) {
        out += fmt::format("{}: {} ({} samples)", c.name, c.passed ? "pass" : "FAIL", c.checked);
        if (!c.passed) out += " counterexample: " + c.counterexample;
        out += "\n";
    }
    return out;
}

namespace {

template <class Pred>
void run_check(AxiomReport& rep, const std::string& name, std::size_t samples, Pred&& pred) {
    AxiomCheck c{name, true, 0, {}};
    for (std::size_t k = 0; k < samples && c.passed; ++k) {
        std::string why;
        if (pred(k, why)) {
            ++c.checked;
        } else if (!why.empty()) {
            c.passed = false;
            c.counterexample = why;
        }
    }
    rep.checks.push_back(std::move(c));
}

FFElem ff_of(const Coeff& c, std::uint32_t p) {
    if (c.is_rational()) return FFElem::from_int(p, 0);
    return c.ff();
}

std::int64_t binom_mod(std::uint32_t i, std::uint32_t j, std::uint32_t p) {
    // Lucas' theorem keeps the binomial small for any i.
    std::int64_t acc = 1;
    while (i || j) {
        std::uint32_t a = i % p, b = j % p;
        if (b > a) return 0;
        std::int64_t c = 1;
        for (std::uint32_t t = 0; t < b; ++t) c = c * (a - t) / (t + 1);
        acc = acc * (c % p) % p;
        i /= p;
        j /= p;
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------- VD field

Series VDFieldInstance::parse(const std::string& text) const { return Series::parse(text, field(), den, precision); }

Series VDFieldInstance::D(const Series& a) const {
    if (a.field() != field()) throw UsageError("VD operator applied to a series over another field");
    return a.frobenius_coeffs() - a;
}

Series VDFieldInstance::D_power(const Series& a, std::size_t i) const {
    Series r = a;
    for (std::size_t k = 0; k < i; ++k) r = D(r);
    return r;
}

OperatorFamily<Series> VDFieldInstance::family(std::size_t n) const {
    OperatorFamily<Series> fam;
    for (std::size_t i = 0; i <= n; ++i) fam.ops.push_back([inst = *this, i](const Series& a) { return inst.D_power(a, i); });
    fam.satisfies_vgeq = true;
    fam.sampler = [deg = sample_degree](SampleRng& rng, const Value& v, const Series& like) {
        return sample_with_value(like, v, rng, deg);
    };
    return fam;
}

Coeff VDFieldInstance::residue_solve(const std::vector<Coeff>& c, const Coeff& target) const {
    // Dbar^i = (phi - id)^i = sum_j binom(i, j) (-1)^{i-j} phi^j.
    std::vector<FFElem> b(c.size(), FFElem::from_int(p, 0));
    for (std::uint32_t i = 0; i < c.size(); ++i) {
        FFElem ci = ff_of(c[i], p);
        for (std::uint32_t j = 0; j <= i; ++j) {
            std::int64_t m = binom_mod(i, j, p);
            if ((i - j) % 2) m = -m;
            b[j] = b[j] + ci * FFElem::from_int(p, m);
        }
    }
    while (b.size() > 1 && b.back().is_zero()) b.pop_back();
    return Coeff(additive_poly_solve(b, ff_of(target, p), degree_cap));
}

AxiomReport vd_axiom_report(const VDFieldInstance& inst, std::size_t samples, std::uint64_t seed) {
    SampleRng rng(seed);
    AxiomReport rep;
    Series like = inst.zero();
    Rational step = grid_step(like);
    auto draw = [&](const Value& lo, const Value& hi) {
        Value v = sample_value_between(like, lo, hi, rng);
        return sample_with_value(like, v, rng, inst.sample_degree);
    };
    Value lo(-3), hi(inst.precision / 2);

    run_check(rep, "D1 = 0", 1, [&](std::size_t, std::string& why) {
        Series d = inst.D(like.one_like());
        if (d.is_zero()) return true;
        why = "D(1) = " + d.to_string();
        return false;
    });
    run_check(rep, "VDF1 v Da >= v a", samples, [&](std::size_t, std::string& why) {
        Series a = draw(lo, hi);
        Series d = inst.D(a);
        if (d.is_zero() || d.valuation() >= a.valuation()) return true;
        why = "a = " + a.to_string() + ", Da = " + d.to_string();
        return false;
    });
    run_check(rep, "VDF2 D t^g = 0", samples, [&](std::size_t k, std::string& why) {
        Rational g = step * static_cast<std::int64_t>(k % 20) - Rational(2);
        Series m = Series::monomial(inst.field(), Coeff::from_int(inst.field(), 1), g, inst.precision).with_denominator(inst.den);
        Series d = inst.D(m);
        if (d.is_zero()) return true;
        why = "g = " + rational_to_string(g) + ", D t^g = " + d.to_string();
        return false;
    });
    run_check(rep, "VDF3 D(ab) = aDb + bDa + DaDb", samples, [&](std::size_t, std::string& why) {
        Series a = draw(Value(0), hi), b = draw(Value(0), hi);
        Series lhs = inst.D(a * b);
        Series rhs = a * inst.D(b) + b * inst.D(a) + inst.D(a) * inst.D(b);
        if ((lhs - rhs).is_zero()) return true;
        why = "a = " + a.to_string() + ", b = " + b.to_string();
        return false;
    });
    run_check(rep, "VDF4 residue of Da = Dbar of residue", samples, [&](std::size_t, std::string& why) {
        Series a = draw(Value(-1), hi);
        if (a.valuation() < Value(0)) return true;
        Coeff ra = residue(a);
        if (residue(inst.D(a)) == ra.frobenius() - ra) return true;
        why = "a = " + a.to_string();
        return false;
    });
    run_check(rep, "v(D^i(ma) - m D^i a) > v(ma) when v Dm > v m", samples, [&](std::size_t k, std::string& why) {
        Series m = Series::monomial(inst.field(), Coeff::from_int(inst.field(), 1 + static_cast<std::int64_t>(k % (inst.p - 1 ? inst.p - 1 : 1))),
                                    step * static_cast<std::int64_t>(k % 5), inst.precision)
                       .with_denominator(inst.den);
        m = m + draw(m.valuation() + Value(step), hi);
        if (!(inst.D(m).is_zero() || inst.D(m).valuation() > m.valuation())) return false;
        Series a = draw(Value(0), hi);
        Series ma = m * a;
        for (std::size_t i = 1; i <= 3; ++i) {
            Series diff = inst.D_power(ma, i) - m * inst.D_power(a, i);
            if (!diff.is_zero() && !(diff.valuation() > ma.valuation())) {
                why = fmt::format("i = {}, m = {}, a = {}", i, m.to_string(), a.to_string());
                return false;
            }
        }
        return true;
    });
    run_check(rep, "residue of D^i a = Dbar^i of residue", samples, [&](std::size_t, std::string& why) {
        Series a = draw(Value(0), hi);
        Coeff r = residue(a);
        for (std::size_t i = 1; i <= 3; ++i) {
            r = r.frobenius() - r;
            if (residue(inst.D_power(a, i)) != r) {
                why = fmt::format("i = {}, a = {}", i, a.to_string());
                return false;
            }
        }
        return true;
    });
    return rep;
}

Series d_solve(const VDFieldInstance& inst, const Series& target, const Value& precision) {
    if (target.field() != inst.field()) throw UsageError("d_solve: target over another field");
    if (precision > target.precision())
        throw PrecisionLossError("d_solve: target known only to " + target.precision().to_string());
    std::vector<FFElem> as{FFElem::from_int(inst.p, -1), FFElem::from_int(inst.p, 1)};
    std::map<std::int64_t, Coeff> terms;
    for (const auto& [k, c] : target.raw_terms()) {
        if (Value(Rational(k, target.denominator())) >= precision) break;
        terms.emplace(k, Coeff(additive_poly_solve(as, ff_of(c, inst.p), inst.degree_cap)));
    }
    Series a = Series::from_raw(inst.field(), target.denominator(), std::move(terms), target.raw_order());
    Series miss = target - inst.D(a);
    if (!miss.is_zero() && miss.valuation() < precision)
        throw StalledError("d_solve residual " + miss.to_string() + " below the precision", {});
    return a;
}

OperatorLift<Series> dhensel_solve(const VDFieldInstance& inst, const MultiPoly<Series>& f, const Series& b,
                                   const Value& precision, const OperatorOptions& opts) {
    if (f.nvars() == 0) throw UsageError("dhensel_solve needs at least one variable");
    OperatorPoly<Series> F{f, inst.family(f.nvars() - 1)};
    ResidueSolver solver = [&inst](const std::vector<Coeff>& c, const Coeff& target) { return inst.residue_solve(c, target); };
    return solve_wcm(F, default_weak_coeff_map<Series>(), solver, b, precision, opts);
}

// ---------------------------------------------------------------- Rosenlicht

Series RosenlichtInstance::parse(const std::string& text) const { return Series::parse(text, field(), den, precision); }

Series RosenlichtInstance::D_power(const Series& a, std::size_t i) const {
    Series r = a;
    for (std::size_t k = 0; k < i; ++k) r = r.derivative();
    return r;
}

OperatorFamily<Series> RosenlichtInstance::family(std::size_t n) const {
    OperatorFamily<Series> fam;
    for (std::size_t i = 0; i <= n; ++i) fam.ops.push_back([inst = *this, i](const Series& a) { return inst.D_power(a, i); });
    fam.dominant_index = n;
    fam.domain_radius = Value(static_cast<std::int64_t>(n));
    fam.domain_open = true;
    fam.inverse_hook = [n](const Series& a) {
        Series r = a;
        for (std::size_t k = 0; k < n; ++k) r = r.integral();
        return r;
    };
    fam.rosenlicht_witnesses = Vec<Series>(n + 1, zero().one_like());
    return fam;
}

AxiomReport rosenlicht_axiom_report(const RosenlichtInstance& inst, std::size_t samples, std::size_t order,
                                    std::uint64_t seed) {
    SampleRng rng(seed);
    AxiomReport rep;
    Series like = inst.zero();
    auto draw = [&](const Value& lo, const Value& hi) {
        return sample_with_value(like, sample_value_between(like, lo, hi, rng), rng);
    };
    Value hi(inst.precision / 2);
    run_check(rep, "constants are the residue representatives", samples, [&](std::size_t k, std::string& why) {
        Series a = (k % 2) ? Series::constant(inst.field(), Coeff(mpq_class(static_cast<long>(k), 7)), inst.precision)
                           : draw(Value(-1), hi);
        bool constant = a.is_zero() || (a.term_count() == 1 && a.valuation() == Value(0));
        if (inst.D(a).is_zero() == constant) return true;
        why = "a = " + a.to_string();
        return false;
    });
    run_check(rep, "v(b Da / Db) > 0 for v a >= 0, v b > 0", samples, [&](std::size_t, std::string& why) {
        Series a = draw(Value(-1), hi), b = draw(Value(0), hi);
        if (a.valuation() < Value(0)) a = a.shifted(Rational(1) - a.valuation().amount());
        Series da = inst.D(a), db = inst.D(b);
        if (da.is_zero() || db.is_zero()) return false;
        Value v = b.valuation() + da.valuation() - db.valuation();
        if (v > Value(0)) return true;
        why = "a = " + a.to_string() + ", b = " + b.to_string();
        return false;
    });
    const std::int64_t n = static_cast<std::int64_t>(order);
    run_check(rep, "v D^i y + (n - i) v De > v D^n y on the safe region", samples, [&](std::size_t, std::string& why) {
        Series y = draw(Value(n), hi), e = draw(Value(0), hi);
        Series dny = inst.D_power(y, order), de = inst.D(e);
        if (dny.is_zero() || de.is_zero()) return false;
        for (std::int64_t i = 0; i < n; ++i) {
            Series diy = inst.D_power(y, static_cast<std::size_t>(i));
            if (diy.is_zero()) continue;
            if (!(diy.valuation() + de.valuation() * (n - i) > dny.valuation())) {
                why = fmt::format("i = {}, y = {}, e = {}", i, y.to_string(), e.to_string());
                return false;
            }
        }
        return true;
    });
    return rep;
}

Series asymptotic_integrate(const RosenlichtInstance&, const Series& target) {
    if (target.is_zero()) return target.integral();
    Rational e = target.valuation().amount();
    if (e == Rational(-1))
        throw HypothesisError("no asymptotic integral: the leading exponent is -1",
                              "t^(-1) coefficient " + target.leading_coeff().to_string());
    Coeff c = target.leading_coeff() / Coeff(mpq_class(e.numerator() + e.denominator(), e.denominator()));
    return Series::monomial(target.field(), c, e + 1, target.order() + 1).with_denominator(target.denominator());
}

namespace {
Series truncate_to(const Series& a, const Value& precision) {
    if (precision.is_finite() && Value(a.order()) > precision) return a.with_precision(precision);
    return a;
}
}  // namespace

Series integrate(const RosenlichtInstance&, const Series& target, const Value& precision) {
    return truncate_to(target.integral(), precision);
}

Series integrate_iterative(const RosenlichtInstance& inst, const Series& target, const Value& precision) {
    Series a = Series(target.field(), target.denominator(), target.order() + 1);
    Series r = target;
    std::size_t guard = target.term_count() + 1;
    while (!r.is_zero()) {
        if (guard-- == 0) throw StalledError("iterated asymptotic integration did not terminate", {});
        Series step = asymptotic_integrate(inst, r);
        a = a + step;
        Series r2 = target - inst.D(a);
        if (!r2.is_zero() && !(r2.valuation() > r.valuation()))
            throw StalledError("asymptotic integration step did not raise the residual value", {});
        r = r2;
    }
    return truncate_to(a, precision);
}

OdeSolution ode_solve(const RosenlichtInstance& inst, const MultiPoly<Series>& g, const Series& c, const Rational& r,
                      const Value& precision, const OperatorOptions& opts, const std::optional<Series>& start) {
    if (g.nvars() < 2) throw UsageError("ode_solve needs variables X0..Xn with n >= 1");
    if (!(r > Rational(1))) throw HypothesisError("the rate r must exceed 1", "r = " + rational_to_string(r));
    if (precision.is_infinite()) throw UsageError("ode_solve needs a finite precision");
    const std::size_t n = g.nvars() - 1;
    const std::int64_t ni = static_cast<std::int64_t>(n);
    Value a_priori(r + 2 * ni - 1);
    if (!c.is_zero() && c.valuation() < Value(r + ni - 1))
        throw HypothesisError("v c = " + c.valuation().to_string() + " is below r + n - 1 = " + rational_to_string(r + ni - 1),
                              "c = " + c.to_string());
    // Block conditions, measured with D^j y at its a priori value r + 2n - 1 - j.
    for (const auto& [k, coef] : g.terms()) {
        std::size_t i = k.first_nonzero();
        if (i == n + 1) throw HypothesisError("g has a constant term; move it into c", "constant " + coef.to_string());
        if (i < n) {
            Value v = coef.valuation();
            for (std::size_t j = 0; j <= n; ++j) v = v + Value(a_priori.amount() - static_cast<std::int64_t>(j)) * k.e[j];
            Value need(Rational(ni - static_cast<std::int64_t>(i)) * r);
            if (v < need)
                throw HypothesisError("block X" + std::to_string(i) + " of g has value " + v.to_string() + " < (n - i) r = " +
                                          need.to_string(),
                                      "monomial " + k.to_string() + " with coefficient " + coef.to_string());
        } else {
            bool linear = k.e[n] == 1;
            if ((linear && !(coef.valuation() > Value(0))) || (!linear && coef.valuation() < Value(0)))
                throw HypothesisError(linear ? "the linear X_n coefficient must lie in the maximal ideal"
                                             : "X_n-only terms need coefficients of value >= 0",
                                      "monomial " + k.to_string() + " with coefficient " + coef.to_string());
        }
    }

    Series like = Series(inst.field(), inst.den, precision.amount());
    auto fit = [&](const Series& a) {
        if (a.precision() < precision)
            throw PrecisionLossError("ode_solve input known only to " + a.precision().to_string() + ": " + a.to_string());
        return a.with_denominator(lcm64(a.denominator(), inst.den)).with_precision(precision);
    };
    MultiPoly<Series> f = g.map_coeffs(fit);
    f.add_term(MultiIndex::zero(n + 1), fit(c));
    f.add_term(MultiIndex::unit(n + 1, n), -like.one_like());
    Series b = start ? fit(*start) : like;
    if (!b.is_zero() && !(b.valuation() > Value(ni)))
        throw HypothesisError("start lies outside the safe region v > n", "v y0 = " + b.valuation().to_string());

    OperatorFamily<Series> fam = inst.family(n);
    OperatorPoly<Series> F{f, fam};
    Vec<Series> point = apply_family(fam, b);
    Series dn = f.partial(n).evaluate(point);
    Value vdn = dn.valuation();
    // Largest rho with v f^[i] >= v d_n + (n - k) rho over all multi-indices, capped at r.
    Rational rho = r;
    for (const auto& i : f.derivative_indices()) {
        std::size_t k = i.first_nonzero();
        if (k >= n) continue;
        Series h = f.hasse_derivative(i).evaluate(point);
        if (h.is_zero()) continue;
        Rational bound = (h.valuation() - vdn).amount() / static_cast<std::int64_t>(n - k);
        if (bound < rho) rho = bound;
    }
    Rational step(1, lcm64(inst.den, like.denominator()));
    Rational q = rho / step;
    Rational grid = rho < Rational(0) ? Rational(0) : step * (q.numerator() / q.denominator());
    OdeSolution out;
    out.a_priori_value = a_priori;
    out.tightest_witness = rho < Rational(0) ? rho : grid;

    Value residual_precision = precision - Value(ni);
    Series fb = eval_opoly(F, b);
    Value ve = fb.is_zero() ? Value(precision) + Value(ni) : fb.valuation() + Value(ni);
    Series e = Series::monomial(inst.field(), Coeff::from_int(inst.field(), 1), ve.amount(), precision.amount() + ni)
                   .with_denominator(like.denominator());
    if (rho >= Rational(0)) {
        Vec<Series> w;
        for (std::size_t k = 0; k <= n; ++k)
            w.push_back(Series::monomial(inst.field(), Coeff::from_int(inst.field(), 1),
                                         grid * static_cast<std::int64_t>(n - k), precision.amount())
                            .with_denominator(like.denominator()));
        F.family.rosenlicht_witnesses = w;
        out.regime = "rosenlicht";
        out.lift = solve_rosenlicht(F, b, e, residual_precision, opts);
    } else {
        F.family.rosenlicht_witnesses.reset();
        out.regime = "dominant";
        out.lift = solve_dominant(F, b, e, residual_precision, opts);
    }
    const Series& y = out.lift.root;
    if (!y.is_zero() && y.valuation() < a_priori)
        throw HypothesisError("solution value " + y.valuation().to_string() + " is below the a priori bound " +
                                  a_priori.to_string(),
                              "y = " + y.to_string());
    return out;
}

}  // namespace hk
