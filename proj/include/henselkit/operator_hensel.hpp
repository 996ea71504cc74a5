#pragma once

#include "henselkit/multipoly.hpp"
#include "henselkit/newton_drive.hpp"
#include "henselkit/sampling.hpp"
#include "henselkit/weak_coeff.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hk {

// Additive operators sigma_0..sigma_n acting on one valued ring, with the
// structural flags the solvers rely on. Flags are trusted but re-checked on
// random samples before every solve.
template <ValuedElement R>
struct OperatorFamily {
    using Op = std::function<R(const R&)>;

    std::vector<Op> ops;
    bool satisfies_vgeq = false;
    std::optional<std::size_t> dominant_index;
    std::optional<Vec<R>> rosenlicht_witnesses;
    // Approximate inverse of the dominant operator: returns a with v(a' - sigma a) > v a'.
    Op inverse_hook;
    // Domain B of the dominant operator: {v > radius} (open) or {v >= radius}.
    Value domain_radius = Value(0);
    bool domain_open = true;
    // Element of exactly the given value; defaults to sample_with_value at the precision of `like`.
    std::function<R(SampleRng&, const Value&, const R& like)> sampler;

    std::size_t size() const { return ops.size(); }
    std::size_t top() const { return ops.size() - 1; }
};

template <ValuedElement R>
struct OperatorPoly {
    MultiPoly<R> f;
    OperatorFamily<R> family;
};

struct OperatorOptions {
    std::size_t samples = 24;
    std::uint64_t seed = 1;
    std::size_t max_steps = 10000;
};

struct ValuePair {
    Value first;
    Value second;
};

template <class R>
struct OperatorLift : Lift<R> {
    Value start_residual;
    Value slope_value;                 // vs for solve_wcm, v d_n for the dominant regimes
    std::vector<Value> partial_values;  // v d_i
    std::vector<ValuePair> corrections;  // (v a, v phi(a)) per step
    std::size_t samples_checked = 0;
    std::size_t remainder_pairs_checked = 0;
};

template <ValuedElement R>
Vec<R> apply_family(const OperatorFamily<R>& fam, const R& x) {
    Vec<R> out;
    out.reserve(fam.size());
    for (const auto& op : fam.ops) out.push_back(op(x));
    return out;
}

// f(sigma_0 x, ..., sigma_n x).
template <ValuedElement R>
R eval_opoly(const OperatorPoly<R>& F, const R& x) {
    if (F.f.nvars() != F.family.size())
        throw UsageError("operator polynomial has " + std::to_string(F.f.nvars()) + " variables for " +
                         std::to_string(F.family.size()) + " operators");
    if (x.valuation() < Value(0))
        throw HypothesisError("operator polynomials are evaluated on the valuation ring", "v x = " + x.valuation().to_string());
    return F.f.evaluate(apply_family(F.family, x));
}

// d_i = df/dX_i at (sigma_0 b, ..., sigma_n b).
template <ValuedElement R>
Vec<R> operator_partials(const OperatorPoly<R>& F, const R& b) {
    Vec<R> point = apply_family(F.family, b);
    Vec<R> d;
    for (std::size_t i = 0; i < F.f.nvars(); ++i) d.push_back(F.f.partial(i).evaluate(point));
    return d;
}

// phi(a) = sum_i d_i sigma_i(a).
template <ValuedElement R>
R linear_part(const OperatorFamily<R>& fam, const Vec<R>& d, const R& a) {
    R acc = d[0] * fam.ops[0](a);
    for (std::size_t i = 1; i < d.size(); ++i) acc = acc + d[i] * fam.ops[i](a);
    return acc;
}

struct TaylorGapReport {
    Value slope_value;       // vs = min v df/dX_i(b)
    Value shift_value;       // min v(y_i - z_i)
    Value difference_value;  // v(f(y) - f(z))
    Value remainder_value;   // v(f(y) - f(z) - sum (y_i - z_i) df/dX_i(b))
    bool holds = true;
    std::string to_string() const;
};

inline std::string TaylorGapReport::to_string() const {
    return "vs = " + slope_value.to_string() + ", shift = " + shift_value.to_string() + ", difference = " +
           difference_value.to_string() + ", remainder = " + remainder_value.to_string() + (holds ? ", holds" : ", FAILS");
}

// Checks v(f(y) - f(z) - sum (y_i - z_i) d_i) > vs + shift and v(f(y) - f(z)) >= vs + shift
// for y, z in b + sM^{n+1}.
template <ValuedElement R>
TaylorGapReport taylor_gap_check(const MultiPoly<R>& f, const Vec<R>& b, const Vec<R>& y, const Vec<R>& z) {
    std::size_t n = f.nvars();
    if (b.size() != n || y.size() != n || z.size() != n) throw UsageError("taylor_gap_check: dimension mismatch");
    for (const auto& [k, c] : f.terms())
        if (c.valuation() < Value(0))
            throw HypothesisError("taylor_gap_check needs coefficients of value >= 0", "coefficient of X^" + k.to_string());
    Vec<R> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(f.partial(i).evaluate(b));
    TaylorGapReport rep;
    rep.slope_value = value_of(d);
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i].valuation() < Value(0)) throw HypothesisError("b lies outside the valuation ring", "coordinate " + std::to_string(i));
        for (const R* w : {&y[i], &z[i]}) {
            R off = *w - b[i];
            if (!off.is_zero() && !(off.valuation() > rep.slope_value))
                throw HypothesisError("point outside b + sM",
                                      "coordinate " + std::to_string(i) + ": v(y_i - b_i) = " + off.valuation().to_string() +
                                          " <= vs = " + rep.slope_value.to_string());
        }
    }
    Vec<R> diff = y - z;
    rep.shift_value = value_of(diff);
    R fd = f.evaluate(y) - f.evaluate(z);
    R lin = diff[0] * d[0];
    for (std::size_t i = 1; i < n; ++i) lin = lin + diff[i] * d[i];
    rep.difference_value = fd.valuation();
    rep.remainder_value = (fd - lin).valuation();
    if (zero_mod_precision(diff)) {
        rep.shift_value = rep.difference_value = rep.remainder_value = Value::infinity();
        return rep;
    }
    Value bound = rep.slope_value + rep.shift_value;
    R rem = fd - lin;
    if ((rem.is_zero() && rem.precision() <= bound) || (fd.is_zero() && fd.precision() < bound))
        throw PrecisionLossError("Taylor gap undecidable: bound " + bound.to_string() + " reaches the precision " +
                                 rem.precision().to_string());
    rep.holds = rep.remainder_value > bound && rep.difference_value >= bound;
    return rep;
}

namespace detail {

template <ValuedElement R>
R sample_element(const OperatorFamily<R>& fam, SampleRng& rng, const Value& v, const R& like) {
    if (fam.sampler) return fam.sampler(rng, v, like);
    return sample_with_value(like, v, rng);
}

// Nonzero element of the dominant operator's domain B, with value below the precision.
template <ValuedElement R>
R sample_domain(const OperatorFamily<R>& fam, SampleRng& rng, const R& like) {
    Value lo = fam.domain_radius;
    Value hi = like.precision();
    Value v = sample_value_between(like, lo, hi, rng);
    if (!fam.domain_open && std::uniform_int_distribution<int>(0, 3)(rng) == 0) v = lo;
    if (fam.domain_open && v == lo) v = lo + Value(grid_step(like));
    return sample_element(fam, rng, v, like);
}

inline std::string sample_text(const std::string& a) { return "a = " + a; }

// Additivity and (V>=) on samples from the valuation ring, including cancelling pairs.
template <ValuedElement R>
std::size_t check_family_basics(const OperatorFamily<R>& fam, const R& like, bool vgeq, std::size_t samples,
                                SampleRng& rng) {
    std::size_t checked = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        Value vx = sample_value_between(like, Value(0), like.precision(), rng);
        if (k % 4 == 0) vx = Value(0);
        R x = sample_element(fam, rng, vx, like);
        R y = (k % 3 == 0) ? -x + sample_element(fam, rng, vx + Value(grid_step(like)), like)
                           : sample_element(fam, rng, sample_value_between(like, Value(0), like.precision(), rng), like);
        for (std::size_t i = 0; i < fam.size(); ++i) {
            R lhs = fam.ops[i](x + y);
            R rhs = fam.ops[i](x) + fam.ops[i](y);
            if (!(lhs - rhs).is_zero())
                throw HypothesisError("operator " + std::to_string(i) + " is not additive on a sampled pair",
                                      "x = " + x.to_string() + ", y = " + y.to_string());
            if (vgeq && !x.is_zero()) {
                R sx = fam.ops[i](x);
                if (!sx.is_zero() && sx.valuation() < x.valuation())
                    throw HypothesisError("(V>=) fails: v sigma_" + std::to_string(i) + "(a) < v a",
                                          sample_text(x.to_string()) + ", sigma a = " + sx.to_string());
            }
        }
        ++checked;
    }
    return checked;
}

// Dominance of sigma_k on B: v sigma_k a < min_{j != k} v sigma_j a.
template <ValuedElement R>
std::size_t check_dominance(const OperatorFamily<R>& fam, std::size_t k, const R& like, std::size_t samples,
                            SampleRng& rng) {
    std::size_t checked = 0;
    for (std::size_t t = 0; t < samples; ++t) {
        R a = sample_domain(fam, rng, like);
        if (a.is_zero()) continue;
        R top = fam.ops[k](a);
        if (top.is_zero())
            throw HypothesisError("dominant operator " + std::to_string(k) + " kills a sampled domain element",
                                  sample_text(a.to_string()));
        for (std::size_t j = 0; j < fam.size(); ++j) {
            if (j == k) continue;
            R other = fam.ops[j](a);
            if (!other.is_zero() && !(top.valuation() < other.valuation()))
                throw HypothesisError("dominance fails: v sigma_" + std::to_string(k) + " a = " +
                                          top.valuation().to_string() + " is not below v sigma_" + std::to_string(j) +
                                          " a = " + other.valuation().to_string(),
                                      sample_text(a.to_string()));
        }
        ++checked;
    }
    return checked;
}

// Rosenlicht witnesses: e_n = 1, v e_0 >= ... >= v e_n = 0, and v e_i + v sigma_i a > v sigma_n a on B.
template <ValuedElement R>
std::size_t check_rosenlicht(const OperatorFamily<R>& fam, const R& like, std::size_t samples, SampleRng& rng) {
    if (!fam.rosenlicht_witnesses) throw HypothesisError("Rosenlicht solver needs witnesses e_0..e_n");
    const Vec<R>& e = *fam.rosenlicht_witnesses;
    std::size_t n = fam.top();
    if (e.size() != fam.size()) throw UsageError("one Rosenlicht witness per operator is required");
    if (!(e[n] - like.one_like()).is_zero()) throw HypothesisError("the last Rosenlicht witness must be 1", "e_n = " + e[n].to_string());
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        if (e[i].valuation() < e[i + 1].valuation())
            throw HypothesisError("Rosenlicht witness values must be non-increasing",
                                  "v e_" + std::to_string(i) + " < v e_" + std::to_string(i + 1));
    std::size_t checked = 0;
    for (std::size_t t = 0; t < samples; ++t) {
        R a = sample_domain(fam, rng, like);
        if (a.is_zero()) continue;
        R top = fam.ops[n](a);
        if (top.is_zero())
            throw HypothesisError("sigma_n kills a sampled domain element", sample_text(a.to_string()));
        for (std::size_t i = 0; i < n; ++i) {
            R si = fam.ops[i](a);
            if (si.is_zero()) continue;
            if (!(e[i].valuation() + si.valuation() > top.valuation()))
                throw HypothesisError("Rosenlicht condition fails: v e_" + std::to_string(i) + " + v sigma_" +
                                          std::to_string(i) + " a <= v sigma_n a",
                                      sample_text(a.to_string()));
        }
        ++checked;
    }
    return checked;
}

template <ValuedElement R>
void require_family_shape(const OperatorPoly<R>& F, const R& b) {
    if (F.family.ops.empty()) throw UsageError("operator family is empty");
    if (F.f.nvars() != F.family.size()) throw UsageError("operator polynomial and family sizes differ");
    if (b.valuation() < Value(0)) throw HypothesisError("start point must lie in the valuation ring", "v b = " + b.valuation().to_string());
}

}  // namespace detail

// Residue-field equation sum_i c_i sigma-bar_i x = target; returns x or throws.
using ResidueSolver = std::function<Coeff(const std::vector<Coeff>& c, const Coeff& target)>;

// Weak-coefficient-map regime: residual a' is corrected by a lift of the
// residue solution of sum c_i sigma-bar_i x = co(s^{-1} a'), value v a' - vs.
template <ValuedElement R>
OperatorLift<R> solve_wcm(const OperatorPoly<R>& F, const WeakCoeffMap<R>& co, const ResidueSolver& residue_solver,
                          const R& b, const Value& precision, const OperatorOptions& opts = {}) {
    detail::require_family_shape(F, b);
    const auto& fam = F.family;
    if (!fam.satisfies_vgeq) throw HypothesisError("solve_wcm needs a family satisfying (V>=)");
    SampleRng rng(opts.seed);
    OperatorLift<R> out;
    out.samples_checked = detail::check_family_basics(fam, b, true, opts.samples, rng);
    Vec<R> d = operator_partials(F, b);
    for (const auto& di : d) out.partial_values.push_back(di.valuation());
    Value vs = Value::infinity();
    for (const auto& di : d)
        if (!di.is_zero() && di.valuation() < vs) vs = di.valuation();
    if (vs.is_infinite()) throw HypothesisError("all partial derivatives vanish at sigma(b)", "b = " + b.to_string());
    R s = co.monomial(vs, b);
    std::vector<Coeff> c;
    for (const auto& di : d)
        c.push_back(!di.is_zero() && di.valuation() == vs ? co.co(di / s) : co.co(di).zero_like());
    R fb = eval_opoly(F, b);
    out.start_residual = fb.valuation();
    out.slope_value = vs;
    if (!fb.is_zero() && !(fb.valuation() > vs * 2))
        throw HypothesisError("v f(sigma b) = " + fb.valuation().to_string() + " is not greater than 2 vs = " +
                                  (vs * 2).to_string(),
                              "b = " + b.to_string() + ", f(sigma b) = " + fb.to_string());
    auto g = [&](const R& y) { return eval_opoly(F, y); };
    auto step = [&](const R& r) -> R {
        Coeff target = co.co(r / s);
        Coeff xbar;
        try {
            xbar = residue_solver(c, target);
        } catch (const Error& e) {
            std::string cs;
            for (std::size_t i = 0; i < c.size(); ++i) cs += (i ? ", " : "") + c[i].to_string();
            throw HypothesisError("residue operator is not surjective: sum c_i sigma_i x = " + target.to_string() +
                                      " has no solution (" + e.what() + ")",
                                  "c = (" + cs + "), target = " + target.to_string() + ", residual = " + r.to_string());
        }
        Value va = r.valuation() - vs;
        R a = co.lift(xbar, va, b);
        R phi = linear_part(fam, d, a);
        if (!phi.is_zero() && phi.valuation() < vs + va)
            throw HypothesisError("v phi(a) < vs + v a for a correction",
                                  "a = " + a.to_string() + ", phi(a) = " + phi.to_string());
        out.corrections.push_back({a.valuation(), phi.valuation()});
        return a;
    };
    Ball<R> ball{b, vs, true};
    DriveOptions dopts{opts.max_steps, std::nullopt};
    auto lift = newton_drive(g, step, b, b.zero_like(), precision, ball, dopts);
    out.root = lift.root;
    out.certificate = lift.certificate;
    return out;
}

// Direct phi-solver route: the caller supplies a with v(a' - phi a) > v a' and
// v a = v a' - vs. The contract is checked per step, not in advance.
template <ValuedElement R>
OperatorLift<R> solve_with_phi(const OperatorPoly<R>& F, const std::function<R(const R&)>& phi_solver, const R& b,
                               const Value& precision, const OperatorOptions& opts = {}) {
    detail::require_family_shape(F, b);
    OperatorLift<R> out;
    Vec<R> d = operator_partials(F, b);
    Value vs = value_of(d);
    for (const auto& di : d) out.partial_values.push_back(di.valuation());
    if (zero_mod_precision(d)) throw HypothesisError("all partial derivatives vanish at sigma(b)", "b = " + b.to_string());
    R fb = eval_opoly(F, b);
    out.start_residual = fb.valuation();
    out.slope_value = vs;
    if (!fb.is_zero() && !(fb.valuation() > vs * 2))
        throw HypothesisError("v f(sigma b) = " + fb.valuation().to_string() + " is not greater than 2 vs = " +
                                  (vs * 2).to_string(),
                              "b = " + b.to_string());
    auto step = [&](const R& r) -> R {
        R a = phi_solver(r);
        R phi = linear_part(F.family, d, a);
        if (!(a.valuation() == r.valuation() - vs) || !((r - phi).valuation() > r.valuation()))
            throw HypothesisError("phi-solver broke its contract",
                                  "a' = " + r.to_string() + ", a = " + a.to_string() + ", phi(a) = " + phi.to_string());
        out.corrections.push_back({a.valuation(), phi.valuation()});
        return a;
    };
    auto lift = newton_drive([&](const R& y) { return eval_opoly(F, y); }, step, b, b.zero_like(), precision,
                             Ball<R>{b, vs, true}, DriveOptions{opts.max_steps, std::nullopt});
    out.root = lift.root;
    out.certificate = lift.certificate;
    return out;
}

namespace detail {

template <ValuedElement R>
struct DominantSetup {
    std::size_t k;
    Vec<R> d;
    R fb;
};

template <ValuedElement R>
DominantSetup<R> dominant_setup(const OperatorPoly<R>& F, const R& b, const R& e, OperatorLift<R>& out,
                                SampleRng& rng, std::size_t samples) {
    require_family_shape(F, b);
    const auto& fam = F.family;
    if (!fam.dominant_index) throw HypothesisError("no dominant operator declared");
    std::size_t k = *fam.dominant_index;
    if (k >= fam.size()) throw UsageError("dominant index out of range");
    if (!fam.inverse_hook) throw HypothesisError("the dominant operator has no inverse hook");
    out.samples_checked += check_family_basics(fam, b, fam.satisfies_vgeq, samples, rng);
    out.samples_checked += check_dominance(fam, k, b, samples, rng);
    Vec<R> d = operator_partials(F, b);
    for (const auto& di : d) out.partial_values.push_back(di.valuation());
    if (d[k].is_zero()) throw HypothesisError("d_n vanishes at sigma(b)", "b = " + b.to_string());
    Value vdn = d[k].valuation();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!d[i].is_zero() && d[i].valuation() < vdn)
            throw HypothesisError("v d_n = " + vdn.to_string() + " is not the minimum of v d_i",
                                  "v d_" + std::to_string(i) + " = " + d[i].valuation().to_string());
    R fb = eval_opoly(F, b);
    R se = fam.ops[k](e);
    Value need = vdn + se.valuation();
    if (!fb.is_zero() && fb.valuation() < need)
        throw HypothesisError("v f(sigma b) = " + fb.valuation().to_string() + " is below v d_n + v sigma_n e = " +
                                  need.to_string(),
                              "b = " + b.to_string() + ", e = " + e.to_string());
    out.start_residual = fb.valuation();
    out.slope_value = vdn;
    return DominantSetup<R>{k, std::move(d), std::move(fb)};
}

template <ValuedElement R>
OperatorLift<R> dominant_drive(const OperatorPoly<R>& F, const R& b, const R& e, const Value& precision,
                               const OperatorOptions& opts, OperatorLift<R> out, const DominantSetup<R>& setup,
                               std::vector<R>* iterates) {
    const auto& fam = F.family;
    const R& dn = setup.d[setup.k];
    auto g = [&](const R& y) {
        if (iterates) iterates->push_back(y);
        return eval_opoly(F, y);
    };
    auto step = [&](const R& r) -> R {
        R q = r / dn;
        R a = fam.inverse_hook(q);
        R sa = fam.ops[setup.k](a);
        if (!(q - sa).is_zero() && !((q - sa).valuation() > q.valuation()))
            throw HypothesisError("inverse hook misses: v(a'/d_n - sigma_n a) <= v(a'/d_n)",
                                  "a'/d_n = " + q.to_string() + ", a = " + a.to_string());
        out.corrections.push_back({a.valuation(), dn.valuation() + sa.valuation()});
        return a;
    };
    Ball<R> ball{b, fam.domain_radius, fam.domain_open};
    auto lift = newton_drive(g, step, b, b.zero_like(), precision, ball, DriveOptions{opts.max_steps, std::nullopt});
    R moved = fam.ops[setup.k](lift.root - b);
    R se = fam.ops[setup.k](e);
    if (!moved.is_zero() && moved.valuation() < se.valuation())
        throw HypothesisError("v sigma_n(a - b) = " + moved.valuation().to_string() + " is below v sigma_n e = " +
                                  se.valuation().to_string(),
                              "a = " + lift.root.to_string());
    out.root = lift.root;
    out.certificate = lift.certificate;
    out.certificate.uniqueness_ball = Ball<R>{lift.root, fam.domain_radius, fam.domain_open};
    return out;
}

}  // namespace detail

// Dominant-operator regime: corrections a = hook(a' / d_n) with sigma_n the dominant operator.
template <ValuedElement R>
OperatorLift<R> solve_dominant(const OperatorPoly<R>& F, const R& b, const R& e, const Value& precision,
                               const OperatorOptions& opts = {}) {
    SampleRng rng(opts.seed);
    OperatorLift<R> out;
    auto setup = detail::dominant_setup(F, b, e, out, rng, opts.samples);
    return detail::dominant_drive(F, b, e, precision, opts, std::move(out), setup, static_cast<std::vector<R>*>(nullptr));
}

// Rosenlicht regime: as solve_dominant, with the coefficient condition
// v f^{[i]}(sigma b) >= v d_n + v e_k (k the first nonzero position of i) checked
// exactly and the remainder law verified on consecutive iterates.
template <ValuedElement R>
OperatorLift<R> solve_rosenlicht(const OperatorPoly<R>& F, const R& b, const R& e, const Value& precision,
                                 const OperatorOptions& opts = {}) {
    SampleRng rng(opts.seed);
    const auto& fam = F.family;
    detail::require_family_shape(F, b);
    if (fam.dominant_index && *fam.dominant_index != fam.top())
        throw UsageError("the Rosenlicht regime uses the last operator as the dominant one");
    OperatorFamily<R> fam2 = fam;
    fam2.dominant_index = fam.top();
    OperatorPoly<R> G{F.f, fam2};
    OperatorLift<R> out;
    out.samples_checked += detail::check_rosenlicht(fam2, b, opts.samples, rng);
    auto setup = detail::dominant_setup(G, b, e, out, rng, opts.samples);
    const Vec<R>& w = *fam2.rosenlicht_witnesses;
    Vec<R> point = apply_family(fam2, b);
    Value vdn = setup.d[setup.k].valuation();
    for (const auto& i : F.f.derivative_indices()) {
        R h = F.f.hasse_derivative(i).evaluate(point);
        if (h.is_zero()) continue;
        std::size_t k = i.first_nonzero();
        Value need = vdn + w[k].valuation();
        if (h.valuation() < need)
            throw HypothesisError("coefficient condition fails at multi-index " + i.to_string() + ": v f^[i](sigma b) = " +
                                      h.valuation().to_string() + " < v d_n + v e_" + std::to_string(k) + " = " +
                                      need.to_string(),
                                  "multi-index " + i.to_string());
    }
    std::vector<R> iterates;
    out = detail::dominant_drive(G, b, e, precision, opts, std::move(out), setup, &iterates);
    const R& dn = setup.d[setup.k];
    std::size_t n = fam2.top();
    for (std::size_t t = 1; t < iterates.size(); ++t) {
        Vec<R> y = apply_family(fam2, iterates[t - 1]);
        Vec<R> z = apply_family(fam2, iterates[t]);
        R lin = dn * (y[n] - z[n]);
        if (lin.is_zero()) continue;
        R fd = F.f.evaluate(y) - F.f.evaluate(z);
        R rem = fd - lin;
        if (!(rem.valuation() > lin.valuation()) || !(fd.valuation() == lin.valuation()))
            throw HypothesisError("remainder law fails on an iterate pair",
                                  "y = " + iterates[t - 1].to_string() + ", z = " + iterates[t].to_string() +
                                      ": v remainder = " + rem.valuation().to_string() +
                                      ", v d_n(y_n - z_n) = " + lin.valuation().to_string());
        ++out.remainder_pairs_checked;
    }
    return out;
}

}  // namespace hk
