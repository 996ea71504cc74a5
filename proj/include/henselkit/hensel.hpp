#pragma once

#include "henselkit/matrix.hpp"
#include "henselkit/multipoly.hpp"
#include "henselkit/newton_drive.hpp"
#include "henselkit/sampling.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace hk {

// Scalar s certified as a pseudo-slope of a map on a ball:
// v(g(y) - g(z)) = v(s) + v(y - z) and v(g(y) - g(z) - s(y - z)) > v(g(y) - g(z)).
template <class R, class P>
struct PseudoLinearWitness {
    R slope;
    Ball<P> domain_ball;
    std::size_t samples_checked = 0;
};

struct LiftOptions {
    std::size_t witness_samples = 0;
    std::uint64_t seed = 1;
    std::size_t max_steps = 10000;
};

template <class R, class P>
struct NewtonLift : Lift<P> {
    Value start_residual;     // v of the (reduced) residual at the start point
    Value slope_value;        // v of the pseudo-slope
    Value working_precision;  // precision the iteration ran at
    std::optional<PseudoLinearWitness<R, P>> witness;
};

template <ValuedElement R, class P>
struct ImplicitLift : NewtonLift<R, P> {
    Value parameter_shift;  // min v(x_i - x'_i)
    Value det_value;        // v det of the Y-block Jacobian at z
};

namespace detail {

template <ValuedElement R>
R times(const R& s, const R& x) {
    return s * x;
}

template <ValuedElement R>
Vec<R> times(const R& s, const Vec<R>& x) {
    return scale(s, x);
}

template <ValuedElement R>
MultiPoly<R> widen_poly(const MultiPoly<R>& f, const Value& prec) {
    return f.map_coeffs([&](const R& c) { return c.with_precision(prec); });
}

template <ValuedElement R>
std::vector<MultiPoly<R>> widen_system(const std::vector<MultiPoly<R>>& f, const Value& prec) {
    std::vector<MultiPoly<R>> out;
    for (const auto& fk : f) out.push_back(widen_poly(fk, prec));
    return out;
}

template <ValuedElement R>
void require_integral(const MultiPoly<R>& f, const std::string& what) {
    for (const auto& [k, c] : f.terms())
        if (c.valuation() < Value(0))
            throw HypothesisError(what + " needs coefficients of value >= 0",
                                  "coefficient of X^" + k.to_string() + " has value " + c.valuation().to_string());
}

template <ValuedElement R>
void require_integral_point(const Vec<R>& b, const std::string& what) {
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i].valuation() < Value(0))
            throw HypothesisError(what + " needs a start point of value >= 0",
                                  "coordinate " + std::to_string(i) + " has value " + b[i].valuation().to_string());
}

inline void require_precision(const Value& precision) {
    if (precision.is_infinite() || precision <= Value(0)) throw UsageError("precision must be a positive finite value");
}

template <ValuedElement R>
R project(const R& a, const Value& prec) {
    return a.with_precision(prec);
}

template <ValuedElement R>
Vec<R> project(const Vec<R>& a, const Value& prec) {
    return widen(a, prec);
}

}  // namespace detail

// Samples pairs y, z in the ball with value of y - z in (radius, cap) and checks
// the pseudo-slope law. Throws HypothesisError naming the first failing pair.
template <ValuedElement R, class P, class G>
PseudoLinearWitness<R, P> check_pseudo_linear(G&& g, const R& s, const Ball<P>& ball, const Value& cap,
                                              std::size_t samples, std::uint64_t seed) {
    SampleRng rng(seed);
    Value vs = s.valuation();
    PseudoLinearWitness<R, P> w{s, ball, 0};
    for (std::size_t k = 0; k < samples; ++k) {
        Value v1 = sample_value_between(ball.center, ball.radius, cap, rng);
        Value v2 = sample_value_between(ball.center, ball.radius, cap, rng);
        P y = ball.center + sample_with_value(ball.center, v1, rng);
        P u = sample_with_value(ball.center, v2, rng);
        P z = y + u;
        auto d = g(y) - g(z);
        Value vd = value_of(d);
        Value vyz = value_of(y - z);
        Value expected = vs + vyz;
        Value rem = value_of(d - detail::times(s, y - z));
        if (!(vd == expected) || !(rem > vd))
            throw HypothesisError("pseudo-slope law fails on a sampled pair",
                                  "y = " + to_text(y) + ", z = " + to_text(z) + ": v(g(y) - g(z)) = " + vd.to_string() +
                                      ", v(s) + v(y - z) = " + expected.to_string() + ", remainder value " +
                                      rem.to_string());
        ++w.samples_checked;
    }
    return w;
}

// One-dimensional Newton lifting from b with v f(b) > 2 v f'(b).
template <ValuedElement R>
NewtonLift<R, R> newton_1d(const MultiPoly<R>& f, const R& b, const Value& precision, const LiftOptions& opts = {}) {
    detail::require_precision(precision);
    if (f.nvars() != 1) throw UsageError("newton_1d needs a polynomial in one variable");
    detail::require_integral(f, "newton_1d");
    detail::require_integral_point(Vec<R>{b}, "newton_1d");
    R s0 = f.partial(0).evaluate({b});
    if (s0.is_zero())
        throw HypothesisError("f'(b) vanishes modulo precision", "v f'(b) >= " + s0.valuation().to_string());
    Value vs = s0.valuation();
    Value W = precision + vs * 2;
    auto fw = detail::widen_poly(f, W);
    R bw = b.with_precision(W);
    R s = fw.partial(0).evaluate({bw});
    R fb = fw.evaluate({bw});
    Value vfb = fb.valuation();
    if (!(vfb > vs * 2))
        throw HypothesisError("v f(b) = " + vfb.to_string() + " is not greater than 2 v f'(b) = " + (vs * 2).to_string(),
                              "b = " + b.to_string() + ", f(b) = " + fb.to_string() + ", f'(b) = " + s.to_string());
    Ball<R> ball{bw, vs, true};
    auto g = [&](const R& y) { return fw.evaluate({y}); };
    DriveOptions dopts{opts.max_steps, W};
    auto lift = newton_drive(g, [&](const R& r) { return r / s; }, bw, fb.zero_like(), W, ball, dopts);
    NewtonLift<R, R> out;
    out.root = lift.root.with_precision(precision);
    out.certificate = lift.certificate;
    out.certificate.final_residual = f.evaluate({out.root}).valuation();
    out.certificate.uniqueness_ball = Ball<R>{out.root, vs, true};
    out.start_residual = vfb;
    out.slope_value = vs;
    out.working_precision = W;
    if (opts.witness_samples) out.witness = check_pseudo_linear(g, s, ball, precision, opts.witness_samples, opts.seed);
    return out;
}

// Multi-dimensional Newton lifting through the adjugate reduction
// y <- y - s^{-1} J*(b) f(y) with s = det J_f(b), frozen at b.
template <ValuedElement R>
NewtonLift<R, Vec<R>> newton_nd(const std::vector<MultiPoly<R>>& f, const Vec<R>& b, const Value& precision,
                                const LiftOptions& opts = {}) {
    detail::require_precision(precision);
    for (const auto& fk : f) detail::require_integral(fk, "newton_nd");
    detail::require_integral_point(b, "newton_nd");
    R det0 = jacobian(f, b).determinant();
    if (det0.is_zero())
        throw HypothesisError("singular Jacobian: det J_f(b) vanishes modulo precision",
                              "v det J_f(b) >= " + det0.valuation().to_string());
    Value vs = det0.valuation();
    Value W = precision + vs * 2;
    auto fw = detail::widen_system(f, W);
    Vec<R> bw = widen(b, W);
    Matrix<R> J = jacobian(fw, bw);
    R s = J.determinant();
    Matrix<R> adj = J.adjugate();
    Vec<R> fb = evaluate_system(fw, bw);
    Value vfb = value_of(fb);
    if (!(vfb > vs * 2))
        throw HypothesisError("v f(b) = " + vfb.to_string() + " is not greater than 2 v det J_f(b) = " + (vs * 2).to_string(),
                              "b = " + to_text(b) + ", f(b) = " + to_text(fb) + ", det J_f(b) = " + s.to_string());
    auto g = [&](const Vec<R>& y) { return adj.apply(evaluate_system(fw, y)); };
    Vec<R> zero(b.size(), s.zero_like());
    Ball<Vec<R>> ball{bw, vs, true};
    DriveOptions dopts{opts.max_steps, W};
    auto lift = newton_drive(
        g,
        [&](const Vec<R>& r) {
            Vec<R> c;
            for (const auto& x : r) c.push_back(x / s);
            return c;
        },
        bw, zero, W, ball, dopts);
    NewtonLift<R, Vec<R>> out;
    out.root = widen(lift.root, precision);
    out.certificate = lift.certificate;
    out.certificate.final_residual = value_of(evaluate_system(f, out.root));
    out.certificate.uniqueness_ball = Ball<Vec<R>>{out.root, vs, true};
    out.start_residual = value_of(g(bw));
    out.slope_value = vs;
    out.working_precision = W;
    if (opts.witness_samples) out.witness = check_pseudo_linear(g, s, ball, precision, opts.witness_samples, opts.seed);
    return out;
}

// Implicit function lifting: f has m parameter variables followed by n unknowns;
// z = (x, y) is a common zero and x' the new parameters.
template <ValuedElement R>
ImplicitLift<R, Vec<R>> implicit_fn(const std::vector<MultiPoly<R>>& f, const Vec<R>& z, const Vec<R>& xprime,
                                    const Value& precision, const LiftOptions& opts = {}) {
    detail::require_precision(precision);
    std::size_t n = f.size(), m = xprime.size();
    if (n == 0 || z.size() != m + n) throw UsageError("implicit_fn needs n equations in m + n variables with z of length m + n");
    for (const auto& fk : f)
        if (fk.nvars() != m + n) throw UsageError("implicit_fn: every equation must use m + n variables");
    Vec<R> fz = evaluate_system(f, z);
    if (value_of(fz) < precision)
        throw HypothesisError("z is not a common zero", "v f(z) = " + value_of(fz).to_string());
    Vec<R> x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m)), y(z.begin() + static_cast<std::ptrdiff_t>(m), z.end());
    Matrix<R> JY(n, z.front().zero_like());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) JY(k, i) = f[k].partial(m + i).evaluate(z);
    R det = JY.determinant();
    if (det.is_zero()) throw HypothesisError("the unknown-block Jacobian is singular at z", "det J(z) = " + det.to_string());
    Value vdet = det.valuation();
    Value shift = Value::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        Value vi = (x[i] - xprime[i]).valuation();
        if (!(vi > vdet * 2))
            throw HypothesisError("v(x_" + std::to_string(i) + " - x'_" + std::to_string(i) + ") = " + vi.to_string() +
                                      " is not greater than 2 v det J(z) = " + (vdet * 2).to_string(),
                                  "x = " + x[i].to_string() + ", x' = " + xprime[i].to_string());
        if (vi < shift) shift = vi;
    }
    std::vector<MultiPoly<R>> g;
    for (const auto& fk : f) g.push_back(fk.substitute_prefix(xprime));
    auto lift = newton_nd(g, y, precision, opts);
    ImplicitLift<R, Vec<R>> out;
    static_cast<NewtonLift<R, Vec<R>>&>(out) = std::move(lift);
    out.parameter_shift = m ? shift : Value::infinity();
    out.det_value = vdet;
    if (m && value_of(out.root - widen(y, precision)) < shift - vdet)
        throw HypothesisError("displacement bound min v(y - y') >= min v(x - x') - v det J(z) fails",
                              "v(y - y') = " + value_of(out.root - widen(y, precision)).to_string());
    return out;
}

// Checks that entries of M M° - E and M° M - E have positive value.
template <ValuedElement R>
void check_pseudo_inverse_pair(const Matrix<R>& M, const Matrix<R>& Mo) {
    if (M.size() != Mo.size()) throw UsageError("pseudo-inverse has the wrong size");
    const R& like = M(0, 0);
    auto E = Matrix<R>::identity(M.size(), like);
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j)
            if (Mo(i, j).valuation() < Value(0))
                throw HypothesisError("pseudo-inverse entries need value >= 0",
                                      "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + Mo(i, j).to_string());
    for (const auto& [name, D] : {std::pair{"M M° - E", M * Mo - E}, std::pair{"M° M - E", Mo * M - E}})
        for (std::size_t i = 0; i < M.size(); ++i)
            for (std::size_t j = 0; j < M.size(); ++j)
                if (!(D(i, j).valuation() > Value(0)))
                    throw HypothesisError(std::string("not a pseudo-inverse pair: an entry of ") + name + " has value <= 0",
                                          "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                              D(i, j).to_string());
}

// Lifting with a pseudo-inverse of the Jacobian: a <- a - M° f(a).
template <ValuedElement R>
NewtonLift<R, Vec<R>> pseudo_inverse_lift(const std::vector<MultiPoly<R>>& f, const Vec<R>& b, const Matrix<R>& Mo,
                                          const Value& precision, const LiftOptions& opts = {}) {
    detail::require_precision(precision);
    for (const auto& fk : f) detail::require_integral(fk, "pseudo_inverse_lift");
    detail::require_integral_point(b, "pseudo_inverse_lift");
    auto fw = detail::widen_system(f, precision);
    Vec<R> bw = widen(b, precision);
    Matrix<R> Mw(Mo.size(), bw.front().zero_like());
    for (std::size_t i = 0; i < Mo.size(); ++i)
        for (std::size_t j = 0; j < Mo.size(); ++j) Mw(i, j) = Mo(i, j).with_precision(precision);
    check_pseudo_inverse_pair(jacobian(fw, bw), Mw);
    Vec<R> fb = evaluate_system(fw, bw);
    Value vfb = value_of(fb);
    if (!(vfb > Value(0)))
        throw HypothesisError("v f(b) = " + vfb.to_string() + " is not positive", "f(b) = " + to_text(fb));
    auto F = [&](const Vec<R>& y) { return evaluate_system(fw, y); };
    Ball<Vec<R>> ball{bw, Value(0), true};
    Vec<R> zero(b.size(), bw.front().zero_like());
    DriveOptions dopts{opts.max_steps, std::nullopt};
    auto lift = newton_drive(F, [&](const Vec<R>& r) { return Mw.apply(r); }, bw, zero, precision, ball, dopts);
    NewtonLift<R, Vec<R>> out;
    out.root = lift.root;
    out.certificate = lift.certificate;
    out.certificate.uniqueness_ball = Ball<Vec<R>>{out.root, Value(0), true};
    out.start_residual = vfb;
    out.slope_value = Value(0);
    out.working_precision = precision;
    if (opts.witness_samples) {
        auto g = [&](const Vec<R>& y) { return Mw.apply(F(y)); };
        out.witness = check_pseudo_linear(g, bw.front().one_like(), ball, precision, opts.witness_samples, opts.seed);
    }
    return out;
}

// Compositional inverse: y in M with f(y) = z' where f = c1 X + c2 X^2 + ... and v(c1) = 0.
template <ValuedElement R>
NewtonLift<R, R> series_invert(const MultiPoly<R>& f, const R& zprime, const Value& precision, const LiftOptions& opts = {}) {
    detail::require_precision(precision);
    if (f.nvars() != 1) throw UsageError("series_invert needs a polynomial in one variable");
    detail::require_integral(f, "series_invert");
    auto fw = detail::widen_poly(f, precision);
    R z = zprime.with_precision(precision);
    R c0 = fw.coefficient(MultiIndex::zero(1));
    if (!c0.is_zero()) throw HypothesisError("series_invert needs f(0) = 0", "constant coefficient " + c0.to_string());
    R c1 = fw.coefficient(MultiIndex::unit(1, 0));
    if (c1.is_zero()) throw HypothesisError("linear coefficient c1 = 0", "c1 = " + c1.to_string());
    if (c1.valuation() != Value(0))
        throw HypothesisError("linear coefficient must have value 0", "v(c1) = " + c1.valuation().to_string());
    if (!(z.valuation() > Value(0)))
        throw HypothesisError("target must lie in the maximal ideal", "v(z') = " + z.valuation().to_string());
    auto g = [&](const R& y) { return fw.evaluate({y}); };
    R zero = z.zero_like();
    Ball<R> ball{zero, Value(0), true};
    DriveOptions dopts{opts.max_steps, std::nullopt};
    auto lift = newton_drive(g, [&](const R& r) { return r / c1; }, zero, z, precision, ball, dopts);
    NewtonLift<R, R> out;
    out.root = lift.root;
    out.certificate = lift.certificate;
    out.certificate.uniqueness_ball = Ball<R>{out.root, Value(0), true};
    out.start_residual = z.valuation();
    out.slope_value = Value(0);
    out.working_precision = precision;
    if (opts.witness_samples) out.witness = check_pseudo_linear(g, c1, ball, precision, opts.witness_samples, opts.seed);
    return out;
}

}  // namespace hk
