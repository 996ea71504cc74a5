#include "henselkit/subgroup.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace hk {

namespace {

std::uint32_t fp_digit(const Coeff& c, std::uint32_t p) {
    if (c.is_rational()) throw UsageError("subgroup sums need coefficients in F_p");
    const FFElem& e = c.ff();
    if (e.p() != p) throw UsageError("coefficient characteristic differs from the window's");
    if (e.degree() == 1) return static_cast<std::uint32_t>(e.code());
    for (std::uint32_t k = 0; k < p; ++k)
        if (e == FFElem::from_int(p, k)) return k;
    throw UsageError("subgroup sums work over the prime field; coefficient " + e.to_string() + " lies outside F_" +
                     std::to_string(p));
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::uint64_t r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

std::size_t lead_index(const FpVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) return i;
    return v.size();
}

// v <- v - c * w (mod p)
void axpy(FpVector& v, std::uint32_t c, const FpVector& w, std::uint32_t p) {
    if (!c) return;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (w[i]) v[i] = static_cast<std::uint32_t>((v[i] + static_cast<std::uint64_t>(p - c) * w[i]) % p);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t checked_pow(std::uint32_t p, std::size_t i) {
    std::int64_t r = 1;
    for (std::size_t k = 0; k < i; ++k) {
        if (r > (std::int64_t(1) << 40)) throw ResourceCapError("additive polynomial degree too large");
        r *= p;
    }
    return r;
}

}  // namespace

std::string Window::to_string() const {
    return "[" + rational_to_string(lo) + ", " + rational_to_string(hi) + ")";
}

// ---------------------------------------------------------------- AdditivePoly

Series AdditivePoly::apply(const Series& x) const {
    if (coeffs.empty()) throw UsageError("empty additive polynomial");
    Series acc = coeffs[0] * x;
    Series pw = x;
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        pw = pw.pow(p);
        acc = acc + coeffs[i] * pw;
    }
    return acc;
}

AdditivePoly AdditivePoly::from_poly(const MultiPoly<Series>& f, std::uint32_t p) {
    if (f.nvars() != 1) throw ParseError("an additive polynomial has one variable");
    AdditivePoly a;
    a.p = p;
    for (const auto& [k, c] : f.terms()) {
        std::uint64_t d = k.e[0];
        std::size_t i = 0;
        std::uint64_t q = 1;
        while (q < d) {
            q *= p;
            ++i;
        }
        if (q != d || d == 0)
            throw ParseError("monomial X^" + std::to_string(d) + " is not of p-power degree for p = " + std::to_string(p));
        if (a.coeffs.size() <= i) a.coeffs.resize(i + 1, f.zero());
        a.coeffs[i] = c;
    }
    if (a.coeffs.empty()) throw ParseError("additive polynomial is zero");
    return a;
}

std::string AdditivePoly::to_string() const {
    std::string out;
    std::uint64_t q = 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i, q *= p) {
        if (coeffs[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string c;
        for (const auto& [e, a] : coeffs[i].terms())
            c += (c.empty() ? "" : " + ") + a.to_string() + "*t^(" + rational_to_string(e) + ")";
        out += "(" + c + ")*X^" + std::to_string(q);
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- WindowSubspace

WindowSubspace::WindowSubspace(std::uint32_t p, Window w) : p_(p), w_(w), width_(0) {
    if (!is_prime_u32(p)) throw UsageError("window subspaces need a prime p");
    if (w.den <= 0) throw UsageError("window grid denominator must be positive");
    if (!(w.lo < w.hi)) throw UsageError("empty window " + w.to_string());
    Rational span = (w.hi - w.lo) * w.den;
    if (span.denominator() != 1 || (w.lo * w.den).denominator() != 1)
        throw UsageError("window bounds " + w.to_string() + " are off the grid 1/" + std::to_string(w.den));
    width_ = static_cast<std::size_t>(span.numerator());
}

Rational WindowSubspace::exponent(std::size_t index) const {
    return w_.lo + Rational(static_cast<std::int64_t>(index), w_.den);
}

void WindowSubspace::insert(FpVector v) {
    if (v.size() != width_) throw UsageError("vector width does not match the window");
    for (const auto& b : basis_) {
        std::size_t k = lead_index(b);
        axpy(v, v[k], b, p_);
    }
    std::size_t k = lead_index(v);
    if (k == width_) return;
    std::uint32_t s = inv_mod(v[k], p_);
    for (auto& x : v) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * s % p_);
    for (auto& b : basis_) axpy(b, b[k], v, p_);
    basis_.push_back(std::move(v));
    std::sort(basis_.begin(), basis_.end(), [](const FpVector& a, const FpVector& b) { return lead_index(a) < lead_index(b); });
}

WindowSubspace WindowSubspace::span(std::uint32_t p, Window w, const std::vector<FpVector>& vectors) {
    WindowSubspace s(p, w);
    for (const auto& v : vectors) s.insert(v);
    return s;
}

WindowSubspace WindowSubspace::span_series(std::uint32_t p, Window w, const std::vector<Series>& elements) {
    WindowSubspace s(p, w);
    for (const auto& e : elements) s.insert(s.project(e));
    return s;
}

std::vector<std::size_t> WindowSubspace::pivots() const {
    std::vector<std::size_t> out;
    for (const auto& b : basis_) out.push_back(lead_index(b));
    return out;
}

FpVector WindowSubspace::project(const Series& a) const {
    if (a.field().kind != CoeffField::Kind::Finite || a.field().p != p_)
        throw UsageError("series over " + a.field().to_string() + " in an F_" + std::to_string(p_) + " window");
    if (Value(a.order()) < Value(w_.hi))
        throw PrecisionLossError("element known only below " + rational_to_string(a.order()) + ", window top is " +
                                 rational_to_string(w_.hi));
    FpVector v(width_, 0);
    for (const auto& [e, c] : a.terms()) {
        if (e < w_.lo || e >= w_.hi) continue;
        Rational idx = (e - w_.lo) * w_.den;
        if (idx.denominator() != 1) throw UsageError("exponent " + rational_to_string(e) + " is off the window grid");
        v[static_cast<std::size_t>(idx.numerator())] = fp_digit(c, p_);
    }
    return v;
}

Series WindowSubspace::element(const FpVector& v) const {
    std::map<std::int64_t, Coeff> terms;
    std::int64_t lo = (w_.lo * w_.den).numerator();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) terms.emplace(lo + static_cast<std::int64_t>(i), Coeff::from_int(CoeffField::finite(p_), v[i]));
    return Series::from_raw(CoeffField::finite(p_), w_.den, std::move(terms), (w_.hi * w_.den).numerator());
}

bool WindowSubspace::contains(const FpVector& v) const {
    FpVector r = v;
    for (const auto& b : basis_) axpy(r, r[lead_index(b)], b, p_);
    return lead_index(r) == width_;
}

WindowSubspace WindowSubspace::operator+(const WindowSubspace& o) const {
    if (o.p_ != p_ || o.w_.lo != w_.lo || o.w_.hi != w_.hi || o.w_.den != w_.den)
        throw UsageError("subspaces live on different windows");
    WindowSubspace s = *this;
    for (const auto& b : o.basis_) s.insert(b);
    return s;
}

bool WindowSubspace::operator==(const WindowSubspace& o) const {
    return p_ == o.p_ && width_ == o.width_ && basis_ == o.basis_;
}

std::vector<FpVector> WindowSubspace::enumerate(std::size_t limit) const {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        count *= p_;
        if (count > limit) throw ResourceCapError("subspace too large to enumerate");
    }
    std::vector<FpVector> out;
    for (std::uint64_t code = 0; code < count; ++code) {
        FpVector v(width_, 0);
        std::uint64_t c = code;
        for (const auto& b : basis_) {
            std::uint32_t d = static_cast<std::uint32_t>(c % p_);
            c /= p_;
            if (d) axpy(v, p_ - d, b, p_);
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string WindowSubspace::to_string() const {
    std::string out = "span{";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (i) out += ", ";
        std::string term;
        for (std::size_t j = 0; j < width_; ++j) {
            if (!basis_[i][j]) continue;
            if (!term.empty()) term += " + ";
            term += (basis_[i][j] == 1 ? "" : std::to_string(basis_[i][j]) + "*") + "t^(" + rational_to_string(exponent(j)) + ")";
        }
        out += term;
    }
    return out + "} on " + w_.to_string();
}

Value window_value(const WindowSubspace& like, const FpVector& v) {
    std::size_t k = lead_index(v);
    if (k == v.size()) return Value::infinity();
    return Value(like.exponent(k));
}

// ---------------------------------------------------------------- operations

WindowSubspace image_window(const AdditivePoly& f, const Window& w, const SubgroupLimits& limits) {
    WindowSubspace out(f.p, w);
    if (out.width() > limits.max_width)
        throw ResourceCapError("window of " + std::to_string(out.width()) + " grid points exceeds the basis bound " +
                               std::to_string(limits.max_width));
    std::int64_t den = w.den;
    for (const auto& c : f.coeffs) den = lcm64(den, c.denominator());
    if (den != w.den) throw UsageError("coefficients live on a finer grid than the window");
    std::int64_t lo = (w.lo * den).numerator(), hi = (w.hi * den).numerator();
    std::set<std::int64_t> inputs;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        std::int64_t q = checked_pow(f.p, i);
        Series ci = f.coeffs[i].with_denominator(den);
        for (const auto& [k, c] : ci.raw_terms()) {
            for (std::int64_t g = ceil_div(lo - k, q); g < ceil_div(hi - k, q); ++g) {
                inputs.insert(g);
                if (inputs.size() > limits.max_width * 4) throw ResourceCapError("too many inputs meet the window");
            }
        }
    }
    for (std::int64_t g : inputs) {
        Series y = Series(CoeffField::finite(f.p), den, w.hi);
        for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            y = y + f.coeffs[i].shifted(Rational(g * checked_pow(f.p, i), den));
        if (Value(y.order()) < Value(w.hi))
            throw PrecisionLossError("image of t^(" + rational_to_string(Rational(g, den)) + ") known only below " +
                                     rational_to_string(y.order()) + ", window top is " + rational_to_string(w.hi));
        out = out + WindowSubspace::span_series(f.p, w, {y});
    }
    return out;
}

PseudoDirectReport pseudo_direct_check(const std::vector<WindowSubspace>& parts) {
    if (parts.empty()) throw UsageError("pseudo_direct_check needs at least one subspace");
    WindowSubspace sum = parts[0];
    std::set<std::size_t> reachable;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) sum = sum + parts[i];
        for (auto k : parts[i].pivots()) reachable.insert(k);
    }
    PseudoDirectReport rep;
    for (std::size_t j = 0; j < sum.dim(); ++j) {
        std::size_t k = sum.pivots()[j];
        if (reachable.count(k)) continue;
        rep.holds = false;
        rep.witness = sum.element(sum.basis()[j]);
        rep.witness_exponent = sum.exponent(k);
        break;
    }
    return rep;
}

std::string PseudoDirectReport::to_string() const {
    if (holds) return "pseudo-direct on window";
    return "not pseudo-direct: witness " + witness->to_string() + " has leading exponent " +
           rational_to_string(witness_exponent) + " that no summand reaches";
}

Approximation optimal_approx(const Series& target, const std::vector<WindowSubspace>& parts) {
    if (parts.empty()) throw UsageError("optimal_approx needs at least one subspace");
    const WindowSubspace& like = parts[0];
    for (const auto& [e, c] : target.terms())
        if (e < like.window().lo)
            throw UsageError("target has exponent " + rational_to_string(e) + " below the window " + like.window().to_string());
    FpVector r = like.project(target);
    std::vector<FpVector> comp(parts.size(), FpVector(like.width(), 0));
    std::uint32_t p = like.p();
    while (true) {
        std::size_t k = lead_index(r);
        if (k == r.size()) break;
        bool moved = false;
        for (std::size_t i = 0; i < parts.size() && !moved; ++i) {
            const auto& piv = parts[i].pivots();
            auto it = std::find(piv.begin(), piv.end(), k);
            if (it == piv.end()) continue;
            const FpVector& b = parts[i].basis()[static_cast<std::size_t>(it - piv.begin())];
            std::uint32_t c = r[k];
            axpy(r, c, b, p);
            axpy(comp[i], p - c, b, p);
            moved = true;
        }
        if (!moved) break;
    }
    Approximation out;
    FpVector best(like.width(), 0);
    for (const auto& c : comp) {
        axpy(best, p - 1, c, p);
        out.components.push_back(like.element(c));
    }
    out.best = like.element(best);
    out.value = window_value(like, r);
    if (out.value.is_infinite()) {
        out.value = Value(like.window().hi);
        out.at_least = true;
    }
    out.best_effort = !pseudo_direct_check(parts).holds;
    return out;
}

std::string Approximation::to_string() const {
    return "best = " + best.to_string() + ", value " + (at_least ? ">= " : "= ") + value.to_string() +
           (best_effort ? " (best effort: not pseudo-direct on window)" : "");
}

}  // namespace hk
