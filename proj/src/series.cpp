#include <optional>
#include "henselkit/series.hpp"

#include "henselkit/errors.hpp"

#include <cctype>

namespace hk {

std::int64_t to_grid(Rational q, std::int64_t den) {
    Rational s = q * den;
    if (s.denominator() != 1)
        throw UsageError("exponent " + rational_to_string(q) + " is off the grid 1/" + std::to_string(den));
    return s.numerator();
}

namespace {

std::int64_t den_for(Rational q, std::int64_t den) { return lcm64(den, q.denominator()); }

// Brings both operands onto a common grid.
std::pair<Series, Series> aligned(const Series& a, const Series& b) {
    if (!(a.field() == b.field())) throw UsageError("series over different coefficient fields");
    if (a.denominator() == b.denominator()) return {a, b};
    std::int64_t d = lcm64(a.denominator(), b.denominator());
    return {a.with_denominator(d), b.with_denominator(d)};
}

}  // namespace

Series::Series(CoeffField field, std::int64_t den, Rational order) : field_(field), den_(den), order_(0) {
    if (den <= 0) throw UsageError("grid denominator must be positive");
    den_ = den_for(order, den);
    order_ = to_grid(order, den_);
}

Series Series::from_raw(CoeffField field, std::int64_t den, std::map<std::int64_t, Coeff> terms, std::int64_t order) {
    Series s(field, den, Rational(order, den));
    s.terms_ = std::move(terms);
    s.normalize();
    return s;
}

void Series::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first >= order_ || it->second.is_zero())
            it = terms_.erase(it);
        else
            ++it;
    }
}

Series Series::monomial(CoeffField field, const Coeff& c, Rational exponent, Rational order) {
    std::int64_t den = lcm64(exponent.denominator(), order.denominator());
    Series s(field, den, order);
    if (!c.is_zero() && exponent < order) s.terms_.emplace(to_grid(exponent, den), c);
    return s;
}

Series Series::constant(CoeffField field, const Coeff& c, Rational order) {
    return monomial(field, c, Rational(0), order);
}

Series Series::monomial_like(Rational exponent) const {
    return monomial(field_, Coeff::from_int(field_, 1), exponent, order()).with_denominator(
        lcm64(den_, exponent.denominator()));
}

std::vector<std::pair<Rational, Coeff>> Series::terms() const {
    std::vector<std::pair<Rational, Coeff>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(Rational(k, den_), c);
    return out;
}

Value Series::valuation() const {
    if (terms_.empty()) return Value(order());
    return Value(Rational(terms_.begin()->first, den_));
}

Coeff Series::leading_coeff() const {
    if (terms_.empty()) throw PrecisionLossError("leading coefficient of a series that is zero modulo precision");
    return terms_.begin()->second;
}

Coeff Series::coeff(Rational exponent) const {
    if (exponent >= order()) throw PrecisionLossError("coefficient at or beyond the truncation order");
    Rational s = exponent * den_;
    if (s.denominator() != 1) return Coeff::from_int(field_, 0);
    auto it = terms_.find(s.numerator());
    return it == terms_.end() ? Coeff::from_int(field_, 0) : it->second;
}

Series Series::with_denominator(std::int64_t den) const {
    if (den == den_) return *this;
    if (den % den_ != 0) throw UsageError("grid refinement must be a multiple of the current denominator");
    std::int64_t f = den / den_;
    Series s(field_, den, order());
    for (const auto& [k, c] : terms_) s.terms_.emplace(k * f, c);
    return s;
}

Series Series::with_precision(const Value& v) const {
    if (v.is_infinite()) throw UsageError("series precision must be finite");
    std::int64_t den = den_for(v.amount(), den_);
    Series s = with_denominator(den);
    s.order_ = to_grid(v.amount(), den);
    s.normalize();
    return s;
}

Series Series::truncated_below(Rational e) const {
    Series s = *this;
    std::int64_t den = den_for(e, den_);
    s = s.with_denominator(den);
    std::int64_t k = to_grid(e, den);
    for (auto it = s.terms_.lower_bound(k); it != s.terms_.end();) it = s.terms_.erase(it);
    return s;
}

Series Series::operator+(const Series& o) const {
    auto [a, b] = aligned(*this, o);
    a.order_ = std::min(a.order_, b.order_);
    for (const auto& [k, c] : b.terms_) {
        auto it = a.terms_.find(k);
        if (it == a.terms_.end())
            a.terms_.emplace(k, c);
        else
            it->second = it->second + c;
    }
    a.normalize();
    return a;
}

Series Series::operator-() const {
    Series s = *this;
    for (auto& [k, c] : s.terms_) c = -c;
    return s;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator*(const Series& o) const {
    auto [a, b] = aligned(*this, o);
    std::int64_t va = a.terms_.empty() ? a.order_ : a.terms_.begin()->first;
    std::int64_t vb = b.terms_.empty() ? b.order_ : b.terms_.begin()->first;
    std::int64_t order = std::min(a.order_ + vb, b.order_ + va);
    Series out(a.field_, a.den_, Rational(order, a.den_));
    for (const auto& [ka, ca] : a.terms_) {
        if (ka + vb >= order) break;
        for (const auto& [kb, cb] : b.terms_) {
            std::int64_t k = ka + kb;
            if (k >= order) break;
            auto it = out.terms_.find(k);
            if (it == out.terms_.end())
                out.terms_.emplace(k, ca * cb);
            else
                it->second = it->second + ca * cb;
        }
    }
    out.normalize();
    return out;
}

Series Series::scaled(const Coeff& c) const {
    Series s = *this;
    for (auto& [k, v] : s.terms_) v = v * c;
    s.normalize();
    return s;
}

Series Series::shifted(Rational e) const {
    std::int64_t den = den_for(e, den_);
    Series s = with_denominator(den);
    std::int64_t k = to_grid(e, den);
    std::map<std::int64_t, Coeff> moved;
    for (auto& [key, c] : s.terms_) moved.emplace(key + k, c);
    s.terms_ = std::move(moved);
    s.order_ += k;
    return s;
}

Series Series::pow(unsigned k) const {
    if (k == 0) return one_like();
    std::optional<Series> r;
    Series b = *this;
    while (k) {
        if (k & 1) r = r ? *r * b : b;
        k >>= 1;
        if (k) b = b * b;
    }
    return *r;
}

Series Series::inverse() const {
    if (terms_.empty()) throw PrecisionLossError("inverse of a series that is zero modulo precision");
    std::int64_t k0 = terms_.begin()->first;
    std::int64_t m = order_ - k0;  // relative order of the unit part
    Coeff u0inv = terms_.begin()->second.inverse();
    std::vector<Coeff> u(static_cast<std::size_t>(m), Coeff::from_int(field_, 0));
    for (const auto& [k, c] : terms_) u[static_cast<std::size_t>(k - k0)] = c;
    std::vector<Coeff> w(static_cast<std::size_t>(m), Coeff::from_int(field_, 0));
    w[0] = u0inv;
    std::vector<std::size_t> support;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (!u[i].is_zero()) support.push_back(i);
    for (std::size_t j = 1; j < w.size(); ++j) {
        Coeff acc = Coeff::from_int(field_, 0);
        for (std::size_t i : support) {
            if (i > j) break;
            if (!w[j - i].is_zero()) acc = acc + u[i] * w[j - i];
        }
        w[j] = -(acc * u0inv);
    }
    // Result: t^{-k0} * w, known below relative order m.
    Series out(field_, den_, Rational(m - k0, den_));
    for (std::size_t j = 0; j < w.size(); ++j)
        if (!w[j].is_zero()) out.terms_.emplace(static_cast<std::int64_t>(j) - k0, w[j]);
    return out;
}

Series Series::operator/(const Series& o) const {
    if (o.is_zero()) throw PrecisionLossError("division by a series that is zero modulo precision");
    auto [a, b] = aligned(*this, o);
    return a * b.inverse();
}

Series Series::derivative() const {
    if (field_.kind != CoeffField::Kind::Rational) throw UsageError("d/dt is only provided over the rationals");
    Series out(field_, den_, Rational(order_ - den_, den_));
    for (const auto& [k, c] : terms_) {
        if (k == 0) continue;
        out.terms_.emplace(k - den_, c * Coeff(mpq_class(k, den_)));
    }
    out.normalize();
    return out;
}

Series Series::integral() const {
    if (field_.kind != CoeffField::Kind::Rational) throw UsageError("integration is only provided over the rationals");
    Series out(field_, den_, Rational(order_ + den_, den_));
    for (const auto& [k, c] : terms_) {
        if (k + den_ == 0)
            throw HypothesisError("exponent -1 in the support has no antiderivative", "t^(-1) coefficient " + c.to_string());
        out.terms_.emplace(k + den_, c * Coeff(mpq_class(den_, k + den_)));
    }
    return out;
}

Series Series::frobenius_coeffs() const {
    Series s = *this;
    for (auto& [k, c] : s.terms_) c = c.frobenius();
    return s;
}

bool Series::operator==(const Series& o) const {
    if (!(field_ == o.field_)) return false;
    if (order() != o.order()) return false;
    auto a = terms(), b = o.terms();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
    return true;
}

std::string Series::to_string() const {
    std::string out;
    for (const auto& [k, c] : terms_) {
        out += c.to_string() + "*t^(" + rational_to_string(Rational(k, den_)) + ") + ";
    }
    return out + "O(t^(" + rational_to_string(order()) + "))";
}

namespace {

class SeriesReader {
public:
    SeriesReader(const std::string& s, CoeffField f) : s_(s), f_(f) {}

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool done() {
        skip();
        return i_ >= s_.size();
    }
    bool accept(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("series text '" + s_ + "': " + why + " at offset " + std::to_string(i_));
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    Rational exponent() {
        // t^(q) or t^k
        if (accept('(')) {
            std::size_t start = i_;
            while (i_ < s_.size() && s_[i_] != ')') ++i_;
            if (i_ >= s_.size()) fail("unterminated exponent");
            Rational q = parse_rational(s_.substr(start, i_ - start));
            ++i_;
            return q;
        }
        skip();
        std::size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '-') ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("missing exponent");
        return parse_rational(s_.substr(start, i_ - start));
    }

    Coeff coefficient() {
        skip();
        std::size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '[') {
            while (i_ < s_.size() && s_[i_] != ']') ++i_;
            if (i_ >= s_.size()) fail("unterminated coefficient");
            ++i_;
        } else {
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '/')) ++i_;
        }
        if (start == i_) fail("missing coefficient");
        return Coeff::parse(f_, s_.substr(start, i_ - start));
    }

    std::size_t pos() const { return i_; }

private:
    const std::string& s_;
    CoeffField f_;
    std::size_t i_ = 0;
};

}  // namespace

Series Series::parse(const std::string& text, CoeffField field, std::int64_t den, std::optional<Rational> default_order) {
    SeriesReader rd(text, field);
    std::vector<std::pair<Rational, Coeff>> terms;
    std::optional<Rational> order;
    bool first = true;
    while (!rd.done()) {
        bool neg = false;
        if (!first) {
            if (rd.accept('+')) {
            } else if (rd.accept('-')) {
                neg = true;
            } else {
                rd.fail("expected '+' or '-'");
            }
        }
        first = false;
        while (true) {
            if (rd.accept('-'))
                neg = !neg;
            else if (!rd.accept('+'))
                break;
        }
        if (rd.peek() == 'O') {
            rd.expect('O');
            rd.expect('(');
            rd.expect('t');
            rd.expect('^');
            order = rd.exponent();
            rd.expect(')');
            continue;
        }
        if (order) rd.fail("terms after the O-term");
        Coeff c = Coeff::from_int(field, 1);
        Rational e(0);
        if (rd.peek() == 't') {
            rd.expect('t');
            e = rd.accept('^') ? rd.exponent() : Rational(1);
        } else {
            c = rd.coefficient();
            if (rd.accept('*')) {
                rd.expect('t');
                e = rd.accept('^') ? rd.exponent() : Rational(1);
            }
        }
        if (neg) c = -c;
        terms.emplace_back(e, c);
    }
    if (!order) order = default_order;
    if (!order) throw ParseError("series text '" + text + "' has no O-term and no default precision");
    std::int64_t d = lcm64(den, order->denominator());
    for (const auto& [e, c] : terms) d = lcm64(d, e.denominator());
    Series s(field, d, *order);
    for (const auto& [e, c] : terms) {
        if (e >= *order) continue;
        std::int64_t k = to_grid(e, d);
        auto it = s.terms_.find(k);
        if (it == s.terms_.end())
            s.terms_.emplace(k, c);
        else
            it->second = it->second + c;
    }
    s.normalize();
    return s;
}

}  // namespace hk
