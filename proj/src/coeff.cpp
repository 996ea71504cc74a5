#include "henselkit/coeff.hpp"

#include "henselkit/errors.hpp"

#include <cctype>

namespace hk {

std::string CoeffField::to_string() const {
    return kind == Kind::Rational ? std::string("Q") : "F" + std::to_string(p);
}

CoeffField CoeffField::parse(const std::string& text) {
    if (text == "Q") return rationals();
    if (text.size() >= 2 && text[0] == 'F') {
        std::uint32_t p = 0;
        for (std::size_t i = 1; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw ParseError("bad field tag '" + text + "'");
            p = p * 10 + static_cast<std::uint32_t>(text[i] - '0');
            if (p >= 65536) throw ParseError("characteristic too large in '" + text + "'");
        }
        if (!is_prime_u32(p)) throw ParseError("field tag '" + text + "' needs a prime characteristic");
        return finite(p);
    }
    throw ParseError("unknown field tag '" + text + "'");
}

Coeff Coeff::from_int(const CoeffField& f, std::int64_t k) {
    if (f.kind == CoeffField::Kind::Rational) return Coeff(mpq_class(static_cast<long>(k)));
    return Coeff(FFElem::from_int(f.p, k));
}

Coeff Coeff::from_rational(const CoeffField& f, const mpq_class& q) {
    if (f.kind == CoeffField::Kind::Rational) return Coeff(q);
    mpz_class num = q.get_num() % f.p, den = q.get_den() % f.p;
    if (den == 0) throw UsageError("denominator divisible by the characteristic");
    return Coeff(FFElem::from_int(f.p, num.get_si()) / FFElem::from_int(f.p, den.get_si()));
}

Coeff Coeff::parse(const CoeffField& f, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) || (f.kind == CoeffField::Kind::Finite && !s.empty()))
            s += c;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw ParseError("empty coefficient");
    if (f.kind == CoeffField::Kind::Finite) {
        if (s.front() == '[') return Coeff(FFElem::parse(f.p, s));
        if (s.find('/') != std::string::npos) {
            Coeff q = parse(CoeffField::rationals(), s);
            return from_rational(f, q.rational());
        }
        return Coeff(FFElem::parse(f.p, s));
    }
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw ParseError("bad rational coefficient '" + text + "'");
    if (s.front() == '+') s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational coefficient '" + text + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return Coeff(q);
}

CoeffField Coeff::field() const {
    if (is_rational()) return CoeffField::rationals();
    return CoeffField::finite(std::get<FFElem>(v_).p());
}

const mpq_class& Coeff::rational() const {
    if (!is_rational()) throw UsageError("coefficient is not rational");
    return std::get<mpq_class>(v_);
}

const FFElem& Coeff::ff() const {
    if (is_rational()) throw UsageError("coefficient is not a finite-field element");
    return std::get<FFElem>(v_);
}

bool Coeff::is_zero() const {
    if (is_rational()) return sgn(std::get<mpq_class>(v_)) == 0;
    return std::get<FFElem>(v_).is_zero();
}

bool Coeff::is_one() const {
    if (is_rational()) return std::get<mpq_class>(v_) == 1;
    return std::get<FFElem>(v_).is_one();
}

namespace {
void same_field(const Coeff& a, const Coeff& b) {
    if (a.is_rational() != b.is_rational()) throw UsageError("coefficients from different fields");
}
}  // namespace

Coeff Coeff::operator+(const Coeff& o) const {
    same_field(*this, o);
    if (is_rational()) return Coeff(mpq_class(rational() + o.rational()));
    return Coeff(ff() + o.ff());
}

Coeff Coeff::operator-(const Coeff& o) const {
    same_field(*this, o);
    if (is_rational()) return Coeff(mpq_class(rational() - o.rational()));
    return Coeff(ff() - o.ff());
}

Coeff Coeff::operator*(const Coeff& o) const {
    same_field(*this, o);
    if (is_rational()) return Coeff(mpq_class(rational() * o.rational()));
    return Coeff(ff() * o.ff());
}

Coeff Coeff::operator/(const Coeff& o) const {
    same_field(*this, o);
    if (o.is_zero()) throw UsageError("coefficient division by zero");
    if (is_rational()) return Coeff(mpq_class(rational() / o.rational()));
    return Coeff(ff() / o.ff());
}

Coeff Coeff::operator-() const {
    if (is_rational()) return Coeff(mpq_class(-rational()));
    return Coeff(-ff());
}

Coeff Coeff::inverse() const { return one_like() / *this; }

Coeff Coeff::pow(std::uint64_t e) const {
    if (!is_rational()) return Coeff(ff().pow(e));
    mpq_class r = 1, b = rational();
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return Coeff(r);
}

Coeff Coeff::frobenius() const {
    if (is_rational()) return *this;
    return Coeff(ff().frobenius());
}

Coeff Coeff::zero_like() const { return from_int(field(), 0); }
Coeff Coeff::one_like() const { return from_int(field(), 1); }
Coeff Coeff::int_like(std::int64_t k) const { return from_int(field(), k); }

bool Coeff::operator==(const Coeff& o) const {
    if (is_rational() != o.is_rational()) return false;
    if (is_rational()) return rational() == o.rational();
    return ff() == o.ff();
}

std::string Coeff::to_string() const {
    if (is_rational()) return rational().get_str();
    return ff().to_string();
}

}  // namespace hk
