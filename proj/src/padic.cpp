#include "henselkit/padic.hpp"

#include "henselkit/errors.hpp"
#include "henselkit/fftower.hpp"

#include <algorithm>
#include <cctype>

namespace hk {

namespace {

mpz_class pow_ui(std::uint32_t p, int n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(n));
    return r;
}

void same_p(const PAdic& a, const PAdic& b) {
    if (a.p() != b.p()) throw UsageError("p-adic numbers for different primes");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

PAdic::PAdic(std::uint32_t p, int N) : p_(p), N_(N), r_(0) {
    if (!is_prime_u32(p)) throw UsageError("p-adic base must be prime");
    if (N < 0) throw UsageError("p-adic precision must be non-negative");
}

mpz_class PAdic::modulus() const { return pow_ui(p_, N_); }

PAdic PAdic::from_int(std::uint32_t p, int N, const mpz_class& v) {
    PAdic a(p, N);
    mpz_class m = a.modulus();
    mpz_fdiv_r(a.r_.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return a;
}

PAdic PAdic::from_rational(std::uint32_t p, int N, const mpq_class& q) {
    PAdic a(p, N);
    mpz_class m = a.modulus();
    if (N == 0) return a;
    mpz_class inv;
    mpz_class den = q.get_den();
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
        throw UsageError("rational " + q.get_str() + " is not a p-adic integer for p = " + std::to_string(p));
    mpz_class v = q.get_num() * inv;
    mpz_fdiv_r(a.r_.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return a;
}

int PAdic::val_int() const {
    if (r_ == 0) return N_;
    return static_cast<int>(mpz_remove(mpz_class().get_mpz_t(), r_.get_mpz_t(), mpz_class(p_).get_mpz_t()));
}

Value PAdic::valuation() const { return Value(std::int64_t(val_int())); }

PAdic PAdic::operator+(const PAdic& o) const {
    same_p(*this, o);
    PAdic out(p_, std::min(N_, o.N_));
    mpz_class s = r_ + o.r_;
    mpz_class m = out.modulus();
    mpz_fdiv_r(out.r_.get_mpz_t(), s.get_mpz_t(), m.get_mpz_t());
    return out;
}

PAdic PAdic::operator-() const {
    PAdic out(p_, N_);
    if (r_ != 0) out.r_ = modulus() - r_;
    return out;
}

PAdic PAdic::operator-(const PAdic& o) const { return *this + (-o); }

PAdic PAdic::operator*(const PAdic& o) const {
    same_p(*this, o);
    PAdic out(p_, std::min(N_, o.N_));
    mpz_class s = r_ * o.r_;
    mpz_class m = out.modulus();
    mpz_fdiv_r(out.r_.get_mpz_t(), s.get_mpz_t(), m.get_mpz_t());
    return out;
}

PAdic PAdic::operator/(const PAdic& o) const {
    same_p(*this, o);
    if (o.is_zero()) throw PrecisionLossError("division by a p-adic number that is zero modulo precision");
    int k = o.val_int();
    if (val_int() < k)
        throw UsageError("quotient is not a p-adic integer (v(a) = " + std::to_string(val_int()) +
                         " < v(b) = " + std::to_string(k) + ")");
    int n = std::min(N_, o.N_) - k;
    mpz_class pk = pow_ui(p_, k);
    mpz_class a = r_ / pk;  // exact: v(a) >= k, or a is zero mod p^N with N >= k
    mpz_class b = o.r_ / pk;
    PAdic out(p_, n);
    if (n == 0) return out;
    mpz_class m = out.modulus(), inv;
    mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t());
    mpz_class v = a * inv;
    mpz_fdiv_r(out.r_.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return out;
}

PAdic PAdic::pow(unsigned k) const {
    PAdic r = one_like(), b = *this;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

PAdic PAdic::with_precision(const Value& v) const {
    if (v.is_infinite() || v.amount().denominator() != 1 || v.amount().numerator() < 0)
        throw UsageError("p-adic precision must be a non-negative integer");
    int n = static_cast<int>(v.amount().numerator());
    PAdic out(p_, n);
    mpz_class m = out.modulus();
    mpz_fdiv_r(out.r_.get_mpz_t(), r_.get_mpz_t(), m.get_mpz_t());
    return out;
}

PAdic PAdic::monomial_like(int k) const {
    if (k < 0) throw UsageError("negative power of p is not a p-adic integer");
    if (k >= N_) return zero_like();
    return from_int(p_, N_, pow_ui(p_, k));
}

std::string PAdic::to_string() const {
    std::string out;
    mpz_class r = r_;
    for (int i = 0; i < N_; ++i) {
        mpz_class d;
        mpz_fdiv_qr_ui(r.get_mpz_t(), d.get_mpz_t(), r.get_mpz_t(), p_);
        if (p_ > 10 && i) out += ',';
        out += d.get_str();
    }
    if (!out.empty()) out += " + ";
    return out + "O(" + std::to_string(p_) + "^" + std::to_string(N_) + ")";
}

PAdic PAdic::parse(const std::string& text, std::uint32_t p, int N) {
    std::string s = trim(text);
    if (s.empty()) throw ParseError("empty p-adic literal");
    auto o = s.find("O(");
    if (o == std::string::npos) {
        mpq_class q;
        std::string t = s;
        if (!t.empty() && t[0] == '+') t.erase(0, 1);
        for (char c : t)
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
                throw ParseError("bad p-adic literal '" + text + "'");
        if (q.set_str(t, 10) != 0 || q.get_den() == 0) throw ParseError("bad p-adic literal '" + text + "'");
        q.canonicalize();
        return from_rational(p, N, q);
    }
    std::string digits = trim(s.substr(0, o));
    std::string tail = trim(s.substr(o + 2));
    if (tail.empty() || tail.back() != ')') throw ParseError("bad precision suffix in '" + text + "'");
    tail.pop_back();
    auto caret = tail.find('^');
    if (caret == std::string::npos) throw ParseError("bad precision suffix in '" + text + "'");
    std::uint32_t base = 0;
    int prec = 0;
    try {
        base = static_cast<std::uint32_t>(std::stoul(tail.substr(0, caret)));
        prec = std::stoi(tail.substr(caret + 1));
    } catch (const std::logic_error&) {
        throw ParseError("bad precision suffix in '" + text + "'");
    }
    if (base != p) throw ParseError("p-adic literal '" + text + "' is for p = " + std::to_string(base));
    if (!digits.empty()) {
        if (digits.back() != '+') throw ParseError("missing '+' before the precision suffix in '" + text + "'");
        digits.pop_back();
        digits = trim(digits);
    }
    std::vector<std::uint32_t> ds;
    if (p > 10) {
        std::size_t start = 0;
        while (start <= digits.size() && !digits.empty()) {
            auto comma = digits.find(',', start);
            std::string tok = digits.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            try {
                ds.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            } catch (const std::logic_error&) {
                throw ParseError("bad digit '" + tok + "'");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else {
        for (char c : digits) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad digit in '" + text + "'");
            ds.push_back(static_cast<std::uint32_t>(c - '0'));
        }
    }
    if (static_cast<int>(ds.size()) != prec)
        throw ParseError("digit count does not match the precision in '" + text + "'");
    mpz_class v = 0;
    for (std::size_t i = ds.size(); i-- > 0;) {
        if (ds[i] >= p) throw ParseError("digit out of range in '" + text + "'");
        v = v * p + ds[i];
    }
    return from_int(p, prec, v);
}

}  // namespace hk
