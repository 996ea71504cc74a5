#include "support.hpp"

#include "henselkit/fftower.hpp"
#include "henselkit/weak_coeff.hpp"

#include <doctest.h>

using namespace hk;
using namespace hk::testing;

namespace {

const CoeffField QQ = CoeffField::rationals();
const CoeffField F2 = CoeffField::finite(2);

Series S(const std::string& text, const CoeffField& f = QQ) { return Series::parse(text, f); }

// Inverse of a mod m by the extended Euclidean algorithm.
long ext_gcd_inverse(long a, long m) {
    long r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1) {
        long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    return ((s0 % m) + m) % m;
}

std::vector<FFElem> all_elements(std::uint32_t p, std::uint32_t m) {
    std::vector<FFElem> out;
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i) q *= p;
    for (std::uint64_t c = 0; c < q; ++c) out.push_back(FFElem::from_code(p, m, c));
    return out;
}

}  // namespace

TEST_SUITE("ground-rings") {

TEST_CASE("series arithmetic examples") {
    Series a = S("1 + t + O(t^(5))"), b = S("1 - t + O(t^(5))");
    Series prod = a * b;
    CHECK(prod.order() >= Rational(3));
    CHECK(prod == S("1 - t^2 + O(t^(5))"));
    CHECK(S("t^2 + t^3 + O(t^(9))").valuation() + S("t + O(t^(9))").valuation() == Value(3));
    CHECK((S("t^2 + t^3 + O(t^(9))") * S("t + O(t^(9))")).valuation() == Value(3));
    CHECK(S("t^3 + t^4 + O(t^(9))").valuation() == Value(3));
}

TEST_CASE("1/(1 - t) matches the geometric series") {
    for (int N : {1, 4, 10, 20}) {
        Series q = S("1 + O(t^(" + std::to_string(N) + "))") / S("1 - t + O(t^(" + std::to_string(N) + "))");
        CHECK(q.order() == Rational(N));
        for (int k = 0; k < N; ++k) CHECK(q.coeff(Rational(k)) == Coeff::from_int(QQ, 1));
        CHECK(q.term_count() == static_cast<std::size_t>(N));
    }
    CHECK_THROWS_AS(S("1 + O(t^(3))") / S("O(t^(3))"), PrecisionLossError);
}

TEST_CASE("division lowers the order conservatively") {
    Series a = S("t^2 + O(t^(10))"), b = S("t + t^3 + O(t^(10))");
    Series q = a / b;
    CHECK(q.valuation() == Value(1));
    CHECK(q.order() == Rational(10 - 1 + 2 - 2 + 0) - Rational(0));
    CHECK((q * b - a).is_zero());
}

TEST_CASE("rational grids lift to the lcm") {
    Series a = Series::parse("t^(1/2) + O(t^(3))", QQ), b = Series::parse("t^(1/3) + O(t^(3))", QQ);
    Series s = a * b;
    CHECK(s.denominator() % 6 == 0);
    CHECK(s.valuation() == Value(Rational(5, 6)));
    CHECK(Series::parse(s.to_string(), QQ) == s);
}

TEST_CASE("series text round-trips") {
    Rng g(21);
    for (int trial = 0; trial < 100; ++trial) {
        Series a = random_series(g, trial % 2 ? QQ : F2, uniform(g, -3, 2), uniform(g, 3, 12));
        CHECK(Series::parse(a.to_string(), a.field()) == a);
    }
    Series w = Series::monomial(F2, Coeff(FFElem::generator(2, 2)), Rational(1), Rational(4));
    CHECK(Series::parse(w.to_string(), F2) == w);
    CHECK(S("O(t^(3))").to_string() == "O(t^(3))");
    CHECK(S("-2/3*t^(-1) + 5*t^(2) + O(t^(4))").to_string() == "-2/3*t^(-1) + 5*t^(2) + O(t^(4))");
}

TEST_CASE("series ring laws modulo the common order") {
    Rng g(22);
    for (const auto& f : {QQ, F2}) {
        for (int trial = 0; trial < 100; ++trial) {
            Series a = random_series(g, f, uniform(g, -1, 2), 9), b = random_series(g, f, uniform(g, -1, 2), 9),
                   c = random_series(g, f, uniform(g, -1, 2), 9);
            auto eq_mod = [](const Series& x, const Series& y) {
                Value prec = value_min({x.precision(), y.precision()});
                return (x - y).with_precision(prec).is_zero();
            };
            CHECK(eq_mod(a * b, b * a));
            CHECK(eq_mod((a * b) * c, a * (b * c)));
            CHECK(eq_mod(a * (b + c), a * b + a * c));
        }
    }
}

TEST_CASE("p-adic arithmetic examples") {
    PAdic s = PAdic::from_int(3, 10, 7) + PAdic::from_int(3, 10, 2);
    CHECK(s.residue() == 9);
    CHECK(s.valuation() == Value(2));
    PAdic third = PAdic::from_int(2, 5, 1) / PAdic::from_int(2, 5, 3);
    CHECK(third.residue() == ext_gcd_inverse(3, 32));
    CHECK(third.residue() == 11);
    for (int k = 0; k < 9; ++k) CHECK(PAdic::from_int(5, 9, 1).monomial_like(k).valuation() == Value(k));
    PAdic q = PAdic::from_int(3, 10, 18) / PAdic::from_int(3, 10, 9);
    CHECK(q.digits_known() == 8);
    CHECK(q.residue() == 2);
}

TEST_CASE("p-adic division agrees with the extended gcd oracle") {
    Rng g(23);
    for (int trial = 0; trial < 200; ++trial) {
        long m = 3 * 3 * 3 * 3 * 3 * 3;
        long a = uniform(g, 0, m - 1), b = uniform(g, 1, m - 1);
        if (b % 3 == 0) continue;
        PAdic q = PAdic::from_int(3, 6, a) / PAdic::from_int(3, 6, b);
        CHECK(q.residue() == (a * ext_gcd_inverse(b, m)) % m);
    }
}

TEST_CASE("p-adic text round-trips") {
    Rng g(24);
    for (std::uint32_t p : {2u, 3u, 7u, 13u}) {
        for (int trial = 0; trial < 30; ++trial) {
            PAdic a = random_padic(g, p, static_cast<int>(uniform(g, 0, 10)));
            CHECK(PAdic::parse(a.to_string(), p, a.digits_known()) == a);
        }
    }
    CHECK(PAdic::from_int(3, 4, 7).to_string() == "1200 + O(3^4)");
    CHECK(PAdic::parse("-1", 3, 3).to_string() == "222 + O(3^3)");
}

TEST_CASE("weak coefficient map") {
    CHECK(weak_coeff(S("3*t^2 + t^3 + O(t^(6))")).value == Coeff::from_int(QQ, 3));
    CHECK(weak_coeff(S("5 + t + O(t^(6))")).value == residue(S("5 + t + O(t^(6))")));
    CHECK(weak_coeff(S("O(t^(6))")).zero_mod_precision);
    CHECK(weak_coeff(PAdic::from_int(3, 8, 18)).value == Coeff(FFElem::from_int(3, 2)));

    Rng g(25);
    int checked3 = 0, checked2 = 0;
    while (checked3 < 100 || checked2 < 100) {
        Series a = random_series(g, F2, uniform(g, 0, 2), 8), b = random_series(g, F2, uniform(g, 0, 2), 8);
        if (a.is_zero() || b.is_zero()) continue;
        // (WCM3)
        if (a.valuation() == b.valuation() && weak_coeff(a).value == weak_coeff(b).value) {
            CHECK((a - b).valuation() > a.valuation());
            ++checked3;
        }
        Series c = random_series(g, QQ, uniform(g, 0, 2), 8), d = random_series(g, QQ, uniform(g, 0, 2), 8);
        if (c.is_zero() || d.is_zero() || c.valuation() != d.valuation()) continue;
        // (WCM2)
        Coeff sum = weak_coeff(c).value + weak_coeff(d).value;
        if (!sum.is_zero()) {
            CHECK(weak_coeff(c + d).value == sum);
            ++checked2;
        }
    }
    // (WCM4): lift realizes any value and residue.
    Series like = S("O(t^(10))");
    Series l = weak_lift(Coeff::from_int(QQ, 7), Value(Rational(3, 2)), like);
    CHECK(l.valuation() == Value(Rational(3, 2)));
    CHECK(weak_coeff(l).value == Coeff::from_int(QQ, 7));
    CHECK(weak_monomial(Value(0), like) == like.one_like());
}

TEST_CASE("additive_poly_solve examples") {
    FFElem one = FFElem::from_int(2, 1), zero = FFElem::from_int(2, 0);
    CHECK(additive_poly_solve({one, one}, zero).is_zero());

    // x^2 + x = 1: no root in F_2, roots in F_4.
    for (const auto& x : all_elements(2, 1)) CHECK(x * x + x != one);
    int roots4 = 0;
    for (const auto& x : all_elements(2, 2)) roots4 += (x * x + x == one);
    CHECK(roots4 == 2);
    FFElem r = additive_poly_solve({one, one}, one);
    CHECK(r.degree() == 2);
    CHECK(r * r + r == one);
    CHECK(r.pow(3) == one);

    // x^2 + x = w with w a generator of F_4: no root in F_4, roots in F_16.
    FFElem w = FFElem::generator(2, 2);
    for (const auto& x : all_elements(2, 2)) CHECK(x * x + x != w);
    FFElem r16 = additive_poly_solve({one, one}, w);
    CHECK(r16.degree() == 4);
    CHECK(r16 * r16 + r16 == w);
    CHECK(r16.pow(15) == one);

    // x^p = c is the inverse Frobenius.
    FFElem c = FFElem::generator(3, 2) + FFElem::from_int(3, 2);
    FFElem root = additive_poly_solve({FFElem::from_int(3, 0), FFElem::from_int(3, 1)}, c);
    CHECK(root.frobenius() == c);
    CHECK(root.degree() == 2);

    CHECK_THROWS_AS(additive_poly_solve({zero, zero}, one), UsageError);
}

TEST_CASE("tower: Frobenius order and embeddings") {
    Rng g(26);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (std::uint32_t m : {1u, 2u, 3u, 4u}) {
            std::uint64_t q = 1;
            for (std::uint32_t i = 0; i < m; ++i) q *= p;
            for (int trial = 0; trial < 20; ++trial) {
                FFElem a = FFElem::from_code(p, m, static_cast<std::uint64_t>(uniform(g, 0, q - 1)));
                FFElem b = FFElem::from_code(p, m, static_cast<std::uint64_t>(uniform(g, 0, q - 1)));
                FFElem f = a;
                for (std::uint32_t i = 0; i < m; ++i) f = f.frobenius();
                CHECK(f == a);
                CHECK(f.degree() == m);
                for (std::uint32_t l : {2u, 3u}) {
                    std::uint32_t n = m * l;
                    if (n > 8) continue;
                    CHECK((a + b).embed(n) == a.embed(n) + b.embed(n));
                    CHECK((a * b).embed(n) == a.embed(n) * b.embed(n));
                    CHECK((a * b).embed(n).degree() == n);
                    // Embeddings commute: m -> n -> 2n equals m -> 2n.
                    if (2 * n <= 8) CHECK(a.embed(n).embed(2 * n).code() == a.embed(2 * n).code());
                }
                if (!a.is_zero()) CHECK(a * a.inverse() == a.one_like());
            }
        }
    }
}

TEST_CASE("tower moduli are reproducible") {
    auto m1 = ff_modulus(2, 4), m2 = ff_modulus(2, 4);
    CHECK(m1 == m2);
    CHECK(m1.size() == 5);
    CHECK(m1.back() == 1);
    CHECK(ff_primitive_root(7) == 3);
    CHECK(FFElem::parse(3, FFElem::generator(3, 3).to_string()) == FFElem::generator(3, 3));
}

}
