#include "support.hpp"

#include "henselkit/hensel.hpp"
#include "henselkit/poly_text.hpp"

#include <doctest.h>

using namespace hk;
using namespace hk::testing;

namespace {

MultiPoly<PAdic> PP(const std::string& text, std::size_t nvars, std::uint32_t p, int N) {
    return parse_poly<PAdic>(text, nvars, PAdic(p, N), [&](const std::string& s) { return PAdic::parse(s, p, N); });
}

MultiPoly<Series> SP(const std::string& text, std::size_t nvars, const CoeffField& f, int N) {
    return parse_poly<Series>(text, nvars, Series(f, 1, Rational(N)),
                              [&](const std::string& s) { return Series::parse(s, f, 1, Rational(N)); });
}

PAdic Z(std::uint32_t p, int N, long v) { return PAdic::from_int(p, N, v); }

std::vector<unsigned long> roots_mod(const std::function<long(long)>& f, unsigned long mod) {
    std::vector<unsigned long> out;
    for (unsigned long x = 0; x < mod; ++x)
        if (((f(static_cast<long>(x)) % static_cast<long>(mod)) + static_cast<long>(mod)) % static_cast<long>(mod) == 0)
            out.push_back(x);
    return out;
}

// Signed Catalan numbers: inverse of X + X^2 is sum (-1)^(k-1) C_(k-1) z^k.
std::vector<long> signed_catalan(int n) {
    std::vector<long> c{1};
    for (int k = 1; k < n; ++k) {
        long s = 0;
        for (int i = 0; i < k; ++i) s += c[i] * c[k - 1 - i];
        c.push_back(s);
    }
    std::vector<long> out;
    for (int k = 0; k < n; ++k) out.push_back(k % 2 ? -c[k] : c[k]);
    return out;
}

}  // namespace

TEST_SUITE("hensel-lift") {

TEST_CASE("newton_1d: X^2 - 7 over the 3-adics") {
    const int N = 12;
    auto f = PP("X0^2 - 7", 1, 3, N);
    auto lift = newton_1d(f, Z(3, N, 1), Value(N), {50, 3});
    auto roots = roots_mod([](long x) { return x * x - 7; }, 531441);
    REQUIRE(roots.size() == 2);
    unsigned long expected = roots[0] % 9 == 4 ? roots[0] : roots[1];
    CHECK(lift.root.residue() == expected);
    CHECK(lift.root.residue() % 9 == 4);
    CHECK((lift.root - Z(3, N, 1)).valuation() == Value(1));
    CHECK(lift.certificate.final_residual >= Value(N));
    CHECK(lift.certificate.strictly_increasing());
    CHECK(lift.witness->samples_checked == 50);
    CHECK(lift.certificate.uniqueness_ball.open);
    CHECK(lift.certificate.uniqueness_ball.radius == Value(0));
}

TEST_CASE("newton_1d: trivial starts") {
    auto lin = newton_1d(PP("X0", 1, 3, 8), Z(3, 8, 0), Value(8));
    CHECK(lin.root.is_zero());
    CHECK(lin.certificate.steps.empty());
    CHECK(lin.certificate.outcome == LiftOutcome::ExactZero);
    auto s = newton_1d(SP("X0^2 - X0", 1, CoeffField::rationals(), 8), Series(CoeffField::rationals(), 1, Rational(8)), Value(8));
    CHECK(s.root.is_zero());
    CHECK(s.certificate.steps.empty());
}

TEST_CASE("newton_1d: hypothesis boundary") {
    // f = X^2 - 3, b = 0: v f(b) = 1, v f'(b) = v(0) undefined; use b = 3: f'(3) = 6, v = 1; f(3) = 6, v = 1 <= 2.
    CHECK_THROWS_AS(newton_1d(PP("X0^2 - 3", 1, 3, 10), Z(3, 10, 3), Value(10)), HypothesisError);
    // v f(b) = 2 v f'(b) exactly: f = X^2 + X*3 - 9, b = 0: f(0) = -9 (v 2), f'(0) = 3 (v 1).
    try {
        newton_1d(PP("X0^2 + 3*X0 - 9", 1, 3, 10), Z(3, 10, 0), Value(10));
        FAIL("expected a hypothesis violation");
    } catch (const HypothesisError& e) {
        CHECK(std::string(e.what()).find("v f(b) = 2") != std::string::npos);
        CHECK(!e.counterexample().empty());
    }
    CHECK_THROWS_AS(newton_1d(PP("X0^2", 1, 3, 10), Z(3, 10, 0), Value(10)), HypothesisError);
}

TEST_CASE("newton_1d: slope with positive value and the displacement law") {
    Rng g(41);
    int ran = 0;
    while (ran < 100) {
        const int N = 10;
        auto f = random_poly<PAdic>(g, 1, 4, 4, PAdic(3, N), [&] { return random_padic(g, 3, N); });
        PAdic b = random_padic(g, 3, N);
        PAdic fb = f.evaluate({b}), s = f.partial(0).evaluate({b});
        if (s.is_zero() || !(fb.valuation() > s.valuation() * 2)) continue;
        auto lift = newton_1d(f, b, Value(N), {20, static_cast<std::uint64_t>(ran)});
        CHECK(f.evaluate({lift.root}).valuation() >= Value(N));
        Value disp = fb.is_zero() ? Value(N) : fb.valuation() - s.valuation();
        if (disp < Value(N)) CHECK((lift.root - b).valuation() == disp);
        CHECK(lift.certificate.strictly_increasing());
        ++ran;
    }
}

TEST_CASE("uniqueness by exhaustive search over F_2[[t]] mod t^6") {
    CoeffField F2 = CoeffField::finite(2);
    Rng g(42);
    for (int trial = 0; trial < 10; ++trial) {
        Series c = random_series(g, F2, 1, 6);
        auto f = SP("X0^2 + X0", 1, F2, 6) + MultiPoly<Series>::constant(1, c);
        auto lift = newton_1d(f, Series(F2, 1, Rational(6)), Value(6));
        int count = 0;
        for (std::uint64_t bits = 0; bits < 64; ++bits) {
            std::map<std::int64_t, Coeff> terms;
            for (int k = 0; k < 6; ++k)
                if (bits >> k & 1) terms.emplace(k, Coeff::from_int(F2, 1));
            Series x = Series::from_raw(F2, 1, terms, 6);
            if (!lift.certificate.uniqueness_ball.contains(x)) continue;
            if (f.evaluate({x}).valuation() >= Value(6)) {
                ++count;
                CHECK(x == lift.root);
            }
        }
        CHECK(count == 1);
    }
}

TEST_CASE("newton_nd: decoupled systems match newton_1d bit for bit") {
    Rng g(43);
    int ran = 0;
    while (ran < 40) {
        const int N = 10;
        auto f0 = random_poly<PAdic>(g, 1, 3, 3, PAdic(3, N), [&] { return random_padic(g, 3, N); });
        auto f1 = random_poly<PAdic>(g, 1, 3, 3, PAdic(3, N), [&] { return random_padic(g, 3, N); });
        PAdic b0 = random_padic(g, 3, N), b1 = random_padic(g, 3, N);
        auto ok = [&](const MultiPoly<PAdic>& f, const PAdic& b) {
            PAdic s = f.partial(0).evaluate({b});
            return !s.is_zero() && f.evaluate({b}).valuation() > s.valuation() * 2;
        };
        if (!ok(f0, b0) || !ok(f1, b1)) continue;
        Value vdet = f0.partial(0).evaluate({b0}).valuation() + f1.partial(0).evaluate({b1}).valuation();
        if (!(value_min({f0.evaluate({b0}).valuation(), f1.evaluate({b1}).valuation()}) > vdet * 2)) continue;
        // Embed f0 in X0 and f1 in X1.
        MultiPoly<PAdic> F0(2, PAdic(3, N)), F1(2, PAdic(3, N));
        for (const auto& [k, c] : f0.terms()) F0.add_term(MultiIndex({k.e[0], 0}), c);
        for (const auto& [k, c] : f1.terms()) F1.add_term(MultiIndex({0, k.e[0]}), c);
        auto nd = newton_nd<PAdic>({F0, F1}, {b0, b1}, Value(N));
        CHECK(nd.root[0] == newton_1d(f0, b0, Value(N)).root);
        CHECK(nd.root[1] == newton_1d(f1, b1, Value(N)).root);
        ++ran;
    }
}

TEST_CASE("newton_nd: (X0^2 - 7, X1^2 - X0) from (1, 1)") {
    const int N = 10;
    std::vector<MultiPoly<PAdic>> f{PP("X0^2 - 7", 2, 3, N), PP("X1^2 - X0", 2, 3, N)};
    auto lift = newton_nd<PAdic>(f, {Z(3, N, 1), Z(3, N, 1)}, Value(N), {50, 9});
    // Substitution oracle on plain integers mod 3^10.
    long mod = 59049;
    long a0 = lift.root[0].residue().get_si(), a1 = lift.root[1].residue().get_si();
    CHECK((a0 * a0 - 7) % mod == 0);
    CHECK((a1 * a1 - a0) % mod == 0);
    CHECK(lift.certificate.strictly_increasing());
    Matrix<PAdic> J = jacobian(f, Vec<PAdic>{Z(3, N, 1), Z(3, N, 1)});
    Value expected = value_of(J.adjugate().apply(evaluate_system(f, Vec<PAdic>{Z(3, N, 1), Z(3, N, 1)}))) -
                     J.determinant().valuation();
    CHECK(value_of(lift.root - Vec<PAdic>{Z(3, N, 1), Z(3, N, 1)}) == expected);
}

TEST_CASE("newton_nd: common zero is returned unchanged; singular Jacobian rejected") {
    std::vector<MultiPoly<PAdic>> f{PP("X0*X1 - 6", 2, 3, 8), PP("X0 + X1 - 5", 2, 3, 8)};
    Vec<PAdic> b{Z(3, 8, 2), Z(3, 8, 3)};
    auto lift = newton_nd(f, b, Value(8));
    CHECK(lift.root == b);
    CHECK(lift.certificate.outcome == LiftOutcome::ExactZero);
    std::vector<MultiPoly<PAdic>> sing{PP("X0 + X1", 2, 3, 8), PP("X0 + X1 - 3", 2, 3, 8)};
    CHECK_THROWS_AS(newton_nd(sing, b, Value(8)), HypothesisError);
}

TEST_CASE("implicit_fn examples") {
    const int N = 10;
    auto same = implicit_fn<PAdic>({PP("X1^2 - 1 - X0", 2, 3, N)}, {Z(3, N, 0), Z(3, N, 1)}, {Z(3, N, 0)}, Value(N));
    CHECK(same.root[0] == Z(3, N, 1));
    auto lin = implicit_fn<PAdic>({PP("X0 - X1", 2, 3, N)}, {Z(3, N, 0), Z(3, N, 0)}, {Z(3, N, 9)}, Value(N));
    CHECK(lin.root[0] == Z(3, N, 9));
    CHECK(lin.det_value == Value(0));
    CHECK(value_of(lin.root) >= lin.parameter_shift - lin.det_value);
    auto sq = implicit_fn<PAdic>({PP("X1^2 - 1 - X0", 2, 3, N)}, {Z(3, N, 0), Z(3, N, 1)}, {Z(3, N, 9)}, Value(N));
    auto roots = roots_mod([](long x) { return x * x - 10; }, 59049);
    bool found = false;
    for (auto r : roots) found = found || (sq.root[0].residue() == r && r % 3 == 1);
    CHECK(found);
    CHECK((sq.root[0] - Z(3, N, 1)).valuation() >= Value(2));
    CHECK_THROWS_AS(implicit_fn<PAdic>({PP("X1^2 - 1 - X0", 2, 3, N)}, {Z(3, N, 0), Z(3, N, 1)}, {Z(3, N, 1)}, Value(N)),
                    HypothesisError);
    CHECK_THROWS_AS(implicit_fn<PAdic>({PP("X1^2 - 2 - X0", 2, 3, N)}, {Z(3, N, 0), Z(3, N, 1)}, {Z(3, N, 9)}, Value(N)),
                    HypothesisError);
}

TEST_CASE("pseudo_inverse_lift") {
    const int N = 10;
    std::vector<MultiPoly<PAdic>> f{PP("X0 - 3", 2, 3, N), PP("X1 - 6", 2, 3, N)};
    auto E = Matrix<PAdic>::identity(2, Z(3, N, 1));
    auto id = pseudo_inverse_lift(f, {Z(3, N, 0), Z(3, N, 0)}, E, Value(N), {50, 4});
    CHECK(id.root == Vec<PAdic>{Z(3, N, 3), Z(3, N, 6)});
    CHECK(id.certificate.steps.size() == 1);

    // Perturbed Jacobian E + (value > 0) still accepts E.
    std::vector<MultiPoly<PAdic>> g{PP("X0 + 3*X0*X1 + 3*X1 - 3", 2, 3, N), PP("X1 + 9*X0^2 - 6", 2, 3, N)};
    Vec<PAdic> b{Z(3, N, 0), Z(3, N, 0)};
    auto pl = pseudo_inverse_lift(g, b, E, Value(N), {50, 5});
    CHECK(value_of(evaluate_system(g, pl.root)) >= Value(N));
    CHECK(value_of(pl.root - b) == value_of(evaluate_system(g, b)));

    Matrix<PAdic> bad = E;
    bad(0, 1) = Z(3, N, 1);
    CHECK_THROWS_AS(pseudo_inverse_lift(g, b, bad, Value(N)), HypothesisError);
}

TEST_CASE("pseudo_inverse_lift: planted roots over F_2[[t]]") {
    CoeffField F2 = CoeffField::finite(2);
    const int N = 10;
    Rng g(44);
    Series zero(F2, 1, Rational(N));
    for (int trial = 0; trial < 20; ++trial) {
        Vec<Series> r{random_series(g, F2, 1, N), random_series(g, F2, 1, N)};
        auto X = [&](std::size_t i) { return MultiPoly<Series>::variable(2, i, zero) - MultiPoly<Series>::constant(2, r[i]); };
        auto c = [&] { return MultiPoly<Series>::constant(2, random_series(g, F2, 0, N)); };
        // Linear part [[1,1],[0,1]] plus quadratic terms, all vanishing at r.
        std::vector<MultiPoly<Series>> f{X(0) + X(1) + c() * X(0) * X(1), X(1) + c() * X(0) * X(0) + c() * X(1) * X(1)};
        Matrix<Series> Mo(2, zero);
        Mo(0, 0) = zero.one_like();
        Mo(0, 1) = zero.one_like();
        Mo(1, 1) = zero.one_like();
        auto lift = pseudo_inverse_lift(f, {zero, zero}, Mo, Value(N), {20, static_cast<std::uint64_t>(trial)});
        CHECK(lift.root == r);
    }
}

TEST_CASE("pseudo-inverse pairs preserve values") {
    Rng g(45);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 8;
        Matrix<PAdic> M(2, PAdic(3, N)), Mo(2, PAdic(3, N));
        // M = unit upper triangular + 3*noise; Mo = its inverse mod 3 plus 3*noise.
        long a = uniform(g, 0, 2);
        M(0, 0) = Z(3, N, 1) + random_padic(g, 3, N, 1);
        M(0, 1) = Z(3, N, a) + random_padic(g, 3, N, 1);
        M(1, 0) = random_padic(g, 3, N, 1);
        M(1, 1) = Z(3, N, 1) + random_padic(g, 3, N, 1);
        Mo(0, 0) = Z(3, N, 1) + random_padic(g, 3, N, 1);
        Mo(0, 1) = Z(3, N, -a) + random_padic(g, 3, N, 1);
        Mo(1, 0) = random_padic(g, 3, N, 1);
        Mo(1, 1) = Z(3, N, 1) + random_padic(g, 3, N, 1);
        check_pseudo_inverse_pair(M, Mo);
        Vec<PAdic> y{random_padic(g, 3, N, static_cast<int>(uniform(g, 0, 4))),
                     random_padic(g, 3, N, static_cast<int>(uniform(g, 0, 4)))};
        if (zero_mod_precision(y)) continue;
        CHECK(value_of(M.apply(y)) == value_of(y));
        CHECK(value_of(Mo.apply(y)) == value_of(y));
    }
}

TEST_CASE("series_invert: X + X^2 matches the signed Catalan numbers") {
    CoeffField QQ = CoeffField::rationals();
    const int N = 13;
    auto f = SP("X0 + X0^2", 1, QQ, N);
    auto lift = series_invert(f, Series::parse("t + O(t^(13))", QQ), Value(N), {50, 6});
    auto cat = signed_catalan(12);
    for (int k = 1; k <= 12; ++k) CHECK(lift.root.coeff(Rational(k)) == Coeff::from_int(QQ, cat[k - 1]));
    CHECK(lift.root.coeff(Rational(0)).is_zero());
    CHECK(series_invert(SP("X0", 1, QQ, N), Series::parse("t^2 + 3*t^5 + O(t^(13))", QQ), Value(N)).root ==
          Series::parse("t^2 + 3*t^5 + O(t^(13))", QQ));
    CHECK(series_invert(f, Series(QQ, 1, Rational(N)), Value(N)).root.is_zero());
    CHECK_THROWS_AS(series_invert(SP("X0^2", 1, QQ, N), Series::parse("t + O(t^(13))", QQ), Value(N)), HypothesisError);
}

TEST_CASE("series_invert: f(invert(f, z)) = z on random f") {
    Rng g(46);
    CoeffField QQ = CoeffField::rationals();
    const int N = 12;
    for (int trial = 0; trial < 50; ++trial) {
        MultiPoly<Series> f(1, Series(QQ, 1, Rational(N)));
        f.add_term(MultiIndex({1}), Series::constant(QQ, random_coeff(g, QQ, true), Rational(N)));
        for (std::uint32_t k = 2; k <= 5; ++k)
            f.add_term(MultiIndex({k}), Series::constant(QQ, random_coeff(g, QQ), Rational(N)));
        Series z = random_series(g, QQ, 1, N);
        if (z.is_zero()) continue;
        auto lift = series_invert(f, z, Value(N));
        CHECK((f.evaluate({lift.root}) - z).is_zero());
        CHECK(lift.root.valuation() > Value(0));
    }
}

}
