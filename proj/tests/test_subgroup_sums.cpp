#include "support.hpp"

#include "henselkit/errors.hpp"
#include "henselkit/poly_text.hpp"
#include "henselkit/subgroup.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace hk;
using namespace hk::testing;

namespace {

const CoeffField F2 = CoeffField::finite(2);

Series S(const std::string& text, std::int64_t order = 40) { return Series::parse(text, F2, 1, Rational(order)); }

AdditivePoly additive(const std::vector<std::string>& coeffs, std::uint32_t p = 2) {
    AdditivePoly f;
    f.p = p;
    for (const auto& c : coeffs) f.coeffs.push_back(Series::parse(c, CoeffField::finite(p), 1, Rational(40)));
    return f;
}

// f(x) by plain series arithmetic: x^(p^i) as repeated multiplication.
Series apply_by_products(const AdditivePoly& f, const Series& x) {
    Series acc = x.zero_like();
    Series pw = x;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        if (i) {
            Series next = pw;
            for (std::uint32_t k = 1; k < f.p; ++k) next = next * pw;
            pw = next;
        }
        acc = acc + f.coeffs[i] * pw;
    }
    return acc;
}

// Window projections of f(x) over every x with F_2 coefficients on exponents [glo, ghi).
std::set<FpVector> brute_image(const AdditivePoly& f, const Window& w, int glo, int ghi) {
    WindowSubspace probe(2, w);
    std::set<FpVector> out;
    int n = ghi - glo;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::map<std::int64_t, Coeff> terms;
        for (int j = 0; j < n; ++j)
            if (mask >> j & 1) terms.emplace(glo + j, Coeff::from_int(F2, 1));
        Series x = Series::from_raw(F2, 1, std::move(terms), 40);
        out.insert(probe.project(apply_by_products(f, x)));
    }
    return out;
}

std::set<FpVector> as_set(const WindowSubspace& s) {
    auto all = s.enumerate();
    return {all.begin(), all.end()};
}

FpVector random_vector(Rng& g, std::size_t width, double density = 0.5) {
    std::bernoulli_distribution bit(density);
    FpVector v(width);
    for (auto& x : v) x = bit(g) ? 1 : 0;
    return v;
}

WindowSubspace random_subspace(Rng& g, const Window& w, std::size_t max_gens) {
    WindowSubspace probe(2, w);
    std::vector<FpVector> gens;
    auto k = static_cast<std::size_t>(uniform(g, 0, static_cast<std::int64_t>(max_gens)));
    for (std::size_t i = 0; i < k; ++i) gens.push_back(random_vector(g, probe.width(), 0.4));
    return WindowSubspace::span(2, w, gens);
}

FpVector add(const FpVector& a, const FpVector& b) {
    FpVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % 2;
    return r;
}

// Every tuple (a_1, ..., a_n) in the product of the summands.
std::vector<std::vector<FpVector>> all_tuples(const std::vector<WindowSubspace>& parts) {
    std::vector<std::vector<FpVector>> out{{}};
    for (const auto& part : parts) {
        std::vector<std::vector<FpVector>> next;
        for (const auto& prefix : out)
            for (const auto& a : part.enumerate()) {
                auto t = prefix;
                t.push_back(a);
                next.push_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

// Immediate-homomorphism test of the sum map, checked over all tuples.
bool sum_map_immediate(const std::vector<WindowSubspace>& parts) {
    const WindowSubspace& like = parts[0];
    auto tuples = all_tuples(parts);
    std::vector<FpVector> sums;
    std::vector<Value> tuple_value;
    for (const auto& t : tuples) {
        FpVector s(like.width(), 0);
        Value m = Value::infinity();
        for (const auto& a : t) {
            s = add(s, a);
            m = std::min(m, window_value(like, a));
        }
        sums.push_back(s);
        tuple_value.push_back(m);
    }
    WindowSubspace total = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) total = total + parts[i];
    for (const auto& target : total.enumerate()) {
        Value vt = window_value(like, target);
        if (vt.is_infinite()) continue;
        bool found = false;
        for (std::size_t a = 0; a < tuples.size() && !found; ++a) {
            if (!(window_value(like, add(target, sums[a])) > vt)) continue;
            bool regular = true;
            for (std::size_t b = 0; b < tuples.size() && regular; ++b)
                if (tuple_value[a] <= tuple_value[b] && !(window_value(like, sums[a]) <= window_value(like, sums[b])))
                    regular = false;
            found = regular;
        }
        if (!found) return false;
    }
    return true;
}

Value brute_best_value(const FpVector& target, const WindowSubspace& sum) {
    Value best = window_value(sum, target);
    for (const auto& z : sum.enumerate()) best = std::max(best, window_value(sum, add(target, z)));
    return best;
}

}  // namespace

TEST_SUITE("subgroup-sums") {

TEST_CASE("additive polynomials parse only p-power monomials") {
    Series like = S("0");
    auto parse = [&](const std::string& text) {
        return parse_poly<Series>(text, 1, like.zero_like(),
                                  [&](const std::string& s) { return Series::parse(s, F2, 1, like.order()); });
    };
    AdditivePoly f = AdditivePoly::from_poly(parse("X0^4 + t*X0"), 2);
    REQUIRE(f.coeffs.size() == 3);
    CHECK(f.coeffs[0] == S("t"));
    CHECK(f.coeffs[1].is_zero());
    CHECK(f.coeffs[2] == S("1"));
    CHECK_THROWS_AS(AdditivePoly::from_poly(parse("X0^3"), 2), ParseError);
    CHECK_THROWS_AS(AdditivePoly::from_poly(parse("X0^2 + 1"), 2), ParseError);

    Rng g(3);
    for (int trial = 0; trial < 30; ++trial) {
        Series a = random_series(g, F2, -3, 12), b = random_series(g, F2, -3, 12);
        CHECK((f.apply(a + b) - f.apply(a) - f.apply(b)).is_zero());
        CHECK((f.apply(a) - apply_by_products(f, a)).is_zero());
    }
}

TEST_CASE("echelon basis is canonical") {
    Window w{0, 5};
    auto a = WindowSubspace::span(2, w, {{1, 1, 0, 0, 0}, {0, 1, 1, 0, 1}});
    auto b = WindowSubspace::span(2, w, {{1, 0, 1, 0, 1}, {0, 1, 1, 0, 1}, {1, 1, 0, 0, 0}});
    CHECK(a == b);
    CHECK(a.dim() == 2);
    CHECK(a.pivots() == std::vector<std::size_t>{0, 1});
    auto piv = a.pivots();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) CHECK(a.basis()[i][piv[j]] == (i == j ? 1u : 0u));
    CHECK(a.contains({1, 0, 1, 0, 1}));
    CHECK_FALSE(a.contains({0, 0, 0, 1, 0}));

    WindowSubspace half(3, Window{Rational(-1, 2), Rational(1), 2});
    CHECK(half.width() == 3);
    CHECK(half.exponent(1) == Rational(0));
    CHECK_THROWS_AS(WindowSubspace(2, Window{Rational(1, 3), 2}), UsageError);
    CHECK_THROWS_AS(WindowSubspace(4, Window{0, 2}), UsageError);
}

TEST_CASE("image of X is the whole window") {
    for (auto w : {Window{0, 6}, Window{-3, 2}, Window{Rational(-1, 2), 3, 2}}) {
        AdditivePoly f = additive({"1"});
        auto img = image_window(f, w);
        CHECK(img.dim() == img.width());
    }
}

TEST_CASE("image of X^2 on [0, 6) is span{1, t^2, t^4}") {
    AdditivePoly f = additive({"0", "1"});
    Window w{0, 6};
    auto img = image_window(f, w);
    CHECK(img == WindowSubspace::span_series(2, w, {S("1"), S("t^2"), S("t^4")}));
    CHECK(as_set(img) == brute_image(f, w, 0, 6));
}

TEST_CASE("Artin-Schreier image X^2 + X on [0, 4)") {
    AdditivePoly f = additive({"1", "1"});
    Window w{0, 4};
    auto img = image_window(f, w);
    CHECK(as_set(img) == brute_image(f, w, -2, 4));
    CHECK(img == WindowSubspace::span_series(2, w, {S("t"), S("t^2"), S("t^3")}));
    CHECK_FALSE(img.contains(img.project(S("1"))));
}

TEST_CASE("random additive images agree with brute force") {
    Rng g(11);
    for (int trial = 0; trial < 40; ++trial) {
        AdditivePoly f;
        f.p = 2;
        std::size_t deg = static_cast<std::size_t>(uniform(g, 1, 2));
        for (std::size_t i = 0; i <= deg; ++i) {
            std::map<std::int64_t, Coeff> terms;
            for (std::int64_t k = -1; k <= 2; ++k)
                if (uniform(g, 0, 2) == 0) terms.emplace(k, Coeff::from_int(F2, 1));
            f.coeffs.push_back(Series::from_raw(F2, 1, std::move(terms), 40));
        }
        if (f.coeffs.back().is_zero()) f.coeffs.back() = S("1");
        Window w{-1, 4};
        auto img = image_window(f, w);
        CAPTURE(f.to_string());
        CHECK(as_set(img) == brute_image(f, w, -3, 6));
    }
}

TEST_CASE("image_window errors") {
    AdditivePoly f = additive({"1", "t"});
    CHECK_THROWS_AS(image_window(f, Window{0, 100}, SubgroupLimits{64}), ResourceCapError);
    AdditivePoly shallow;
    shallow.p = 2;
    shallow.coeffs = {Series::parse("1", F2, 1, Rational(3))};
    CHECK_THROWS_AS(image_window(shallow, Window{0, 6}), PrecisionLossError);
    AdditivePoly ext;
    ext.p = 2;
    ext.coeffs = {Series::monomial(F2, Coeff(FFElem::from_code(2, 2, 2)), 0, 40)};
    CHECK_THROWS_AS(image_window(ext, Window{0, 4}), UsageError);
}

TEST_CASE("pseudo-direct examples") {
    Window w{0, 4};
    auto one = WindowSubspace::span_series(2, w, {S("1")});
    CHECK(pseudo_direct_check({one}).holds);
    CHECK(pseudo_direct_check({one, one}).holds);

    auto shifted = WindowSubspace::span_series(2, w, {S("1 + t")});
    auto rep = pseudo_direct_check({shifted, one});
    REQUIRE_FALSE(rep.holds);
    REQUIRE(rep.witness.has_value());
    CHECK(*rep.witness == S("t", 4));
    CHECK(rep.witness_exponent == Rational(1));

    // The witness t has no decomposition a_1 + a_2 leading at exponent 1.
    FpVector target = one.project(*rep.witness);
    for (const auto& a1 : shifted.enumerate())
        for (const auto& a2 : one.enumerate()) {
            Value m = std::min(window_value(one, a1), window_value(one, a2));
            bool ok = window_value(one, add(target, add(a1, a2))) > window_value(one, target) &&
                      window_value(one, add(a1, a2)) == m;
            CHECK_FALSE(ok);
        }
}

TEST_CASE("pseudo-direct check matches the exhaustive immediacy test") {
    Rng g(5);
    Window w{0, 5};
    int yes = 0, no = 0;
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t n = static_cast<std::size_t>(uniform(g, 1, 3));
        std::vector<WindowSubspace> parts;
        for (std::size_t i = 0; i < n; ++i) parts.push_back(random_subspace(g, w, n == 3 ? 2 : 3));
        bool oracle = sum_map_immediate(parts);
        auto rep = pseudo_direct_check(parts);
        CHECK(rep.holds == oracle);
        if (!rep.holds) {
            WindowSubspace total = parts[0];
            for (std::size_t i = 1; i < n; ++i) total = total + parts[i];
            FpVector wv = total.project(*rep.witness);
            CHECK(total.contains(wv));
            CHECK(window_value(total, wv) == Value(rep.witness_exponent));
            for (const auto& part : parts)
                for (auto k : part.pivots()) CHECK(part.exponent(k) != rep.witness_exponent);
        }
        (rep.holds ? yes : no)++;
    }
    CHECK(yes > 10);
    CHECK(no > 10);
}

TEST_CASE("optimal approximation examples") {
    Window w{0, 6};
    auto evens = WindowSubspace::span_series(2, w, {S("1"), S("t^2")});
    auto a = optimal_approx(S("t"), {evens});
    CHECK(a.best.is_zero());
    CHECK(a.value == Value(1));
    CHECK_FALSE(a.at_least);
    CHECK_FALSE(a.best_effort);

    auto inside = optimal_approx(S("1 + t^2"), {evens});
    CHECK(inside.best == S("1 + t^2", 6));
    CHECK(inside.at_least);
    CHECK(inside.value == Value(6));

    auto odd = WindowSubspace::span_series(2, w, {S("t + t^3")});
    auto split = optimal_approx(S("1 + t + t^2 + t^5"), {evens, odd});
    REQUIRE(split.components.size() == 2);
    CHECK(split.components[0] + split.components[1] == split.best);
    CHECK(split.value == Value(3));
    CHECK_THROWS_AS(optimal_approx(S("t^-1"), {evens}), UsageError);
}

TEST_CASE("optimal approximation against brute force") {
    Rng g(17);
    Window w{0, 6};
    int attained = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = static_cast<std::size_t>(uniform(g, 1, 3));
        std::vector<WindowSubspace> parts;
        for (std::size_t i = 0; i < n; ++i) parts.push_back(random_subspace(g, w, 2));
        WindowSubspace total = parts[0];
        for (std::size_t i = 1; i < n; ++i) total = total + parts[i];
        FpVector target = random_vector(g, total.width());
        auto approx = optimal_approx(total.element(target), parts);
        FpVector best = total.project(approx.best);
        CHECK(total.contains(best));
        Value achieved = window_value(total, add(target, best));
        CHECK(approx.value == (achieved.is_infinite() ? Value(6) : achieved));
        CHECK(approx.at_least == achieved.is_infinite());
        Value brute = brute_best_value(target, total);
        CHECK(achieved <= brute);
        bool pd = pseudo_direct_check(parts).holds;
        CHECK(approx.best_effort == !pd);
        if (pd) {
            CHECK(achieved == brute);
            ++attained;
        }
    }
    CHECK(attained > 50);
}

TEST_CASE("approximation value is monotone in the window") {
    Rng g(23);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<AdditivePoly> fs;
        for (int i = 0; i < 2; ++i) {
            AdditivePoly f;
            f.p = 2;
            for (int k = 0; k < 2; ++k) {
                std::map<std::int64_t, Coeff> terms;
                for (std::int64_t e = 0; e <= 2; ++e)
                    if (uniform(g, 0, 1)) terms.emplace(e, Coeff::from_int(F2, 1));
                f.coeffs.push_back(Series::from_raw(F2, 1, std::move(terms), 40));
            }
            if (f.coeffs[1].is_zero()) f.coeffs[1] = S("1");
            fs.push_back(f);
        }
        Series target = random_series(g, F2, 0, 10);
        Value prev = Value(0);
        for (int top : {3, 5, 7, 10}) {
            Window w{0, top};
            std::vector<WindowSubspace> parts;
            for (const auto& f : fs) parts.push_back(image_window(f, w));
            auto a = optimal_approx(target, parts);
            CHECK(a.value >= prev);
            prev = a.value;
        }
    }
}

}  // TEST_SUITE
