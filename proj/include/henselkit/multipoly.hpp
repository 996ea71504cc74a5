#pragma once

#include "henselkit/errors.hpp"
#include "henselkit/valued.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hk {

struct MultiIndex {
    std::vector<std::uint32_t> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<std::uint32_t> v) : e(std::move(v)) {}
    static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<std::uint32_t>(n, 0)); }
    static MultiIndex unit(std::size_t n, std::size_t i) {
        MultiIndex m = zero(n);
        m.e.at(i) = 1;
        return m;
    }

    std::size_t size() const { return e.size(); }
    std::uint64_t norm() const {
        std::uint64_t s = 0;
        for (auto x : e) s += x;
        return s;
    }
    bool is_zero() const { return norm() == 0; }
    // Componentwise a <= b.
    bool divides(const MultiIndex& b) const {
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] > b.e[j]) return false;
        return true;
    }
    // Lowest position with a nonzero entry, or size() for the zero index.
    std::size_t first_nonzero() const {
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j]) return j;
        return e.size();
    }
    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t j = 0; j < e.size(); ++j) s += (j ? "," : "") + std::to_string(e[j]);
        return s + ")";
    }
};

// prod_j binom(k_j, i_j), exact in 64 bits.
std::int64_t multi_binomial(const MultiIndex& k, const MultiIndex& i);

template <RingElement R>
class MultiPoly {
public:
    MultiPoly(std::size_t nvars, R zero) : nvars_(nvars), zero_(std::move(zero)) {}

    static MultiPoly variable(std::size_t nvars, std::size_t i, const R& like) {
        MultiPoly f(nvars, like.zero_like());
        f.add_term(MultiIndex::unit(nvars, i), like.one_like());
        return f;
    }
    static MultiPoly constant(std::size_t nvars, const R& c) {
        MultiPoly f(nvars, c.zero_like());
        f.add_term(MultiIndex::zero(nvars), c);
        return f;
    }

    std::size_t nvars() const { return nvars_; }
    const R& zero() const { return zero_; }
    const std::map<MultiIndex, R>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const MultiIndex& k, const R& c) {
        if (k.size() != nvars_) throw UsageError("multi-index length does not match the variable count");
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(k, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    R coefficient(const MultiIndex& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? zero_ : it->second;
    }

    std::uint32_t degree() const {
        std::uint64_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.norm());
        return static_cast<std::uint32_t>(d);
    }

    std::uint32_t degree_in(std::size_t i) const {
        std::uint32_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.e[i]);
        return d;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        check_vars(o);
        MultiPoly r = *this;
        for (const auto& [k, c] : o.terms_) r.add_term(k, c);
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r(nvars_, zero_);
        for (const auto& [k, c] : terms_) r.add_term(k, -c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }
    MultiPoly operator*(const MultiPoly& o) const {
        check_vars(o);
        MultiPoly r(nvars_, zero_);
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_) {
                MultiIndex k = ka;
                for (std::size_t j = 0; j < nvars_; ++j) k.e[j] += kb.e[j];
                r.add_term(k, ca * cb);
            }
        return r;
    }
    MultiPoly scaled(const R& s) const {
        MultiPoly r(nvars_, zero_);
        for (const auto& [k, c] : terms_) r.add_term(k, s * c);
        return r;
    }

    bool operator==(const MultiPoly& o) const { return nvars_ == o.nvars_ && (*this - o).is_zero(); }

    // Hasse derivative: coefficient prod binom(k_j, i_j) on the shifted index k - i.
    MultiPoly hasse_derivative(const MultiIndex& i) const {
        if (i.size() != nvars_) throw UsageError("multi-index length does not match the variable count");
        MultiPoly r(nvars_, zero_);
        for (const auto& [k, c] : terms_) {
            if (!i.divides(k)) continue;
            MultiIndex s = k;
            for (std::size_t j = 0; j < nvars_; ++j) s.e[j] -= i.e[j];
            r.add_term(s, c * c.int_like(multi_binomial(k, i)));
        }
        return r;
    }

    MultiPoly partial(std::size_t i) const { return hasse_derivative(MultiIndex::unit(nvars_, i)); }

    R evaluate(const Vec<R>& x) const {
        if (x.size() != nvars_) throw UsageError("evaluation point has the wrong dimension");
        if (terms_.empty()) return x.empty() ? zero_ : x.front().zero_like();
        std::vector<std::vector<R>> powers(nvars_);
        for (std::size_t j = 0; j < nvars_; ++j) {
            std::uint32_t d = degree_in(j);
            if (d == 0) continue;
            powers[j].reserve(d + 1);
            powers[j].push_back(x[j]);
            for (std::uint32_t t = 2; t <= d; ++t) powers[j].push_back(powers[j].back() * x[j]);
        }
        bool first = true;
        R acc = zero_;
        for (const auto& [k, c] : terms_) {
            R term = c;
            for (std::size_t j = 0; j < nvars_; ++j)
                if (k.e[j]) term = term * powers[j][k.e[j] - 1];
            if (first) {
                acc = term;
                first = false;
            } else {
                acc = acc + term;
            }
        }
        return acc;
    }

    // Substitutes values for the first m variables.
    MultiPoly substitute_prefix(const Vec<R>& values) const {
        std::size_t m = values.size();
        if (m > nvars_) throw UsageError("too many substituted values");
        MultiPoly r(nvars_ - m, zero_);
        for (const auto& [k, c] : terms_) {
            R term = c;
            for (std::size_t j = 0; j < m; ++j)
                for (std::uint32_t t = 0; t < k.e[j]; ++t) term = term * values[j];
            MultiIndex rest(std::vector<std::uint32_t>(k.e.begin() + static_cast<std::ptrdiff_t>(m), k.e.end()));
            r.add_term(rest, term);
        }
        return r;
    }

    template <class F>
    auto map_coeffs(F&& f) const -> MultiPoly<decltype(f(std::declval<const R&>()))> {
        using S = decltype(f(std::declval<const R&>()));
        MultiPoly<S> r(nvars_, f(zero_));
        for (const auto& [k, c] : terms_) r.add_term(k, f(c));
        return r;
    }

    std::vector<MultiIndex> support() const {
        std::vector<MultiIndex> out;
        for (const auto& [k, c] : terms_) out.push_back(k);
        return out;
    }

    // All nonzero multi-indices i with i <= k for some monomial k of f.
    std::vector<MultiIndex> derivative_indices() const {
        std::vector<MultiIndex> out;
        std::vector<std::uint32_t> hi(nvars_, 0);
        for (const auto& [k, c] : terms_)
            for (std::size_t j = 0; j < nvars_; ++j) hi[j] = std::max(hi[j], k.e[j]);
        MultiIndex cur = MultiIndex::zero(nvars_);
        while (true) {
            std::size_t j = 0;
            while (j < nvars_) {
                if (cur.e[j] < hi[j]) {
                    ++cur.e[j];
                    break;
                }
                cur.e[j] = 0;
                ++j;
            }
            if (j == nvars_) break;
            for (const auto& [k, c] : terms_)
                if (cur.divides(k)) {
                    out.push_back(cur);
                    break;
                }
        }
        return out;
    }

private:
    void check_vars(const MultiPoly& o) const {
        if (o.nvars_ != nvars_) throw UsageError("polynomials in different variable counts");
    }
    std::size_t nvars_;
    R zero_;
    std::map<MultiIndex, R> terms_;
};

// Monomial eps^i = prod eps_j^{i_j}.
template <RingElement R>
R monomial_value(const Vec<R>& eps, const MultiIndex& i, const R& one) {
    R acc = one;
    for (std::size_t j = 0; j < i.size(); ++j)
        for (std::uint32_t t = 0; t < i.e[j]; ++t) acc = acc * eps[j];
    return acc;
}

}  // namespace hk
