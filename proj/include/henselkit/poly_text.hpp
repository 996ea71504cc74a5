#pragma once

#include "henselkit/errors.hpp"
#include "henselkit/multipoly.hpp"

#include <cctype>
#include <functional>
#include <string>
#include <vector>

namespace hk {

namespace detail {

struct PolyToken {
    enum class Kind { Coef, Var, Group } kind;
    std::string text;      // coefficient literal or group contents
    std::size_t var = 0;   // variable index
    std::uint32_t exp = 1;
};

std::vector<std::pair<bool, std::vector<PolyToken>>> lex_poly_terms(const std::string& text);

}  // namespace detail

// Grammar: term (('+'|'-') term)*, term = factor ('*' factor)*, factor is a
// coefficient literal, a parenthesized ground literal, or X<i>[^k].
// nvars = 0 infers the count from the largest variable index.
template <RingElement R>
MultiPoly<R> parse_poly(const std::string& text, std::size_t nvars, const R& zero,
                        const std::function<R(const std::string&)>& parse_coeff) {
    auto terms = detail::lex_poly_terms(text);
    std::size_t need = 0;
    for (const auto& [neg, factors] : terms)
        for (const auto& f : factors)
            if (f.kind == detail::PolyToken::Kind::Var) need = std::max(need, f.var + 1);
    if (nvars == 0) nvars = std::max<std::size_t>(need, 1);
    if (need > nvars) throw ParseError("polynomial '" + text + "' uses more than " + std::to_string(nvars) + " variables");
    MultiPoly<R> out(nvars, zero);
    for (const auto& [neg, factors] : terms) {
        R c = zero.one_like();
        MultiIndex k = MultiIndex::zero(nvars);
        for (const auto& f : factors) {
            if (f.kind == detail::PolyToken::Kind::Var)
                k.e[f.var] += f.exp;
            else
                c = c * parse_coeff(f.text);
        }
        out.add_term(k, neg ? -c : c);
    }
    return out;
}

// Canonical text `c*X0^a*X1^b + ...`; coefficients that are not bare literals are parenthesized.
template <RingElement R>
std::string format_poly(const MultiPoly<R>& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : f.terms()) {
        if (!first) out += " + ";
        first = false;
        std::string cs = c.to_string();
        bool bare = !cs.empty();
        for (std::size_t i = 0; i < cs.size(); ++i) {
            char ch = cs[i];
            if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || (ch == '-' && i == 0))) bare = false;
        }
        if (!cs.empty() && cs.front() == '[' && cs.back() == ']' && cs.find('[', 1) == std::string::npos) bare = true;
        out += bare ? cs : "(" + cs + ")";
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (!k.e[j]) continue;
            out += "*X" + std::to_string(j);
            if (k.e[j] != 1) out += "^" + std::to_string(k.e[j]);
        }
    }
    return out;
}

// Splits `f1; f2; ...` at top-level semicolons.
std::vector<std::string> split_top_level(const std::string& text, char sep = ';');

}  // namespace hk
