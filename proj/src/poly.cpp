#include "henselkit/poly_text.hpp"

#include <cctype>

namespace hk {

std::int64_t multi_binomial(const MultiIndex& k, const MultiIndex& i) {
    unsigned __int128 acc = 1;
    for (std::size_t j = 0; j < k.size(); ++j) {
        std::uint64_t n = k.e[j], r = i.e[j];
        if (r > n) return 0;
        if (r > n - r) r = n - r;
        unsigned __int128 b = 1;
        for (std::uint64_t t = 1; t <= r; ++t) {
            b = b * (n - r + t) / t;
            if (b >> 62) throw UsageError("binomial coefficient exceeds 64 bits");
        }
        acc *= b;
        if (acc >> 62) throw UsageError("binomial coefficient exceeds 64 bits");
    }
    return static_cast<std::int64_t>(acc);
}

namespace detail {

namespace {

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at_end() {
        skip();
        return i_ >= s_.size();
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("polynomial '" + s_ + "': " + why + " at offset " + std::to_string(i_));
    }

    std::uint32_t number() {
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected a number");
        try {
            return static_cast<std::uint32_t>(std::stoul(s_.substr(start, i_ - start)));
        } catch (const std::logic_error&) {
            fail("number out of range");
        }
    }

    std::string balanced(char open, char close) {
        std::size_t start = ++i_;
        int depth = 1;
        while (i_ < s_.size() && depth) {
            if (s_[i_] == open) ++depth;
            if (s_[i_] == close) --depth;
            ++i_;
        }
        if (depth) fail(std::string("unbalanced '") + open + "'");
        return s_.substr(start, i_ - start - 1);
    }

    PolyToken factor() {
        char c = peek();
        if (c == 'X') {
            ++i_;
            PolyToken t{PolyToken::Kind::Var, "", 0, 1};
            if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) t.var = number();
            if (peek() == '^') {
                ++i_;
                skip();
                t.exp = number();
            }
            return t;
        }
        if (c == '(') return {PolyToken::Kind::Group, balanced('(', ')'), 0, 1};
        if (c == '[') {
            std::size_t start = i_;
            balanced('[', ']');
            return {PolyToken::Kind::Coef, s_.substr(start, i_ - start), 0, 1};
        }
        if (c == 't') {
            std::size_t start = i_++;
            if (peek() == '^') {
                ++i_;
                skip();
                if (i_ < s_.size() && s_[i_] == '(')
                    balanced('(', ')');
                else {
                    if (i_ < s_.size() && s_[i_] == '-') ++i_;
                    number();
                }
            }
            return {PolyToken::Kind::Coef, s_.substr(start, i_ - start), 0, 1};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            number();
            if (i_ < s_.size() && s_[i_] == '/') {
                ++i_;
                number();
            }
            return {PolyToken::Kind::Coef, s_.substr(start, i_ - start), 0, 1};
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::vector<std::pair<bool, std::vector<PolyToken>>> run() {
        std::vector<std::pair<bool, std::vector<PolyToken>>> terms;
        if (at_end()) fail("empty polynomial");
        bool first = true;
        while (!at_end()) {
            bool neg = false;
            if (!first && peek() != '+' && peek() != '-') fail("expected '+' or '-'");
            first = false;
            while (peek() == '+' || peek() == '-') {
                if (s_[i_] == '-') neg = !neg;
                ++i_;
            }
            std::vector<PolyToken> fs;
            fs.push_back(factor());
            while (peek() == '*') {
                ++i_;
                fs.push_back(factor());
            }
            terms.emplace_back(neg, std::move(fs));
        }
        return terms;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace

std::vector<std::pair<bool, std::vector<PolyToken>>> lex_poly_terms(const std::string& text) {
    return Lexer(text).run();
}

}  // namespace detail

std::vector<std::string> split_top_level(const std::string& text, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace hk
