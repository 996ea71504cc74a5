#include "henselkit/fftower.hpp"

#include "henselkit/errors.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace hk {

namespace {

constexpr std::uint64_t kSearchBudget = std::uint64_t(1) << 22;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Arithmetic in F_p[x]/(modulus) on packed base-p codes.
struct ModArith {
    std::uint32_t p = 0;
    std::uint32_t m = 0;
    std::vector<std::uint32_t> modulus;  // monic, size m+1
    std::uint64_t modbits = 0;           // p == 2 only, without the leading bit
    std::vector<std::uint64_t> pw;       // p^i, i <= m

    void init(std::uint32_t p_, std::uint32_t m_, std::vector<std::uint32_t> mod) {
        p = p_;
        m = m_;
        modulus = std::move(mod);
        pw.assign(m + 1, 1);
        for (std::uint32_t i = 1; i <= m; ++i) {
            unsigned __int128 v = static_cast<unsigned __int128>(pw[i - 1]) * p;
            if (v >> 63) throw ResourceCapError("field of order " + std::to_string(p) + "^" + std::to_string(m) +
                                                " exceeds the 63-bit element encoding");
            pw[i] = static_cast<std::uint64_t>(v);
        }
        if (p == 2) {
            modbits = 0;
            for (std::uint32_t i = 0; i < m; ++i)
                if (modulus[i]) modbits |= std::uint64_t(1) << i;
        }
    }

    std::uint64_t order() const { return pw[m]; }

    std::vector<std::uint32_t> unpack(std::uint64_t c) const {
        std::vector<std::uint32_t> d(m);
        for (std::uint32_t i = 0; i < m; ++i) {
            d[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        return d;
    }

    std::uint64_t pack(const std::vector<std::uint32_t>& d) const {
        std::uint64_t c = 0;
        for (std::uint32_t i = m; i-- > 0;) c = c * p + d[i];
        return c;
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (p == 2) return a ^ b;
        std::uint64_t out = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
            std::uint64_t da = a % p, db = b % p;
            a /= p;
            b /= p;
            out += ((da + db) % p) * pw[i];
        }
        return out;
    }

    std::uint64_t neg(std::uint64_t a) const {
        if (p == 2) return a;
        std::uint64_t out = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
            std::uint64_t da = a % p;
            a /= p;
            out += ((p - da) % p) * pw[i];
        }
        return out;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

    std::uint64_t scalar(std::uint64_t a, std::uint32_t k) const {
        k %= p;
        if (k == 0) return 0;
        if (k == 1) return a;
        std::uint64_t out = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
            std::uint64_t da = a % p;
            a /= p;
            out += (da * k % p) * pw[i];
        }
        return out;
    }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (a == 0 || b == 0) return 0;
        if (p == 2) {
            unsigned __int128 r = 0;
            for (std::uint32_t i = 0; i < m; ++i)
                if ((b >> i) & 1) r ^= static_cast<unsigned __int128>(a) << i;
            for (int i = 2 * static_cast<int>(m) - 2; i >= static_cast<int>(m); --i)
                if ((r >> i) & 1) {
                    r ^= static_cast<unsigned __int128>(1) << i;
                    r ^= static_cast<unsigned __int128>(modbits) << (i - m);
                }
            return static_cast<std::uint64_t>(r);
        }
        auto da = unpack(a), db = unpack(b);
        std::vector<std::uint64_t> r(2 * m - 1, 0);
        for (std::uint32_t i = 0; i < m; ++i) {
            if (!da[i]) continue;
            for (std::uint32_t j = 0; j < m; ++j) r[i + j] = (r[i + j] + std::uint64_t(da[i]) * db[j]) % p;
        }
        for (std::size_t i = r.size(); i-- > m;) {
            std::uint64_t c = r[i];
            if (!c) continue;
            r[i] = 0;
            for (std::uint32_t j = 0; j < m; ++j)
                r[i - m + j] = (r[i - m + j] + (p - c) * modulus[j]) % p;
        }
        std::uint64_t out = 0;
        for (std::uint32_t i = m; i-- > 0;) out = out * p + r[i];
        return out;
    }

    std::uint64_t pow(std::uint64_t b, std::uint64_t e) const {
        std::uint64_t r = one();
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    std::uint64_t one() const { return 1; }

    // Image of the generator x; at level 1 the generator is the root of x - g.
    std::uint64_t gen() const { return m == 1 ? static_cast<std::uint64_t>(p - modulus[0]) % p : p; }
};

}  // namespace

struct FFLevel : ModArith {
    mutable std::mutex mu;
    mutable std::map<std::uint32_t, std::vector<std::uint64_t>> embed_images;
};

namespace {

struct Registry {
    std::recursive_mutex mu;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FFLevel>> levels;
};

Registry& registry() {
    static Registry r;
    return r;
}

const FFLevel& level_for(std::uint32_t p, std::uint32_t m);

std::vector<std::uint32_t> search_modulus(std::uint32_t p, std::uint32_t n) {
    std::uint32_t g = ff_primitive_root(p);
    if (n == 1) return {(p - g) % p, 1};
    std::uint64_t candidates = 1;
    for (std::uint32_t i = 1; i < n; ++i) {
        candidates *= p;
        if (candidates > kSearchBudget)
            throw ResourceCapError("modulus search for F_" + std::to_string(p) + "^" + std::to_string(n) +
                                   " exceeds the search budget");
    }
    std::vector<const FFLevel*> sub;
    for (std::uint32_t k = 2; k < n; ++k)
        if (n % k == 0) sub.push_back(&level_for(p, k));
    std::uint32_t c0 = (n % 2 == 0) ? g : (p - g) % p;

    ModArith probe;
    std::vector<std::uint32_t> poly(n + 1, 0);
    poly[0] = c0;
    poly[n] = 1;
    probe.init(p, n, poly);
    std::uint64_t N = probe.order() - 1;
    auto qs = prime_factors(N);

    for (std::uint64_t idx = 0; idx < candidates; ++idx) {
        std::uint64_t t = idx;
        for (std::uint32_t i = 1; i < n; ++i) {
            poly[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        probe.init(p, n, poly);
        std::uint64_t x = probe.gen();
        if (probe.pow(x, N) != 1) continue;
        bool ok = true;
        for (auto q : qs)
            if (probe.pow(x, N / q) == 1) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (const FFLevel* lv : sub) {
            std::uint64_t r = probe.pow(x, N / (lv->order() - 1));
            std::uint64_t acc = 0;
            for (std::size_t i = lv->modulus.size(); i-- > 0;) acc = probe.add(probe.mul(acc, r), lv->modulus[i]);
            if (acc != 0) {
                ok = false;
                break;
            }
        }
        if (ok) return poly;
    }
    throw ResourceCapError("no compatible modulus found for F_" + std::to_string(p) + "^" + std::to_string(n));
}

const FFLevel& level_for(std::uint32_t p, std::uint32_t m) {
    if (m == 0) throw UsageError("extension degree must be positive");
    auto& reg = registry();
    std::lock_guard<std::recursive_mutex> lock(reg.mu);
    auto key = std::make_pair(p, m);
    auto it = reg.levels.find(key);
    if (it != reg.levels.end()) return *it->second;
    if (!is_prime_u32(p) || p >= 65536) throw UsageError("characteristic must be a prime below 65536");
    auto lv = std::make_unique<FFLevel>();
    lv->init(p, m, search_modulus(p, m));
    auto& ref = *lv;
    reg.levels.emplace(key, std::move(lv));
    return ref;
}

const std::vector<std::uint64_t>& embedding(const FFLevel& from, std::uint32_t to_degree) {
    std::lock_guard<std::mutex> lock(from.mu);
    auto it = from.embed_images.find(to_degree);
    if (it != from.embed_images.end()) return it->second;
    const FFLevel& to = level_for(from.p, to_degree);
    std::uint64_t beta = to.pow(to.gen(), (to.order() - 1) / (from.order() - 1));
    std::vector<std::uint64_t> imgs(from.m);
    std::uint64_t cur = 1;
    for (std::uint32_t i = 0; i < from.m; ++i) {
        imgs[i] = cur;
        cur = to.mul(cur, beta);
    }
    return from.embed_images.emplace(to_degree, std::move(imgs)).first->second;
}

std::uint32_t lcm_u32(std::uint32_t a, std::uint32_t b) { return static_cast<std::uint32_t>(std::lcm(a, b)); }

}  // namespace

bool is_prime_u32(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::uint32_t ff_primitive_root(std::uint32_t p) {
    if (p == 2) return 1;
    auto qs = prime_factors(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto q : qs)
            if (powmod_u64(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw UsageError("no primitive root");
}

std::vector<std::uint32_t> ff_modulus(std::uint32_t p, std::uint32_t m) { return level_for(p, m).modulus; }

FFElem FFElem::from_int(std::uint32_t p, std::int64_t k) {
    const FFLevel& lv = level_for(p, 1);
    std::int64_t r = k % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return FFElem(&lv, static_cast<std::uint64_t>(r));
}

FFElem FFElem::from_digits(std::uint32_t p, const std::vector<std::uint32_t>& digits) {
    if (digits.empty()) throw UsageError("finite-field element needs at least one digit");
    const FFLevel& lv = level_for(p, static_cast<std::uint32_t>(digits.size()));
    std::vector<std::uint32_t> d(digits.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = digits[i] % p;
    return FFElem(&lv, lv.pack(d));
}

FFElem FFElem::from_code(std::uint32_t p, std::uint32_t degree, std::uint64_t code) {
    const FFLevel& lv = level_for(p, degree);
    if (code >= lv.order()) throw UsageError("finite-field code out of range");
    return FFElem(&lv, code);
}

FFElem FFElem::generator(std::uint32_t p, std::uint32_t degree) {
    const FFLevel& lv = level_for(p, degree);
    return FFElem(&lv, lv.gen());
}

std::uint32_t FFElem::p() const { return level_ ? level_->p : 0; }
std::uint32_t FFElem::degree() const { return level_ ? level_->m : 0; }
std::vector<std::uint32_t> FFElem::digits() const { return level_->unpack(code_); }
bool FFElem::is_one() const { return code_ == 1; }

namespace {
void require_valid(const FFElem& a) {
    if (!a.valid()) throw UsageError("uninitialised finite-field element");
}
}  // namespace

FFElem FFElem::embed(std::uint32_t degree) const {
    require_valid(*this);
    if (degree == level_->m) return *this;
    if (degree % level_->m != 0) throw UsageError("embedding degree must be a multiple of the element degree");
    const auto& imgs = embedding(*level_, degree);
    const FFLevel& to = level_for(level_->p, degree);
    auto d = level_->unpack(code_);
    std::uint64_t out = 0;
    for (std::uint32_t i = 0; i < level_->m; ++i)
        if (d[i]) out = to.add(out, to.scalar(imgs[i], d[i]));
    return FFElem(&to, out);
}

#define HK_FF_BINARY(OP, EXPR)                                                            \
    FFElem FFElem::operator OP(const FFElem& o) const {                                   \
        require_valid(*this);                                                             \
        require_valid(o);                                                                 \
        if (level_->p != o.level_->p) throw UsageError("finite fields of different characteristic"); \
        if (level_ == o.level_) {                                                         \
            const FFLevel& L = *level_;                                                   \
            std::uint64_t a = code_, b = o.code_;                                         \
            return FFElem(level_, EXPR);                                                  \
        }                                                                                 \
        std::uint32_t d = lcm_u32(level_->m, o.level_->m);                                \
        return embed(d) OP o.embed(d);                                                    \
    }

HK_FF_BINARY(+, L.add(a, b))
HK_FF_BINARY(-, L.sub(a, b))
HK_FF_BINARY(*, L.mul(a, b))
#undef HK_FF_BINARY

FFElem FFElem::operator/(const FFElem& o) const { return *this * o.inverse(); }

FFElem FFElem::operator-() const {
    require_valid(*this);
    return FFElem(level_, level_->neg(code_));
}

FFElem FFElem::inverse() const {
    require_valid(*this);
    if (code_ == 0) throw UsageError("inverse of zero in a finite field");
    return FFElem(level_, level_->pow(code_, level_->order() - 2));
}

FFElem FFElem::pow(std::uint64_t e) const {
    require_valid(*this);
    return FFElem(level_, level_->pow(code_, e));
}

FFElem FFElem::frobenius() const { return pow(level_->p); }

FFElem FFElem::zero_like() const { return FFElem::from_int(p(), 0); }
FFElem FFElem::one_like() const { return FFElem::from_int(p(), 1); }
FFElem FFElem::int_like(std::int64_t k) const { return FFElem::from_int(p(), k); }

bool FFElem::operator==(const FFElem& o) const {
    if (!valid() || !o.valid()) return valid() == o.valid();
    if (level_->p != o.level_->p) return false;
    if (level_ == o.level_) return code_ == o.code_;
    std::uint32_t d = lcm_u32(level_->m, o.level_->m);
    return embed(d).code_ == o.embed(d).code_;
}

std::string FFElem::to_string() const {
    require_valid(*this);
    if (level_->m == 1) return std::to_string(code_);
    std::string out = "[";
    auto d = digits();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(d[i]);
    }
    return out + "]";
}

FFElem FFElem::parse(std::uint32_t p, const std::string& text) {
    std::string s = text;
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty finite-field literal");
    s = s.substr(b, e - b + 1);
    if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("unterminated finite-field literal '" + text + "'");
        std::istringstream in(s.substr(1, s.size() - 2));
        std::vector<std::uint32_t> d;
        std::string tok;
        while (in >> tok) {
            try {
                std::size_t used = 0;
                long long v = std::stoll(tok, &used);
                if (used != tok.size() || v < 0) throw ParseError("bad digit '" + tok + "'");
                d.push_back(static_cast<std::uint32_t>(v % p));
            } catch (const std::logic_error&) {
                throw ParseError("bad digit '" + tok + "'");
            }
        }
        if (d.empty()) throw ParseError("empty finite-field literal");
        return from_digits(p, d);
    }
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw ParseError("bad finite-field literal '" + text + "'");
        return from_int(p, v);
    } catch (const std::logic_error&) {
        throw ParseError("bad finite-field literal '" + text + "'");
    }
}

FFElem additive_poly_eval(const std::vector<FFElem>& b, const FFElem& x) {
    if (b.empty()) throw UsageError("additive polynomial without coefficients");
    FFElem acc = x.zero_like();
    FFElem xp = x;
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j) xp = xp.frobenius();
        acc = acc + b[j] * xp;
    }
    return acc;
}

namespace {

// Solves A u = rhs over F_p; columns of A are given. Returns false if inconsistent.
bool solve_mod_p(std::vector<std::vector<std::uint32_t>> cols, std::vector<std::uint32_t> rhs, std::uint32_t p,
                 std::vector<std::uint32_t>& sol) {
    std::size_t rows = rhs.size(), ncols = cols.size();
    std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(ncols + 1));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < ncols; ++c) a[r][c] = cols[c][r];
        a[r][ncols] = rhs[r];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < ncols && row < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = row; r < rows; ++r)
            if (a[r][c]) {
                piv = r;
                break;
            }
        if (piv == rows) continue;
        std::swap(a[piv], a[row]);
        std::uint64_t inv = powmod_u64(a[row][c], p - 2, p);
        for (auto& v : a[row]) v = v * inv % p;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || !a[r][c]) continue;
            std::uint64_t f = a[r][c];
            for (std::size_t k = 0; k <= ncols; ++k) a[r][k] = (a[r][k] + (p - f) * a[row][k]) % p;
        }
        pivot_col.push_back(c);
        ++row;
    }
    for (std::size_t r = row; r < rows; ++r)
        if (a[r][ncols]) return false;
    sol.assign(ncols, 0);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) sol[pivot_col[i]] = static_cast<std::uint32_t>(a[i][ncols]);
    return true;
}

}  // namespace

FFElem additive_poly_solve(const std::vector<FFElem>& b, const FFElem& target, std::uint32_t degree_cap) {
    if (b.empty()) throw UsageError("additive polynomial without coefficients");
    require_valid(target);
    std::uint32_t p = target.p();
    bool all_zero = true;
    std::uint32_t base = target.degree();
    for (const auto& c : b) {
        require_valid(c);
        if (c.p() != p) throw UsageError("mixed characteristics in additive polynomial");
        if (!c.is_zero()) all_zero = false;
        base = lcm_u32(base, c.degree());
    }
    if (all_zero) throw UsageError("additive polynomial with all coefficients zero");
    for (std::uint32_t k = 1;; ++k) {
        std::uint64_t level64 = std::uint64_t(base) * k;
        if (level64 > degree_cap)
            throw ResourceCapError("no root of the additive polynomial up to tower degree " +
                                   std::to_string(degree_cap) + " (target " + target.to_string() + ")");
        auto level = static_cast<std::uint32_t>(level64);
        std::vector<FFElem> bl;
        for (const auto& c : b) bl.push_back(c.embed(level));
        FFElem tl = target.embed(level);
        std::vector<std::vector<std::uint32_t>> cols;
        for (std::uint32_t i = 0; i < level; ++i) {
            std::vector<std::uint32_t> d(level, 0);
            d[i] = 1;
            cols.push_back(additive_poly_eval(bl, FFElem::from_digits(p, d)).digits());
        }
        std::vector<std::uint32_t> sol;
        if (!solve_mod_p(cols, tl.digits(), p, sol)) continue;
        FFElem x = FFElem::from_digits(p, sol);
        if (additive_poly_eval(bl, x) != tl) throw UsageError("internal: additive solve failed substitution");
        return x;
    }
}

}  // namespace hk
