#pragma once

#include "henselkit/multipoly.hpp"
#include "henselkit/valued.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hk {

template <RingElement R>
class Matrix {
public:
    Matrix(std::size_t n, const R& zero) : n_(n), a_(n * n, zero) {}

    static Matrix identity(std::size_t n, const R& like) {
        Matrix m(n, like.zero_like());
        for (std::size_t i = 0; i < n; ++i) m(i, i) = like.one_like();
        return m;
    }

    std::size_t size() const { return n_; }
    R& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const R& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Matrix operator+(const Matrix& o) const {
        Matrix r = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix r = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (o.n_ != n_) throw UsageError("matrix size mismatch");
        Matrix r(n_, a_.empty() ? o.a_.front() : a_.front().zero_like());
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                R acc = (*this)(i, 0) * o(0, j);
                for (std::size_t k = 1; k < n_; ++k) acc = acc + (*this)(i, k) * o(k, j);
                r(i, j) = acc;
            }
        return r;
    }
    Matrix scaled(const R& s) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = s * x;
        return r;
    }

    Vec<R> apply(const Vec<R>& y) const {
        if (y.size() != n_) throw UsageError("vector length does not match the matrix");
        Vec<R> out;
        out.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            R acc = (*this)(i, 0) * y[0];
            for (std::size_t k = 1; k < n_; ++k) acc = acc + (*this)(i, k) * y[k];
            out.push_back(acc);
        }
        return out;
    }

    Matrix minor(std::size_t row, std::size_t col) const {
        Matrix m(n_ - 1, a_.front().zero_like());
        for (std::size_t i = 0, mi = 0; i < n_; ++i) {
            if (i == row) continue;
            for (std::size_t j = 0, mj = 0; j < n_; ++j) {
                if (j == col) continue;
                m(mi, mj++) = (*this)(i, j);
            }
            ++mi;
        }
        return m;
    }

    R determinant() const {
        if (n_ == 0) throw UsageError("determinant of an empty matrix");
        if (n_ <= kCofactorLimit) return cofactor_det();
        auto c = charpoly();
        return (n_ % 2 == 0) ? c[n_] : -c[n_];
    }

    Matrix adjugate() const {
        if (n_ == 0) throw UsageError("adjugate of an empty matrix");
        const R& like = a_.front();
        if (n_ == 1) return identity(1, like);
        if (n_ <= kCofactorLimit) {
            Matrix adj(n_, like.zero_like());
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j) {
                    R d = minor(j, i).cofactor_det();
                    adj(i, j) = ((i + j) % 2 == 0) ? d : -d;
                }
            return adj;
        }
        // Cayley-Hamilton: adj(A) = (-1)^{n+1} (A^{n-1} + c1 A^{n-2} + ... + c_{n-1} I).
        auto c = charpoly();
        Matrix q = identity(n_, like);
        for (std::size_t k = 1; k < n_; ++k) q = (*this) * q + identity(n_, like).scaled(c[k]);
        return (n_ % 2 == 1) ? q : q.scaled(-like.one_like());
    }

    bool operator==(const Matrix& o) const {
        if (n_ != o.n_) return false;
        for (std::size_t k = 0; k < a_.size(); ++k)
            if (!(a_[k] - o.a_[k]).is_zero()) return false;
        return true;
    }

    static constexpr std::size_t kCofactorLimit = 6;

    // Coefficients [1, c1, ..., cn] of det(xI - A), division-free (Berkowitz).
    std::vector<R> charpoly() const {
        const R& like = a_.front();
        std::vector<R> p{like.one_like(), -(*this)(0, 0)};
        for (std::size_t k = 1; k < n_; ++k) {
            // Leading block A_k, column C, row Rw, corner a.
            std::vector<R> t;
            t.push_back(like.one_like());
            t.push_back(-(*this)(k, k));
            Vec<R> v;
            for (std::size_t i = 0; i < k; ++i) v.push_back((*this)(i, k));
            for (std::size_t j = 2; j <= k + 1; ++j) {
                R acc = (*this)(k, 0) * v[0];
                for (std::size_t i = 1; i < k; ++i) acc = acc + (*this)(k, i) * v[i];
                t.push_back(-acc);
                Vec<R> w;
                for (std::size_t i = 0; i < k; ++i) {
                    R s = (*this)(i, 0) * v[0];
                    for (std::size_t l = 1; l < k; ++l) s = s + (*this)(i, l) * v[l];
                    w.push_back(s);
                }
                v = std::move(w);
            }
            std::vector<R> np;
            for (std::size_t i = 0; i <= k + 1; ++i) {
                R acc = like.zero_like();
                bool first = true;
                for (std::size_t j = 0; j <= std::min(i, k); ++j) {
                    R term = t[i - j] * p[j];
                    acc = first ? term : acc + term;
                    first = false;
                }
                np.push_back(acc);
            }
            p = std::move(np);
        }
        return p;
    }

private:
    R cofactor_det() const {
        if (n_ == 1) return a_[0];
        if (n_ == 2) return a_[0] * a_[3] - a_[1] * a_[2];
        R acc = a_[0] * minor(0, 0).cofactor_det();
        for (std::size_t j = 1; j < n_; ++j) {
            R term = (*this)(0, j) * minor(0, j).cofactor_det();
            acc = (j % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }

    std::size_t n_;
    std::vector<R> a_;
};

template <RingElement R>
Matrix<R> jacobian(const std::vector<MultiPoly<R>>& f, const Vec<R>& b) {
    std::size_t n = f.size();
    if (n == 0 || b.size() != n) throw UsageError("jacobian needs a square system");
    Matrix<R> j(n, b.front().zero_like());
    for (std::size_t k = 0; k < n; ++k) {
        if (f[k].nvars() != n) throw UsageError("jacobian needs a square system");
        for (std::size_t i = 0; i < n; ++i) j(k, i) = f[k].partial(i).evaluate(b);
    }
    return j;
}

template <RingElement R>
Vec<R> evaluate_system(const std::vector<MultiPoly<R>>& f, const Vec<R>& b) {
    Vec<R> out;
    out.reserve(f.size());
    for (const auto& fk : f) out.push_back(fk.evaluate(b));
    return out;
}

template <ValuedElement R>
Value matrix_value(const Matrix<R>& m) {
    Value best = Value::infinity();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            Value v = m(i, j).valuation();
            if (v < best) best = v;
        }
    return best;
}

}  // namespace hk
