#ifndef FLOPATLAS_EXACTQ_HPP
#define FLOPATLAS_EXACTQ_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace flopatlas {

using Integer = mpz_class;
using Rational = mpq_class; // GMP keeps it canonical: lowest terms, den > 0

inline Rational rat(long num, long den = 1)
{
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// "p/q" in lowest terms, or "p" when q = 1.
inline std::string to_string(const Rational& q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(const std::string& s)
{
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0)
        throw std::invalid_argument("parse_rational: bad literal '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator");
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// ---------------------------------------------------------------------------

class QVector {
public:
    QVector() = default;
    explicit QVector(std::size_t n) : v_(n) {}
    QVector(std::initializer_list<long> xs)
    {
        v_.reserve(xs.size());
        for (long x : xs) v_.emplace_back(x);
    }
    explicit QVector(std::vector<Rational> xs) : v_(std::move(xs)) {}

    static QVector unit(std::size_t n, std::size_t k)
    {
        QVector e(n);
        e[k] = 1;
        return e;
    }

    std::size_t size() const { return v_.size(); }
    Rational& operator[](std::size_t i) { return v_[i]; }
    const Rational& operator[](std::size_t i) const { return v_[i]; }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }
    const std::vector<Rational>& entries() const { return v_; }

    QVector& operator+=(const QVector& o)
    {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    QVector& operator-=(const QVector& o)
    {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    QVector& operator*=(const Rational& s)
    {
        for (auto& x : v_) x *= s;
        return *this;
    }
    friend QVector operator+(QVector a, const QVector& b) { return a += b; }
    friend QVector operator-(QVector a, const QVector& b) { return a -= b; }
    friend QVector operator*(const Rational& s, QVector a) { return a *= s; }
    friend QVector operator*(QVector a, const Rational& s) { return a *= s; }
    QVector operator-() const
    {
        QVector r(*this);
        for (auto& x : r.v_) x = -x;
        return r;
    }

    Rational dot(const QVector& o) const
    {
        check(o);
        Rational s = 0;
        for (std::size_t i = 0; i < v_.size(); ++i) s += v_[i] * o.v_[i];
        return s;
    }

    bool is_zero() const
    {
        return std::all_of(v_.begin(), v_.end(), [](const Rational& x) { return sgn(x) == 0; });
    }
    bool is_integral() const { return std::all_of(v_.begin(), v_.end(), is_integer); }

    /// Positive multiple with coprime integer entries; zero stays zero.
    QVector primitive() const
    {
        if (is_zero()) return *this;
        Integer l = 1;
        for (const auto& x : v_) l = lcm(l, Integer(x.get_den()));
        Integer g = 0;
        for (const auto& x : v_) g = gcd(g, Integer(x.get_num() * (l / x.get_den())));
        QVector r(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i)
            r[i] = Rational(Integer(v_[i].get_num() * (l / v_[i].get_den()) / g));
        return r;
    }

    friend bool operator==(const QVector& a, const QVector& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const QVector& a, const QVector& b)
    {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = cmp(a.v_[i], b.v_[i]);
            if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return a.size() <=> b.size();
    }

    friend std::ostream& operator<<(std::ostream& os, const QVector& v)
    {
        os << '(';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_string(v[i]);
        return os << ')';
    }

private:
    void check(const QVector& o) const
    {
        if (o.size() != v_.size()) throw DimensionMismatch("vector lengths differ");
    }

    std::vector<Rational> v_;
};

// ---------------------------------------------------------------------------

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}
    QMatrix(std::initializer_list<std::initializer_list<long>> rows)
        : r_(rows.size()), c_(rows.size() ? rows.begin()->size() : 0)
    {
        a_.reserve(r_ * c_);
        for (const auto& row : rows) {
            if (row.size() != c_) throw DimensionMismatch("ragged matrix literal");
            for (long x : row) a_.emplace_back(x);
        }
    }
    static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols = 0)
    {
        QMatrix m(rows.size(), rows.empty() ? cols : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.c_) throw DimensionMismatch("ragged rows");
            for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static QMatrix identity(std::size_t n)
    {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool is_square() const { return r_ == c_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    QVector row(std::size_t i) const
    {
        return QVector(std::vector<Rational>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_));
    }
    QVector col(std::size_t j) const
    {
        QVector v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    QMatrix transpose() const
    {
        QMatrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b)
    {
        if (a.c_ != b.r_) throw DimensionMismatch("matrix product");
        QMatrix p(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                if (sgn(a(i, k)) == 0) continue;
                for (std::size_t j = 0; j < b.c_; ++j) p(i, j) += a(i, k) * b(k, j);
            }
        return p;
    }
    friend QVector operator*(const QMatrix& a, const QVector& x)
    {
        if (a.c_ != x.size()) throw DimensionMismatch("matrix-vector product");
        QVector y(a.r_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t j = 0; j < a.c_; ++j) y[i] += a(i, j) * x[j];
        return y;
    }
    friend QMatrix operator*(const Rational& s, QMatrix m)
    {
        for (auto& x : m.a_) x *= s;
        return m;
    }
    QMatrix operator-() const { return Rational(-1) * *this; }
    friend QMatrix operator+(QMatrix a, const QMatrix& b)
    {
        if (a.r_ != b.r_ || a.c_ != b.c_) throw DimensionMismatch("matrix sum");
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }

    friend bool operator==(const QMatrix& a, const QMatrix& b)
    {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }

    bool is_symmetric() const
    {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    /// Reduced row echelon form; pivot columns are appended to `pivots` when given.
    QMatrix rref(std::vector<std::size_t>* pivots = nullptr) const
    {
        QMatrix m(*this);
        std::size_t r = 0;
        for (std::size_t c = 0; c < c_ && r < r_; ++c) {
            std::size_t p = r;
            while (p < r_ && sgn(m(p, c)) == 0) ++p;
            if (p == r_) continue;
            m.swap_rows(p, r);
            Rational inv = 1 / m(r, c);
            for (std::size_t j = c; j < c_; ++j) m(r, j) *= inv;
            for (std::size_t i = 0; i < r_; ++i) {
                if (i == r || sgn(m(i, c)) == 0) continue;
                Rational f = m(i, c);
                for (std::size_t j = c; j < c_; ++j) m(i, j) -= f * m(r, j);
            }
            if (pivots) pivots->push_back(c);
            ++r;
        }
        return m;
    }

    std::size_t rank() const
    {
        std::vector<std::size_t> piv;
        rref(&piv);
        return piv.size();
    }

    Rational determinant() const
    {
        if (!is_square()) throw DimensionMismatch("determinant of non-square matrix");
        QMatrix m(*this);
        Rational det = 1;
        for (std::size_t c = 0; c < c_; ++c) {
            std::size_t p = c;
            while (p < r_ && sgn(m(p, c)) == 0) ++p;
            if (p == r_) return 0;
            if (p != c) {
                m.swap_rows(p, c);
                det = -det;
            }
            det *= m(c, c);
            for (std::size_t i = c + 1; i < r_; ++i) {
                if (sgn(m(i, c)) == 0) continue;
                Rational f = m(i, c) / m(c, c);
                for (std::size_t j = c; j < c_; ++j) m(i, j) -= f * m(c, j);
            }
        }
        return det;
    }

    /// Basis of {x : M x = 0}, one vector per free column.
    std::vector<QVector> nullspace() const
    {
        std::vector<std::size_t> piv;
        QMatrix m = rref(&piv);
        std::vector<bool> is_piv(c_, false);
        for (auto p : piv) is_piv[p] = true;
        std::vector<QVector> basis;
        for (std::size_t f = 0; f < c_; ++f) {
            if (is_piv[f]) continue;
            QVector x(c_);
            x[f] = 1;
            for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = -m(k, f);
            basis.push_back(std::move(x));
        }
        return basis;
    }

    QMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        QMatrix s(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const QMatrix& m)
    {
        os << '[';
        for (std::size_t i = 0; i < m.rows(); ++i) os << (i ? "," : "") << m.row(i);
        return os << ']';
    }

private:
    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    std::size_t r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

inline QMatrix block_diagonal(const QMatrix& a, const QMatrix& b)
{
    QMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

// ---------------------------------------------------------------------------

/// Unique x with M x = b. Throws SingularMatrix when det(M) = 0.
inline QVector solve_linear(const QMatrix& m, const QVector& b)
{
    if (!m.is_square()) throw DimensionMismatch("solve_linear needs a square matrix");
    if (b.size() != m.rows()) throw DimensionMismatch("solve_linear: rhs length");
    const std::size_t n = m.rows();
    QMatrix aug(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n) = b[i];
    }
    std::vector<std::size_t> piv;
    QMatrix r = aug.rref(&piv);
    if (piv.size() < n || piv.back() >= n) throw SingularMatrix("solve_linear");
    return r.col(n);
}

inline QMatrix inverse(const QMatrix& m)
{
    if (!m.is_square()) throw DimensionMismatch("inverse needs a square matrix");
    const std::size_t n = m.rows();
    QMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<std::size_t> piv;
    QMatrix r = aug.rref(&piv);
    if (piv.size() < n || piv[n - 1] != n - 1) throw SingularMatrix("inverse");
    return r.submatrix(0, n, n, n);
}

inline std::vector<Rational> leading_principal_minors(const QMatrix& m)
{
    if (!m.is_square()) throw DimensionMismatch("minors of non-square matrix");
    std::vector<Rational> out;
    for (std::size_t k = 1; k <= m.rows(); ++k) out.push_back(m.submatrix(0, 0, k, k).determinant());
    return out;
}

/**
 * Minimal positive integral d with d_i M_ij = d_j M_ji, or nullopt when no
 * diagonal symmetrizer exists (including sign-inconsistent pairs).
 */
inline std::optional<std::vector<Rational>> symmetrizer(const QMatrix& m)
{
    if (!m.is_square()) return std::nullopt;
    const std::size_t n = m.rows();
    std::vector<Rational> d(n, Rational(0));
    for (std::size_t root = 0; root < n; ++root) {
        if (sgn(d[root]) != 0) continue;
        d[root] = 1;
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const bool zi = sgn(m(i, j)) == 0, zj = sgn(m(j, i)) == 0;
                if (zi != zj) return std::nullopt;
                if (zi) continue;
                Rational dj = d[i] * m(i, j) / m(j, i);
                if (sgn(dj) <= 0) return std::nullopt;
                if (sgn(d[j]) == 0) {
                    d[j] = dj;
                    stack.push_back(j);
                } else if (d[j] != dj) {
                    return std::nullopt;
                }
            }
        }
    }
    QVector p = QVector(d).primitive();
    return p.entries();
}

/**
 * Positive definiteness via leading principal minors. A non-symmetric matrix
 * is tested on D*M for its positive diagonal symmetrizer D (the Cartan case),
 * or on (M + M^T)/2 when no such D exists.
 */
inline bool is_positive_definite(const QMatrix& m)
{
    if (!m.is_square()) throw DimensionMismatch("is_positive_definite");
    QMatrix s = m;
    if (!m.is_symmetric()) {
        if (auto d = symmetrizer(m)) {
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = (*d)[i] * m(i, j);
        } else {
            s = Rational(1, 2) * (m + m.transpose());
        }
    }
    for (const auto& minor : leading_principal_minors(s))
        if (sgn(minor) <= 0) return false;
    return true;
}

} // namespace flopatlas

#endif
