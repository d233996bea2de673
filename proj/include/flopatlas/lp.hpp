#ifndef FLOPATLAS_LP_HPP
#define FLOPATLAS_LP_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "exactq.hpp"

namespace flopatlas {

/// {x in Q^dim : ge[k].x >= ge_rhs[k], eq[k].x == eq_rhs[k]}
struct LinearSystem {
    std::size_t dim = 0;
    std::vector<QVector> ge;
    std::vector<Rational> ge_rhs;
    std::vector<QVector> eq;
    std::vector<Rational> eq_rhs;

    explicit LinearSystem(std::size_t d = 0) : dim(d) {}

    void add_ge(QVector a, Rational b)
    {
        if (a.size() != dim) throw DimensionMismatch("LinearSystem row");
        ge.push_back(std::move(a));
        ge_rhs.push_back(std::move(b));
    }
    void add_eq(QVector a, Rational b)
    {
        if (a.size() != dim) throw DimensionMismatch("LinearSystem row");
        eq.push_back(std::move(a));
        eq_rhs.push_back(std::move(b));
    }
    bool satisfied_by(const QVector& x) const
    {
        for (std::size_t k = 0; k < ge.size(); ++k)
            if (ge[k].dot(x) < ge_rhs[k]) return false;
        for (std::size_t k = 0; k < eq.size(); ++k)
            if (eq[k].dot(x) != eq_rhs[k]) return false;
        return true;
    }
};

namespace detail {

struct FmRow {
    QVector a;
    Rational b;
    friend bool operator<(const FmRow& x, const FmRow& y)
    {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
};

// Scale a row so its coefficient vector is primitive; keeps duplicates out of
// the elimination sets.
inline FmRow normalize_row(const QVector& a, const Rational& b)
{
    if (a.is_zero()) return {a, b};
    QVector p = a.primitive();
    std::size_t k = 0;
    while (sgn(a[k]) == 0) ++k;
    Rational s = p[k] / a[k];
    return {std::move(p), b * s};
}

inline Rational floor_q(const Rational& q)
{
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}
inline Rational ceil_q(const Rational& q)
{
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(c);
}

} // namespace detail

/**
 * Fourier-Motzkin elimination with back-substitution. Picks integer values
 * wherever the bounds allow, so witnesses tend to be small.
 */
inline std::optional<QVector> fourier_motzkin_point(const LinearSystem& sys)
{
    using detail::FmRow;
    const std::size_t d = sys.dim;
    std::set<FmRow> rows;
    auto add = [&](std::set<FmRow>& into, const QVector& a, const Rational& b) {
        into.insert(detail::normalize_row(a, b));
    };
    for (std::size_t k = 0; k < sys.ge.size(); ++k) add(rows, sys.ge[k], sys.ge_rhs[k]);
    for (std::size_t k = 0; k < sys.eq.size(); ++k) {
        add(rows, sys.eq[k], sys.eq_rhs[k]);
        add(rows, -sys.eq[k], -sys.eq_rhs[k]);
    }

    // stages[k] involves only variables 0..k-1 (stages[d] is the input).
    std::vector<std::set<FmRow>> stages(d + 1);
    stages[d] = rows;
    for (std::size_t k = d; k-- > 0;) {
        std::set<FmRow> next;
        std::vector<const FmRow*> pos, neg;
        for (const auto& r : stages[k + 1]) {
            int s = sgn(r.a[k]);
            if (s > 0) pos.push_back(&r);
            else if (s < 0) neg.push_back(&r);
            else next.insert(r);
        }
        for (auto* p : pos)
            for (auto* q : neg) {
                Rational cp = -q->a[k], cq = p->a[k];
                add(next, cp * p->a + cq * q->a, cp * p->b + cq * q->b);
            }
        for (const auto& r : next)
            if (r.a.is_zero() && sgn(r.b) > 0) return std::nullopt;
        stages[k] = std::move(next);
    }
    for (const auto& r : stages[0])
        if (sgn(r.b) > 0) return std::nullopt;

    QVector x(d);
    for (std::size_t k = 0; k < d; ++k) {
        std::optional<Rational> lo, hi;
        for (const auto& r : stages[k + 1]) {
            int s = sgn(r.a[k]);
            if (s == 0) continue;
            Rational rest = r.b;
            for (std::size_t i = 0; i < k; ++i) rest -= r.a[i] * x[i];
            Rational bound = rest / r.a[k];
            if (s > 0) {
                if (!lo || bound > *lo) lo = bound;
            } else if (!hi || bound < *hi) {
                hi = bound;
            }
        }
        if (lo && hi) {
            Rational c = detail::ceil_q(*lo);
            x[k] = c <= *hi ? c : (*lo + *hi) / 2;
        } else if (lo) {
            x[k] = detail::ceil_q(*lo);
        } else if (hi) {
            x[k] = detail::floor_q(*hi);
        }
    }
    return x;
}

/**
 * Phase-I simplex on x = u - v, u,v >= 0, with Bland's rule (smallest index
 * enters and leaves), which cannot cycle.
 */
inline std::optional<QVector> simplex_point(const LinearSystem& sys)
{
    const std::size_t d = sys.dim;
    const std::size_t m1 = sys.ge.size(), m = m1 + sys.eq.size();
    const std::size_t nstruct = 2 * d + m1; // u, v, surplus
    const std::size_t ncols = nstruct + m;  // + artificials
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(ncols + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const QVector& a = i < m1 ? sys.ge[i] : sys.eq[i - m1];
        Rational b = i < m1 ? sys.ge_rhs[i] : sys.eq_rhs[i - m1];
        for (std::size_t j = 0; j < d; ++j) {
            t[i][j] = a[j];
            t[i][d + j] = -a[j];
        }
        if (i < m1) t[i][2 * d + i] = -1;
        t[i][ncols] = b;
        if (sgn(b) < 0)
            for (auto& x : t[i]) x = -x;
        t[i][nstruct + i] = 1;
        basis[i] = nstruct + i;
    }
    // Reduced costs of sum(artificials).
    std::vector<Rational> obj(ncols + 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= ncols; ++j)
            if (j < nstruct || j == ncols) obj[j] -= t[i][j];

    for (;;) {
        std::size_t enter = ncols;
        for (std::size_t j = 0; j < ncols; ++j)
            if (sgn(obj[j]) < 0) {
                enter = j;
                break;
            }
        if (enter == ncols) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(t[i][enter]) <= 0) continue;
            Rational ratio = t[i][ncols] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break; // unbounded direction; cannot happen for phase I
        Rational piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || sgn(t[i][enter]) == 0) continue;
            Rational f = t[i][enter];
            for (std::size_t j = 0; j <= ncols; ++j) t[i][j] -= f * t[leave][j];
        }
        if (sgn(obj[enter]) != 0) {
            Rational f = obj[enter];
            for (std::size_t j = 0; j <= ncols; ++j) obj[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    if (sgn(obj[ncols]) != 0) return std::nullopt;

    QVector x(d);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < d) x[basis[i]] += t[i][ncols];
        else if (basis[i] < 2 * d) x[basis[i] - d] -= t[i][ncols];
    }
    return x;
}

/// Fourier-Motzkin up to dimension 4, simplex above.
inline std::optional<QVector> feasible_point(const LinearSystem& sys)
{
    return sys.dim <= 4 ? fourier_motzkin_point(sys) : simplex_point(sys);
}

/**
 * Point with strict[k].x > 0 and zero[k].x == 0 (homogeneous system), cleared
 * to a primitive integer vector. Strictness is encoded as strict[k].x >= 1,
 * which is equivalent for cones.
 */
inline std::optional<QVector> strict_interior_point(std::size_t dim, const std::vector<QVector>& strict,
                                                    const std::vector<QVector>& zero = {})
{
    LinearSystem sys(dim);
    for (const auto& a : strict) sys.add_ge(a, 1);
    for (const auto& a : zero) sys.add_eq(a, 0);
    auto x = feasible_point(sys);
    if (!x) return std::nullopt;
    return x->primitive();
}

} // namespace flopatlas

#endif
