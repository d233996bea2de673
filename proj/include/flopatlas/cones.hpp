#ifndef FLOPATLAS_CONES_HPP
#define FLOPATLAS_CONES_HPP

#include <algorithm>
#include <vector>

#include "exactq.hpp"

namespace flopatlas {

constexpr std::size_t kMaxConeDim = 12;

/// <curve, divisor> = curve^T * matrix * divisor.
struct Pairing {
    QMatrix matrix;

    Rational operator()(const QVector& curve, const QVector& divisor) const
    {
        return curve.dot(matrix * divisor);
    }
    Pairing transposed() const { return {matrix.transpose()}; }
    static Pairing identity(std::size_t n) { return {QMatrix::identity(n)}; }
};

namespace detail {

struct DoubleDescription {
    std::vector<QVector> rays;
    std::vector<QVector> lineality;
};

/**
 * Generators of {x : a.x >= 0 for every row a} by the double description
 * method. Starts from the whole space (lineality = standard basis) and cuts
 * with one inequality at a time. Adjacency of a ray pair is certified by the
 * rank of the inequalities tight on both.
 */
inline DoubleDescription double_description(std::size_t d, const std::vector<QVector>& rows)
{
    DoubleDescription dd;
    for (std::size_t i = 0; i < d; ++i) dd.lineality.push_back(QVector::unit(d, i));
    std::vector<QVector> seen;

    for (const auto& a : rows) {
        if (a.size() != d) throw DimensionMismatch("inequality length");
        if (a.is_zero()) continue;

        auto lit = std::find_if(dd.lineality.begin(), dd.lineality.end(),
                                [&](const QVector& l) { return sgn(a.dot(l)) != 0; });
        if (lit != dd.lineality.end()) {
            QVector pivot = *lit;
            dd.lineality.erase(lit);
            Rational ap = a.dot(pivot);
            if (sgn(ap) < 0) {
                pivot = -pivot;
                ap = -ap;
            }
            for (auto& l : dd.lineality) l -= (a.dot(l) / ap) * pivot;
            for (auto& r : dd.rays) r = (r - (a.dot(r) / ap) * pivot).primitive();
            dd.rays.push_back(pivot.primitive());
            seen.push_back(a);
            continue;
        }

        std::vector<QVector> pos, zero, neg;
        for (const auto& r : dd.rays) {
            int s = sgn(a.dot(r));
            (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
        }
        std::vector<QVector> next = pos;
        next.insert(next.end(), zero.begin(), zero.end());
        const std::size_t target = d - dd.lineality.size() - 2;
        for (const auto& p : pos)
            for (const auto& q : neg) {
                std::vector<QVector> tight;
                for (const auto& s : seen)
                    if (sgn(s.dot(p)) == 0 && sgn(s.dot(q)) == 0) tight.push_back(s);
                if (tight.size() < target) continue;
                if (QMatrix::from_rows(tight, d).rank() != target) continue;
                next.push_back((a.dot(p) * q - a.dot(q) * p).primitive());
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        dd.rays = std::move(next);
        seen.push_back(a);
    }
    return dd;
}

// Canonical basis of a subspace: primitive rows of the RREF.
inline std::vector<QVector> canonical_span(std::size_t d, const std::vector<QVector>& vs)
{
    if (vs.empty()) return {};
    std::vector<std::size_t> piv;
    QMatrix r = QMatrix::from_rows(vs, d).rref(&piv);
    std::vector<QVector> out;
    for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(r.row(i).primitive());
    return out;
}

// Orthogonal projection onto span(basis)^perp, then primitive; this picks a
// canonical representative of a ray modulo the subspace.
inline QVector reduce_modulo(const QVector& v, const std::vector<QVector>& basis)
{
    if (basis.empty()) return v.primitive();
    const std::size_t k = basis.size();
    QMatrix gram(k, k);
    QVector rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        rhs[i] = basis[i].dot(v);
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = basis[i].dot(basis[j]);
    }
    QVector c = solve_linear(gram, rhs);
    QVector r = v;
    for (std::size_t i = 0; i < k; ++i) r -= c[i] * basis[i];
    return r.primitive();
}

inline std::vector<QVector> canonical_rays(const std::vector<QVector>& rays, const std::vector<QVector>& span)
{
    std::vector<QVector> out;
    for (const auto& r : rays) {
        QVector c = reduce_modulo(r, span);
        if (!c.is_zero()) out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/**
 * Rational polyhedral cone, held in both representations:
 *   V: extreme rays (modulo lineality) + lineality basis
 *   H: facet normals (modulo equations) + equations, {x : f.x >= 0, e.x = 0}
 * Both are canonical (primitive, sorted), so == is structural.
 */
class Cone {
public:
    static Cone from_rays(std::size_t d, const std::vector<QVector>& generators)
    {
        check_dim(d);
        auto polar = detail::double_description(d, generators);
        return from_h(d, polar.rays, polar.lineality);
    }

    /// {x : a.x >= 0 for every a in normals}
    static Cone from_inequalities(std::size_t d, const std::vector<QVector>& normals)
    {
        check_dim(d);
        return from_v(d, detail::double_description(d, normals));
    }

    static Cone whole_space(std::size_t d) { return from_inequalities(d, {}); }

    std::size_t ambient_dim() const { return d_; }
    const std::vector<QVector>& rays() const { return rays_; }
    const std::vector<QVector>& lineality() const { return lineality_; }
    const std::vector<QVector>& facets() const { return facets_; }
    const std::vector<QVector>& equations() const { return equations_; }
    std::size_t dimension() const { return d_ - equations_.size(); }
    bool is_full_dimensional() const { return equations_.empty(); }

    /// Rays plus both signs of every lineality vector; their cone is *this.
    std::vector<QVector> generators() const
    {
        std::vector<QVector> g = rays_;
        for (const auto& l : lineality_) {
            g.push_back(l);
            g.push_back(-l);
        }
        return g;
    }
    /// Facets plus both signs of every equation.
    std::vector<QVector> inequalities() const
    {
        std::vector<QVector> h = facets_;
        for (const auto& e : equations_) {
            h.push_back(e);
            h.push_back(-e);
        }
        return h;
    }

    bool contains(const QVector& v) const
    {
        if (v.size() != d_) throw DimensionMismatch("contains");
        for (const auto& f : facets_)
            if (sgn(f.dot(v)) < 0) return false;
        for (const auto& e : equations_)
            if (sgn(e.dot(v)) != 0) return false;
        return true;
    }

    friend bool operator==(const Cone& a, const Cone& b)
    {
        return a.d_ == b.d_ && a.rays_ == b.rays_ && a.lineality_ == b.lineality_;
    }

private:
    Cone() = default;

    static void check_dim(std::size_t d)
    {
        if (d == 0 || d > kMaxConeDim) throw ScaleLimit("cone ambient dimension " + std::to_string(d));
    }

    static Cone from_v(std::size_t d, const detail::DoubleDescription& v)
    {
        Cone c;
        c.d_ = d;
        c.lineality_ = detail::canonical_span(d, v.lineality);
        c.rays_ = detail::canonical_rays(v.rays, c.lineality_);
        auto polar = detail::double_description(d, c.generators());
        c.equations_ = detail::canonical_span(d, polar.lineality);
        c.facets_ = detail::canonical_rays(polar.rays, c.equations_);
        return c;
    }

    static Cone from_h(std::size_t d, const std::vector<QVector>& facets, const std::vector<QVector>& eqs)
    {
        std::vector<QVector> h = facets;
        for (const auto& e : eqs) {
            h.push_back(e);
            h.push_back(-e);
        }
        return from_v(d, detail::double_description(d, h));
    }

    std::size_t d_ = 0;
    std::vector<QVector> rays_, lineality_, facets_, equations_;
};

inline bool is_strictly_convex(const Cone& c) { return c.lineality().empty(); }

inline bool is_simplicial(const Cone& c)
{
    return is_strictly_convex(c) && c.rays().size() == c.dimension();
}

inline bool contains(const Cone& c, const QVector& v) { return c.contains(v); }

inline Cone intersect(const Cone& a, const Cone& b)
{
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("intersect");
    std::vector<QVector> h = a.inequalities();
    for (auto& x : b.inequalities()) h.push_back(std::move(x));
    return Cone::from_inequalities(a.ambient_dim(), h);
}

/// Ray sum; the zero vector for a linear subspace. EmptyCone on {0}.
inline QVector relative_interior_point(const Cone& c)
{
    if (c.rays().empty() && c.lineality().empty()) throw EmptyCone("relative_interior_point of {0}");
    QVector s(c.ambient_dim());
    for (const auto& r : c.rays()) s += r;
    return s;
}

/**
 * {D : <r, D> >= 0 for every generator r of c}. The cone lives on the curve
 * side of the pairing, the result on the divisor side; use p.transposed() to
 * dualise back.
 */
inline Cone dual(const Cone& c, const Pairing& p)
{
    if (c.ambient_dim() != p.matrix.rows()) throw DimensionMismatch("dual: pairing rows");
    QMatrix mt = p.matrix.transpose();
    std::vector<QVector> normals;
    for (const auto& g : c.generators()) normals.push_back(mt * g);
    return Cone::from_inequalities(p.matrix.cols(), normals);
}

} // namespace flopatlas

#endif
