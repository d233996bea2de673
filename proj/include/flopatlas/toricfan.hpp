#ifndef FLOPATLAS_TORICFAN_HPP
#define FLOPATLAS_TORICFAN_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cones.hpp"
#include "exactq.hpp"

namespace flopatlas {

using IntMatrix = std::vector<std::vector<Integer>>;

struct SmithForm {
    IntMatrix d, u, v; // u * a * v = d, u and v unimodular
};

/// Smith normal form by alternating row and column Euclid steps.
inline SmithForm smith_normal_form(IntMatrix a)
{
    const std::size_t m = a.size(), n = m ? a[0].size() : 0;
    auto eye = [](std::size_t k) {
        IntMatrix e(k, std::vector<Integer>(k, 0));
        for (std::size_t i = 0; i < k; ++i) e[i][i] = 1;
        return e;
    };
    IntMatrix u = eye(m), v = eye(n);
    auto row_op = [&](std::size_t dst, std::size_t src, const Integer& q) { // row dst -= q row src
        for (std::size_t j = 0; j < n; ++j) a[dst][j] -= q * a[src][j];
        for (std::size_t j = 0; j < m; ++j) u[dst][j] -= q * u[src][j];
    };
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t i = 0; i < m; ++i) a[i][dst] -= q * a[i][src];
        for (std::size_t i = 0; i < n; ++i) v[i][dst] -= q * v[i][src];
    };
    auto swap_rows = [&](std::size_t x, std::size_t y) {
        std::swap(a[x], a[y]);
        std::swap(u[x], u[y]);
    };
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        for (auto& r : a) std::swap(r[x], r[y]);
        for (auto& r : v) std::swap(r[x], r[y]);
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block to the pivot.
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (sgn(a[i][j]) != 0 && (!best || abs(a[i][j]) < abs(a[best->first][best->second])))
                        best = {i, j};
            if (!best) break;
            swap_rows(t, best->first);
            swap_cols(t, best->second);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                Integer q = a[i][t] / a[t][t];
                if (sgn(q) != 0) row_op(i, t, q);
                if (sgn(a[i][t]) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                Integer q = a[t][j] / a[t][t];
                if (sgn(q) != 0) col_op(j, t, q);
                if (sgn(a[t][j]) != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (sgn(Integer(a[i][j] % a[t][t])) != 0) {
                        row_op(t, i, -1); // row t += row i, then re-reduce
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (t < m && t < n && sgn(a[t][t]) < 0) {
            for (auto& x : a[t]) x = -x;
            for (auto& x : u[t]) x = -x;
        }
    }
    return {a, u, v};
}

/**
 * Lattice spanned by rational generators in Q^d, kept as a basis (rows).
 */
class Lattice {
public:
    Lattice(std::size_t ambient, const std::vector<QVector>& generators) : d_(ambient)
    {
        if (generators.empty()) throw std::invalid_argument("Lattice needs generators");
        Integer den = 1;
        for (const auto& g : generators) {
            if (g.size() != d_) throw DimensionMismatch("lattice generator length");
            for (const auto& x : g) den = lcm(den, Integer(x.get_den()));
        }
        IntMatrix a;
        for (const auto& g : generators) {
            std::vector<Integer> row;
            for (const auto& x : g) row.push_back(Integer(x * den));
            a.push_back(row);
        }
        // Row lattice basis from the Smith form: rows of d * v^{-1}.
        auto s = smith_normal_form(a);
        QMatrix vinv(d_, d_);
        {
            QMatrix v(d_, d_);
            for (std::size_t i = 0; i < d_; ++i)
                for (std::size_t j = 0; j < d_; ++j) v(i, j) = s.v[i][j];
            vinv = inverse(v);
        }
        for (std::size_t k = 0; k < std::min(a.size(), d_); ++k) {
            if (sgn(s.d[k][k]) == 0) continue;
            QVector b = Rational(s.d[k][k]) * vinv.row(k);
            basis_.push_back((1 / Rational(den)) * b);
        }
        if (QMatrix::from_rows(basis_, d_).rank() != basis_.size()) throw SingularMatrix("lattice basis");
    }

    static Lattice standard(std::size_t d)
    {
        std::vector<QVector> e;
        for (std::size_t i = 0; i < d; ++i) e.push_back(QVector::unit(d, i));
        return Lattice(d, e);
    }

    std::size_t rank() const { return basis_.size(); }
    std::size_t ambient_dim() const { return d_; }
    const std::vector<QVector>& basis() const { return basis_; }

    /// Coordinates in the basis, or nullopt outside the rational span.
    std::optional<QVector> coordinates(const QVector& v) const
    {
        if (v.size() != d_) throw DimensionMismatch("lattice coordinates");
        const std::size_t r = rank();
        QMatrix aug(d_, r + 1);
        for (std::size_t i = 0; i < d_; ++i) {
            for (std::size_t k = 0; k < r; ++k) aug(i, k) = basis_[k][i];
            aug(i, r) = v[i];
        }
        std::vector<std::size_t> piv;
        QMatrix red = aug.rref(&piv);
        if (!piv.empty() && piv.back() == r) return std::nullopt;
        QVector x(r);
        for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = red(k, r);
        return x;
    }

    bool contains(const QVector& v) const
    {
        auto c = coordinates(v);
        return c && c->is_integral();
    }

    bool is_primitive(const QVector& v) const
    {
        auto c = coordinates(v);
        if (!c || !c->is_integral() || c->is_zero()) return false;
        QVector p = c->primitive();
        return p == *c || -p == *c;
    }

    /// |det| of the given lattice vectors in lattice coordinates (index of the sublattice they span).
    Rational index_of(const std::vector<QVector>& vs) const
    {
        if (vs.size() != rank()) throw NotSimplicial("need exactly rank-many vectors");
        QMatrix m(rank(), rank());
        for (std::size_t i = 0; i < vs.size(); ++i) {
            auto c = coordinates(vs[i]);
            if (!c) throw DimensionMismatch("vector outside the lattice span");
            for (std::size_t j = 0; j < rank(); ++j) m(i, j) = (*c)[j];
        }
        return abs(m.determinant());
    }

private:
    std::size_t d_;
    std::vector<QVector> basis_;
};

/// True iff the rays are a basis of the lattice.
inline bool is_unimodular(const std::vector<QVector>& rays, const Lattice& lattice)
{
    if (rays.size() != lattice.rank())
        throw NotSimplicial(std::to_string(rays.size()) + " rays in a rank " + std::to_string(lattice.rank()) +
                            " lattice");
    for (const auto& r : rays)
        if (!lattice.contains(r)) return false;
    return lattice.index_of(rays) == 1;
}

struct Fan {
    Lattice lattice;
    std::vector<QVector> rays;
    std::vector<std::vector<std::size_t>> maximal_cones;

    std::vector<QVector> cone_rays(std::size_t k) const
    {
        std::vector<QVector> out;
        for (auto i : maximal_cones.at(k)) out.push_back(rays.at(i));
        return out;
    }
    Cone cone(std::size_t k) const { return Cone::from_rays(lattice.ambient_dim(), cone_rays(k)); }
};

inline bool fully_unimodular(const Fan& f)
{
    for (std::size_t k = 0; k < f.maximal_cones.size(); ++k) {
        auto rs = f.cone_rays(k);
        if (rs.size() != f.lattice.rank() || !is_unimodular(rs, f.lattice)) return false;
    }
    return true;
}

namespace detail {

inline bool cones_meet_in_common_face(const Fan& f, std::size_t a, std::size_t b)
{
    std::vector<std::size_t> sa = f.maximal_cones[a], sb = f.maximal_cones[b], common;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    std::vector<QVector> cr;
    for (auto i : common) cr.push_back(f.rays[i]);
    return intersect(f.cone(a), f.cone(b)) == Cone::from_rays(f.lattice.ambient_dim(), cr);
}

} // namespace detail

/**
 * Simplicial maximal cones, every ray primitive and used, cones meeting
 * along common faces, and every ray inside `support`.
 */
inline bool validate_fan(const Fan& f, const Cone& support)
{
    const std::size_t d = f.lattice.ambient_dim();
    std::vector<bool> used(f.rays.size(), false);
    for (const auto& r : f.rays)
        if (!f.lattice.is_primitive(r) || !support.contains(r)) return false;
    for (std::size_t k = 0; k < f.maximal_cones.size(); ++k) {
        for (auto i : f.maximal_cones[k]) {
            if (i >= f.rays.size()) return false;
            used[i] = true;
        }
        if (QMatrix::from_rows(f.cone_rays(k), d).rank() != f.maximal_cones[k].size()) return false;
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) return false;
    for (std::size_t a = 0; a < f.maximal_cones.size(); ++a)
        for (std::size_t b = a + 1; b < f.maximal_cones.size(); ++b)
            if (!detail::cones_meet_in_common_face(f, a, b)) return false;
    return true;
}

inline bool validate_fan(const Fan& f)
{
    return validate_fan(f, Cone::from_rays(f.lattice.ambient_dim(), f.rays));
}

// ---------------------------------------------------------------------------
// Mukai flop: Z^{2r} / (sum e_i - sum f_j), rank 2r - 1

struct MukaiFans {
    Fan plus, minus;
};

inline MukaiFans mukai_flop_fans(int r)
{
    if (r < 2) throw std::invalid_argument("mukai_flop_fans: r must be at least 2");
    const std::size_t n = 2 * static_cast<std::size_t>(r);
    IntMatrix w(n, std::vector<Integer>(1));
    for (std::size_t i = 0; i < n; ++i) w[i][0] = i < static_cast<std::size_t>(r) ? 1 : -1;
    // u * w = (1, 0, ..., 0)^T, so the last 2r-1 rows of u give the quotient map.
    auto s = smith_normal_form(w);
    if (s.d[0][0] != 1) throw SingularMatrix("relation vector is not primitive");
    std::vector<QVector> rays;
    for (std::size_t k = 0; k < n; ++k) {
        QVector ray(n - 1);
        for (std::size_t i = 1; i < n; ++i) ray[i - 1] = Rational(s.u[i][k]);
        rays.push_back(ray);
    }
    Lattice lat = Lattice::standard(n - 1);
    MukaiFans out{{lat, rays, {}}, {lat, rays, {}}};
    for (int k = 0; k < r; ++k) {
        std::vector<std::size_t> p, m;
        for (int i = 0; i < r; ++i) {
            if (i != k) {
                p.push_back(i);
                m.push_back(r + i);
            }
        }
        for (int j = 0; j < r; ++j) {
            p.push_back(r + j);
            m.push_back(j);
        }
        std::sort(m.begin(), m.end());
        out.plus.maximal_cones.push_back(p);
        out.minus.maximal_cones.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// C^4/Z_3 resolution: coordinates (e1, e2, f1, f2), N = Z^4 + Z v1

struct C4Z3Data {
    Lattice n0, n;
    std::vector<QVector> rays; // e1, e2, f1, f2, v1, v2
    std::vector<std::vector<std::size_t>> candidates;
    std::vector<std::vector<std::vector<std::size_t>>> triangulations;
};

inline QVector c4z3_v1() { return QVector(std::vector<Rational>{rat(1, 3), rat(1, 3), rat(2, 3), rat(2, 3)}); }
inline QVector c4z3_v2() { return QVector(std::vector<Rational>{rat(2, 3), rat(2, 3), rat(1, 3), rat(1, 3)}); }

/// Simplex volume with every ray scaled onto the slice {sum of coordinates = 1}.
inline Rational slice_volume(const std::vector<QVector>& rays)
{
    std::vector<QVector> scaled;
    for (const auto& r : rays) {
        Rational h = 0;
        for (const auto& x : r) h += x;
        if (sgn(h) <= 0) throw std::invalid_argument("slice_volume: ray off the positive side");
        scaled.push_back(r * (1 / h));
    }
    return abs(QMatrix::from_rows(scaled).determinant());
}

/// Slice simplex measured in lattice units: det_N(rays) / prod of ray heights.
/// Additive over subdivisions, unlike det_N alone when heights differ.
inline Rational slice_volume(const std::vector<QVector>& rays, const Lattice& lattice)
{
    Rational heights = 1;
    for (const auto& r : rays) {
        Rational h = 0;
        for (const auto& x : r) h += x;
        if (sgn(h) <= 0) throw std::invalid_argument("slice_volume: ray off the positive side");
        heights *= h;
    }
    return lattice.index_of(rays) / heights;
}

/**
 * Every unimodular triangulation of <e1,e2,f1,f2> in N on the six rays:
 * candidate cones are unimodular 4-subsets; a triangulation is a pairwise
 * compatible set of them using all rays whose slice volumes sum to 1.
 */
inline C4Z3Data c4z3_search()
{
    std::vector<QVector> std4;
    for (std::size_t i = 0; i < 4; ++i) std4.push_back(QVector::unit(4, i));
    std::vector<QVector> gens = std4;
    gens.push_back(c4z3_v1());
    C4Z3Data out{Lattice(4, std4), Lattice(4, gens), std4, {}, {}};
    out.rays.push_back(c4z3_v1());
    out.rays.push_back(c4z3_v2());

    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = a + 1; b < 6; ++b)
            for (std::size_t c = b + 1; c < 6; ++c)
                for (std::size_t d = c + 1; d < 6; ++d) {
                    std::vector<QVector> rs{out.rays[a], out.rays[b], out.rays[c], out.rays[d]};
                    if (QMatrix::from_rows(rs).rank() == 4 && is_unimodular(rs, out.n))
                        out.candidates.push_back({a, b, c, d});
                }

    const std::size_t k = out.candidates.size();
    Fan probe{out.n, out.rays, out.candidates};
    std::vector<std::vector<bool>> ok(k, std::vector<bool>(k, true));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            ok[a][b] = ok[b][a] = detail::cones_meet_in_common_face(probe, a, b);
    std::vector<Rational> vol;
    for (std::size_t a = 0; a < k; ++a) vol.push_back(slice_volume(probe.cone_rays(a)));
    const Rational total = slice_volume(std4);

    std::vector<std::size_t> chosen;
    auto search = [&](auto&& self, std::size_t from, const Rational& v) -> void {
        if (v == total) {
            std::set<std::size_t> used;
            for (auto c : chosen) used.insert(out.candidates[c].begin(), out.candidates[c].end());
            if (used.size() == 6) {
                std::vector<std::vector<std::size_t>> t;
                for (auto c : chosen) t.push_back(out.candidates[c]);
                out.triangulations.push_back(t);
            }
            return;
        }
        for (std::size_t c = from; c < k; ++c) {
            if (v + vol[c] > total) continue;
            if (!std::all_of(chosen.begin(), chosen.end(), [&](std::size_t x) { return ok[x][c]; })) continue;
            chosen.push_back(c);
            self(self, c + 1, v + vol[c]);
            chosen.pop_back();
        }
    };
    search(search, 0, Rational(0));
    return out;
}

inline bool has_edge(const std::vector<std::vector<std::size_t>>& cones, std::size_t x, std::size_t y)
{
    return std::any_of(cones.begin(), cones.end(), [&](const auto& c) {
        return std::find(c.begin(), c.end(), x) != c.end() && std::find(c.begin(), c.end(), y) != c.end();
    });
}

/// First triangulation found that contains the edge (v1, v2).
inline Fan c4z3_fan()
{
    auto data = c4z3_search();
    for (const auto& t : data.triangulations)
        if (has_edge(t, 4, 5)) return {data.n, data.rays, t};
    throw NoUnimodularTriangulation("no unimodular triangulation with the (v1, v2) edge");
}

} // namespace flopatlas

#endif
