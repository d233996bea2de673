#ifndef FLOPATLAS_ROOTSYS_HPP
#define FLOPATLAS_ROOTSYS_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "exactq.hpp"

namespace flopatlas {

enum class Family { A, B, C, D, E, F, G };

inline char family_letter(Family f) { return "ABCDEFG"[static_cast<int>(f)]; }

inline Family parse_family(const std::string& s)
{
    if (s.size() == 1) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        if (c >= 'A' && c <= 'G') return static_cast<Family>(c - 'A');
    }
    throw InvalidType("unknown family '" + s + "'");
}

/*
 * Node numbering (0-based):
 *   A_n  chain 0-1-...-(n-1)
 *   B_n  transpose of C_n: node 0 is the short end, C(0,1) = -2
 *   C_n  node 0 is the long end, C(1,0) = -2; this is D_{n+1} folded by the leg swap
 *   D_n  nodes 0 and 1 are the two short legs, both attached to node 2,
 *        then the chain 2-3-...-(n-1)
 *   E_n  Bourbaki: chain 1-3-4-5-...-n with node 2 attached to node 4
 *        (shifted down by one)
 *   F_4  [[2,-1,0,0],[-1,2,-2,0],[0,-1,2,-1],[0,0,-1,2]]
 *   G_2  [[2,-1],[-3,2]]
 */
inline QMatrix cartan_matrix(Family f, int n)
{
    auto bad = [&] {
        return InvalidType(std::string(1, family_letter(f)) + std::to_string(n));
    };
    auto chain = [](int k) {
        QMatrix m(k, k);
        for (int i = 0; i < k; ++i) {
            m(i, i) = 2;
            if (i + 1 < k) m(i, i + 1) = m(i + 1, i) = -1;
        }
        return m;
    };
    switch (f) {
    case Family::A:
        if (n < 1) throw bad();
        return chain(n);
    case Family::B:
    case Family::C: {
        if (n < 2) throw bad();
        QMatrix m = chain(n);
        if (f == Family::C) m(1, 0) = -2;
        else m(0, 1) = -2;
        return m;
    }
    case Family::D: {
        if (n < 2) throw bad();
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 2;
        if (n >= 3) m(0, 2) = m(2, 0) = m(1, 2) = m(2, 1) = -1;
        for (int i = 2; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = -1;
        return m;
    }
    case Family::E: {
        if (n < 6 || n > 8) throw bad();
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 2;
        auto link = [&](int a, int b) { m(a - 1, b - 1) = m(b - 1, a - 1) = -1; };
        link(1, 3);
        link(2, 4);
        for (int k = 3; k < n; ++k) link(k, k + 1);
        return m;
    }
    case Family::F:
        if (n != 4) throw bad();
        return QMatrix{{2, -1, 0, 0}, {-1, 2, -2, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}};
    case Family::G:
        if (n != 2) throw bad();
        return QMatrix{{2, -1}, {-3, 2}};
    }
    throw bad();
}

/// The n x n tridiagonal matrix with diagonal (1,2,...,2) and off-diagonal -1.
inline QMatrix u_matrix(int n)
{
    if (n < 1) throw std::invalid_argument("u_matrix: n must be positive");
    QMatrix m = cartan_matrix(Family::A, n);
    m(0, 0) = 1;
    return m;
}

/// Simple-root coordinates of the positive roots, ordered by height then lexicographically.
inline std::vector<QVector> positive_roots_of(const QMatrix& c)
{
    const std::size_t n = c.rows();
    std::vector<QVector> roots;
    std::set<QVector> known;
    std::vector<QVector> layer;
    for (std::size_t i = 0; i < n; ++i) {
        layer.push_back(QVector::unit(n, i));
        known.insert(layer.back());
    }
    while (!layer.empty()) {
        std::sort(layer.begin(), layer.end());
        roots.insert(roots.end(), layer.begin(), layer.end());
        std::set<QVector> next;
        for (const auto& b : layer)
            for (std::size_t i = 0; i < n; ++i) {
                // alpha_i-string through b: p - q = <b, alpha_i^vee>
                int p = 0;
                for (QVector down = b - QVector::unit(n, i); known.count(down); down -= QVector::unit(n, i))
                    ++p;
                Rational pairing = 0;
                for (std::size_t j = 0; j < n; ++j) pairing += c(i, j) * b[j];
                if (Rational(p) - pairing > 0) {
                    QVector up = b + QVector::unit(n, i);
                    if (!known.count(up)) next.insert(up);
                }
            }
        layer.assign(next.begin(), next.end());
        for (const auto& r : layer) known.insert(r);
    }
    return roots;
}

class RootSystem {
public:
    RootSystem(Family f, int rank) : family_(f), rank_(rank), cartan_(cartan_matrix(f, rank))
    {
        auto d = ::flopatlas::symmetrizer(cartan_);
        if (!d) throw InvalidType("Cartan matrix is not symmetrizable");
        symmetrizer_ = *d;
        positive_roots_ = positive_roots_of(cartan_);
    }

    Family family() const { return family_; }
    int rank() const { return rank_; }
    const QMatrix& cartan() const { return cartan_; }
    const std::vector<QVector>& positive_roots() const { return positive_roots_; }
    const std::vector<Rational>& symmetrizer() const { return symmetrizer_; }
    bool simply_laced() const { return cartan_.is_symmetric(); }
    std::string name() const { return std::string(1, family_letter(family_)) + std::to_string(rank_); }

    /// Fundamental-weight coordinates of a root given in simple-root coordinates.
    QVector root_to_weight(const QVector& root) const { return cartan_ * root; }

private:
    Family family_;
    int rank_;
    QMatrix cartan_;
    std::vector<QVector> positive_roots_;
    std::vector<Rational> symmetrizer_;
};

inline const std::vector<QVector>& positive_roots(const RootSystem& rs) { return rs.positive_roots(); }

inline std::size_t classical_root_count(Family f, int n)
{
    switch (f) {
    case Family::A: return n * (n + 1) / 2;
    case Family::B:
    case Family::C: return n * n;
    case Family::D: return n * (n - 1);
    case Family::E: return n == 6 ? 36 : n == 7 ? 63 : 120;
    case Family::F: return 24;
    case Family::G: return 6;
    }
    return 0;
}

/// Sum of the positive roots, in fundamental-weight coordinates (= 2 * sum of omega_i).
inline QVector rho(const RootSystem& rs)
{
    QVector s(rs.rank());
    for (const auto& r : rs.positive_roots()) s += rs.root_to_weight(r);
    return s;
}

// (alpha, v) for alpha in root coordinates and v in weight coordinates, using
// (omega_i, alpha_j) = delta_ij d_j.
inline Rational form_root_weight(const QVector& alpha, const QVector& v, const std::vector<Rational>& d)
{
    Rational s = 0;
    for (std::size_t j = 0; j < alpha.size(); ++j) s += alpha[j] * d[j] * v[j];
    return s;
}

inline Rational form_root_root(const QVector& a, const QVector& b, const RootSystem& rs,
                               const std::vector<Rational>& d)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * b[j] * d[i] * rs.cartan()(i, j);
    return s;
}

/// 2(alpha, v) / (alpha, alpha); alpha in simple-root coordinates, v in weight coordinates.
inline Rational coroot_pairing(const RootSystem& rs, const QVector& alpha, const QVector& v)
{
    const auto& d = rs.symmetrizer();
    return 2 * form_root_weight(alpha, v, d) / form_root_root(alpha, alpha, rs, d);
}

/**
 * H(lambda) = prod_{alpha > 0} (lambda + rho/2, alpha) / (rho/2, alpha), with
 * rho the sum of positive roots, so rho/2 has all weight coordinates 1. The
 * symmetrizer can be overridden to check that normalisation cancels.
 */
inline Rational weyl_dim(const RootSystem& rs, const QVector& lambda, const std::vector<Rational>& d)
{
    if (lambda.size() != static_cast<std::size_t>(rs.rank())) throw DimensionMismatch("weyl_dim weight");
    QVector shifted = lambda;
    QVector half_rho(rs.rank());
    for (int i = 0; i < rs.rank(); ++i) {
        shifted[i] += 1;
        half_rho[i] = 1;
    }
    Rational h = 1;
    for (const auto& a : rs.positive_roots())
        h *= form_root_weight(a, shifted, d) / form_root_weight(a, half_rho, d);
    return h;
}

inline Rational weyl_dim(const RootSystem& rs, const QVector& lambda)
{
    return weyl_dim(rs, lambda, rs.symmetrizer());
}

/// H(-lambda - rho) == (-1)^{|R+|} H(lambda).
inline bool serre_dual_check(const RootSystem& rs, const QVector& lambda)
{
    QVector dual = -lambda - rho(rs);
    Rational sign = rs.positive_roots().size() % 2 ? -1 : 1;
    return weyl_dim(rs, dual) == sign * weyl_dim(rs, lambda);
}

// ---------------------------------------------------------------------------
// Foldings

struct DiagramAutomorphism {
    std::vector<int> permutation; // node i -> permutation[i]
};

inline void check_automorphism(const QMatrix& c, const DiagramAutomorphism& a)
{
    const std::size_t n = c.rows();
    if (a.permutation.size() != n) throw NotAnAutomorphism("permutation length");
    std::vector<bool> hit(n, false);
    for (int x : a.permutation) {
        if (x < 0 || static_cast<std::size_t>(x) >= n || hit[x]) throw NotAnAutomorphism("not a bijection");
        hit[x] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c(a.permutation[i], a.permutation[j]) != c(i, j))
                throw NotAnAutomorphism("C(s(i),s(j)) != C(i,j) at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
}

inline std::vector<std::vector<int>> orbits(const DiagramAutomorphism& a)
{
    const std::size_t n = a.permutation.size();
    std::vector<bool> done(n, false);
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<int> orb;
        for (int k = static_cast<int>(i); !done[k]; k = a.permutation[k]) {
            done[k] = true;
            orb.push_back(k);
        }
        std::sort(orb.begin(), orb.end());
        out.push_back(orb);
    }
    return out;
}

/**
 * Orbit-sum matrix M[a][b] = e_{r_a} . sum_{k in orbit(r_b)} e_k with the
 * simply-laced form e_i.e_j = C_ij. orbit_order lists one representative per
 * orbit; row a is computed at that representative.
 */
inline QMatrix fold(const RootSystem& rs, const DiagramAutomorphism& a, const std::vector<int>& orbit_order)
{
    if (!rs.simply_laced()) throw InvalidType("fold expects an A/D/E system, got " + rs.name());
    check_automorphism(rs.cartan(), a);
    auto orbs = orbits(a);
    std::vector<int> orbit_of(rs.rank());
    for (std::size_t k = 0; k < orbs.size(); ++k)
        for (int x : orbs[k]) orbit_of[x] = static_cast<int>(k);
    std::vector<bool> used(orbs.size(), false);
    if (orbit_order.size() != orbs.size()) throw std::invalid_argument("fold: orbit order must list every orbit once");
    for (int r : orbit_order) {
        if (r < 0 || r >= rs.rank() || used[orbit_of[r]])
            throw std::invalid_argument("fold: orbit order must list every orbit once");
        used[orbit_of[r]] = true;
    }
    const std::size_t m = orbs.size();
    QMatrix out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (int k : orbs[orbit_of[orbit_order[j]]]) out(i, j) += rs.cartan()(orbit_order[i], k);
    return out;
}

/// Reversal i <-> n-1-i of an A_n chain.
inline DiagramAutomorphism chain_involution(int n)
{
    DiagramAutomorphism a;
    for (int i = 0; i < n; ++i) a.permutation.push_back(n - 1 - i);
    return a;
}

/// Representatives of the chain-reversal orbits, innermost orbit first.
inline std::vector<int> inner_orbit_first(int n)
{
    std::vector<int> order;
    for (int i = (n - 1) / 2; i >= 0; --i) order.push_back(i);
    return order;
}

/// Swap of the two short legs of D_n (nodes 0 and 1).
inline DiagramAutomorphism d_leg_swap(int n)
{
    DiagramAutomorphism a;
    for (int i = 0; i < n; ++i) a.permutation.push_back(i);
    std::swap(a.permutation[0], a.permutation[1]);
    return a;
}

/// Rotation of the three legs of D_4 (nodes 0 -> 1 -> 3 -> 0; node 2 is the centre).
inline DiagramAutomorphism d4_triality() { return {{1, 3, 2, 0}}; }

/// E_6 involution 1<->6, 3<->5 (Bourbaki labels), fixing 2 and 4.
inline DiagramAutomorphism e6_involution() { return {{5, 1, 4, 3, 2, 0}}; }

struct Folding {
    RootSystem source;
    DiagramAutomorphism automorphism;
    std::vector<int> orbit_order;
};

/**
 * The standard folding of each supported source, with the orbit order that
 * reproduces the target's Cartan matrix entry by entry:
 *   A_{2k}   -> U_k         inner orbit first
 *   A_{2k+1} -> B_{k+1}     middle node first, then outward
 *   D_n      -> C_{n-1}     leg orbit first
 *   D_4 (triality) -> G_2   leg orbit first; centre first gives the transpose
 *   E_6      -> F_4         orbits of 2, 4, {3,5}, {1,6}
 */
inline Folding standard_folding(Family f, int n, bool triality = false)
{
    switch (f) {
    case Family::A:
        if (n < 2) break;
        return {RootSystem(f, n), chain_involution(n), inner_orbit_first(n)};
    case Family::D: {
        RootSystem rs(f, n);
        if (triality) {
            if (n != 4) break;
            return {rs, d4_triality(), {0, 2}};
        }
        std::vector<int> order{0};
        for (int i = 2; i < n; ++i) order.push_back(i);
        return {rs, d_leg_swap(n), order};
    }
    case Family::E:
        if (n != 6) break;
        return {RootSystem(f, n), e6_involution(), {1, 3, 2, 0}};
    default:
        break;
    }
    throw InvalidType(std::string("no standard folding for ") + family_letter(f) + std::to_string(n) +
                      (triality ? " (triality)" : ""));
}

inline QMatrix fold(const Folding& f) { return fold(f.source, f.automorphism, f.orbit_order); }

} // namespace flopatlas

#endif
