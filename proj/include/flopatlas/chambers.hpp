#ifndef FLOPATLAS_CHAMBERS_HPP
#define FLOPATLAS_CHAMBERS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cones.hpp"
#include "exactq.hpp"
#include "lp.hpp"
#include "rootsys.hpp"

namespace flopatlas {

constexpr int kMaxChamberN = 6;

/// lambda_ij = e_0 - (e_i + ... + e_j) on the curve basis e_0..e_n.
inline QVector lambda_class(int n, int i, int j)
{
    if (i < 1 || j < i || j > n) throw std::invalid_argument("lambda_class: need 1 <= i <= j <= n");
    QVector v(n + 1);
    v[0] = 1;
    for (int k = i; k <= j; ++k) v[k] = -1;
    return v;
}

struct FloppingClass {
    int i = 0, j = 0;
    QVector cls;

    std::string label() const { return "lambda_" + std::to_string(i) + "_" + std::to_string(j); }
    friend bool operator==(const FloppingClass& a, const FloppingClass& b) { return a.i == b.i && a.j == b.j; }
};

/// All lambda_ij, 1 <= i <= j <= n, in lexicographic (i, j) order.
inline std::vector<FloppingClass> flopping_classes(int n)
{
    if (n < 1) throw std::invalid_argument("flopping_classes: n must be positive");
    std::vector<FloppingClass> out;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) out.push_back({i, j, lambda_class(n, i, j)});
    return out;
}

/**
 * Resolution of C^4/(Z_{n+1} wr Z_2): curves e_0..e_n, divisors E_0..E_n,
 * <e_a, E_b> = -Cartan(A_1 + A_n).
 */
struct ResolutionModel {
    int n;
    Pairing pairing;

    explicit ResolutionModel(int n_)
        : n(n_), pairing{-block_diagonal(cartan_matrix(Family::A, 1), cartan_matrix(Family::A, n_))}
    {
        if (n_ < 1) throw std::invalid_argument("ResolutionModel: n must be positive");
    }

    std::size_t dim() const { return static_cast<std::size_t>(n) + 1; }

    /// Linear form D -> <curve, D> as a row vector on the divisor basis.
    QVector form(const QVector& curve) const { return pairing.matrix.transpose() * curve; }
    Rational pair(const QVector& curve, const QVector& divisor) const { return pairing(curve, divisor); }
};

inline Cone ess_cone(const ResolutionModel& m)
{
    std::vector<QVector> e;
    for (std::size_t k = 0; k < m.dim(); ++k) e.push_back(QVector::unit(m.dim(), k));
    return Cone::from_rays(m.dim(), e);
}

/// Mov = dual of <e_0, ..., e_n> under the model pairing.
inline Cone mov_cone(const ResolutionModel& m) { return dual(ess_cone(m), m.pairing); }

struct Wall {
    std::size_t neighbor;       // index into ChamberComplex::chambers
    std::size_t flopping_index; // index into ChamberComplex::classes
};

struct Chamber {
    std::vector<int> signs; // +1 / -1 per flopping class, same order as flopping_classes(n)
    QVector witness;        // integral, strictly inside
    std::vector<Wall> walls;
};

struct ChamberComplex {
    std::vector<FloppingClass> classes;
    std::vector<Chamber> chambers;
};

namespace detail {

inline std::vector<QVector> mov_forms(const ResolutionModel& m)
{
    std::vector<QVector> rows;
    for (std::size_t k = 0; k < m.dim(); ++k) rows.push_back(m.form(QVector::unit(m.dim(), k)));
    return rows;
}

inline std::vector<QVector> signed_forms(const ResolutionModel& m, const std::vector<FloppingClass>& cls,
                                         const std::vector<int>& signs, std::size_t skip = SIZE_MAX)
{
    std::vector<QVector> rows;
    for (std::size_t k = 0; k < signs.size(); ++k)
        if (k != skip) rows.push_back(Rational(signs[k]) * m.form(cls[k].cls));
    return rows;
}

inline bool strictly_inside(const std::vector<QVector>& rows, const QVector& x)
{
    for (const auto& r : rows)
        if (sgn(r.dot(x)) <= 0) return false;
    return true;
}

} // namespace detail

/// Closed cone of the region with the given signs, intersected with Mov.
inline Cone chamber_cone(const ResolutionModel& m, const std::vector<int>& signs)
{
    auto cls = flopping_classes(m.n);
    if (signs.size() != cls.size()) throw DimensionMismatch("chamber_cone: sign vector length");
    auto rows = detail::mov_forms(m);
    for (auto& r : detail::signed_forms(m, cls, signs)) rows.push_back(std::move(r));
    return Cone::from_inequalities(m.dim(), rows);
}

/**
 * Chambers of Mov cut by every lambda_ij^perp. Hyperplanes are added one at
 * a time; a region survives a split on a side iff an exact LP finds a strict
 * interior point there. Output is sorted by sign vector ("-" before "+").
 */
inline ChamberComplex enumerate_chambers(const ResolutionModel& m)
{
    if (m.n > kMaxChamberN) throw ScaleLimit("enumerate_chambers supports n <= " + std::to_string(kMaxChamberN));
    ChamberComplex cx;
    cx.classes = flopping_classes(m.n);
    const auto mov = detail::mov_forms(m);

    struct Region {
        std::vector<int> signs;
        QVector witness;
    };
    auto wit = strict_interior_point(m.dim(), mov);
    if (!wit) throw EmptyCone("Mov has empty interior");
    std::vector<Region> regions{{{}, *wit}};

    for (std::size_t k = 0; k < cx.classes.size(); ++k) {
        const QVector form = m.form(cx.classes[k].cls);
        std::vector<Region> next;
        for (auto& r : regions) {
            const int here = sgn(form.dot(r.witness));
            for (int s : {-1, 1}) {
                std::vector<int> signs = r.signs;
                signs.push_back(s);
                if (here == s) {
                    next.push_back({signs, r.witness});
                    continue;
                }
                auto rows = mov;
                for (auto& f : detail::signed_forms(m, cx.classes, signs)) rows.push_back(std::move(f));
                if (auto p = strict_interior_point(m.dim(), rows)) next.push_back({signs, *p});
            }
        }
        regions = std::move(next);
    }

    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.signs < b.signs; });
    std::map<std::vector<int>, std::size_t> index;
    for (auto& r : regions) {
        index[r.signs] = cx.chambers.size();
        cx.chambers.push_back({r.signs, r.witness, {}});
    }

    // A shared wall needs a point on lambda_k^perp strictly inside every other constraint.
    for (std::size_t a = 0; a < cx.chambers.size(); ++a)
        for (std::size_t k = 0; k < cx.classes.size(); ++k) {
            std::vector<int> flipped = cx.chambers[a].signs;
            flipped[k] = -flipped[k];
            auto it = index.find(flipped);
            if (it == index.end() || it->second < a) continue;
            auto rows = mov;
            for (auto& f : detail::signed_forms(m, cx.classes, flipped, k)) rows.push_back(std::move(f));
            if (strict_interior_point(m.dim(), rows, {m.form(cx.classes[k].cls)})) {
                cx.chambers[a].walls.push_back({it->second, k});
                cx.chambers[it->second].walls.push_back({a, k});
            }
        }
    return cx;
}

/// The chamber with every sign "-": facets e_0^perp and lambda_ii^perp.
inline Chamber hilb_chow_chamber(const ResolutionModel& m)
{
    auto cls = flopping_classes(m.n);
    std::vector<int> signs(cls.size(), -1);
    auto rows = detail::mov_forms(m);
    for (auto& f : detail::signed_forms(m, cls, signs)) rows.push_back(std::move(f));
    auto w = strict_interior_point(m.dim(), rows);
    if (!w) throw EmptyCone("Hilb-Chow chamber is empty");
    return {signs, *w, {}};
}

// ---------------------------------------------------------------------------
// Threshold walk

struct Threshold {
    Rational gamma;
    int i, j;
};

struct WalkConfig {
    QVector beta;
    std::map<std::pair<int, int>, Rational> gamma;
    QVector d0; // on E_0..E_n
    std::vector<Threshold> thresholds;

    int n() const { return static_cast<int>(beta.size()); }
};

inline QVector default_beta(int n)
{
    QVector b(n);
    for (int i = 0; i < n; ++i) b[i] = Rational(Integer(1) << i);
    return b;
}

inline WalkConfig gamma_table(const QVector& beta)
{
    const int n = static_cast<int>(beta.size());
    if (n < 1) throw InvalidBeta("beta must be nonempty");
    Rational prefix = 0;
    for (int i = 0; i < n; ++i) {
        if (sgn(beta[i]) <= 0) throw InvalidBeta("beta entries must be positive");
        if (i > 0 && !(prefix < beta[i]))
            throw InvalidBeta("beta_1+...+beta_" + std::to_string(i) + " >= beta_" + std::to_string(i + 1));
        prefix += beta[i];
    }
    WalkConfig cfg;
    cfg.beta = beta;
    for (int i = 1; i <= n; ++i) {
        Rational g = 0;
        for (int j = i; j <= n; ++j) {
            g += beta[j - 1];
            cfg.gamma[{i, j}] = g;
            cfg.thresholds.push_back({g, i, j});
        }
    }
    std::sort(cfg.thresholds.begin(), cfg.thresholds.end(),
              [](const Threshold& a, const Threshold& b) { return a.gamma < b.gamma; });
    for (std::size_t k = 1; k < cfg.thresholds.size(); ++k)
        if (cfg.thresholds[k].gamma == cfg.thresholds[k - 1].gamma) throw InvalidBeta("gamma values not distinct");

    ResolutionModel model(n);
    QVector rhs(n + 1);
    for (int i = 1; i <= n; ++i) rhs[i] = beta[i - 1];
    cfg.d0 = solve_linear(model.pairing.matrix, rhs);
    return cfg;
}

/// Expected order: blocks j = 1..n, inside block j the pairs (j,j), (j-1,j), ..., (1,j).
inline std::vector<std::pair<int, int>> expected_threshold_order(int n)
{
    std::vector<std::pair<int, int>> out;
    for (int j = 1; j <= n; ++j)
        for (int i = j; i >= 1; --i) out.emplace_back(i, j);
    return out;
}

inline bool verify_gamma_chain(const WalkConfig& cfg)
{
    auto want = expected_threshold_order(cfg.n());
    if (want.size() != cfg.thresholds.size()) return false;
    for (std::size_t k = 0; k < want.size(); ++k)
        if (want[k] != std::make_pair(cfg.thresholds[k].i, cfg.thresholds[k].j)) return false;
    return true;
}

/// D_t = D0 - (t/2) E_0.
inline QVector divisor_at(const WalkConfig& cfg, const Rational& t)
{
    QVector d = cfg.d0;
    d[0] -= t / 2;
    return d;
}

/// Checks <lambda_ij, D_t> = t - gamma_ij at t = 0 and t = 1; both sides are affine in t.
inline bool verify_threshold_identity(const WalkConfig& cfg)
{
    ResolutionModel m(cfg.n());
    for (const auto& [ij, g] : cfg.gamma) {
        QVector lam = lambda_class(cfg.n(), ij.first, ij.second);
        for (int t : {0, 1})
            if (m.pair(lam, divisor_at(cfg, t)) != Rational(t) - g) return false;
    }
    return true;
}

inline std::string gamma_label(int i, int j, const std::string& prefix = "gamma")
{
    return prefix + "_" + std::to_string(i) + "_" + std::to_string(j);
}

struct WalkStep {
    std::string lower, upper; // "0", "gamma_i_j", "+inf"
    Rational t;               // sample point inside the interval
    Chamber chamber;
};

/**
 * Chamber of D_t on each open interval of R_{>0} minus the thresholds, in
 * increasing t. Starts at the Hilb-Chow chamber by construction.
 */
inline std::vector<WalkStep> walk(const WalkConfig& cfg)
{
    if (!verify_threshold_identity(cfg)) throw DegenerateWalk("<lambda_ij, D_t> != t - gamma_ij");
    ResolutionModel m(cfg.n());
    auto cls = flopping_classes(cfg.n());
    std::vector<WalkStep> out;
    const std::size_t k = cfg.thresholds.size();
    for (std::size_t s = 0; s <= k; ++s) {
        Rational lo = s == 0 ? Rational(0) : cfg.thresholds[s - 1].gamma;
        if (s > 0 && s < k && cfg.thresholds[s].gamma == lo) throw DegenerateWalk("two thresholds coincide");
        Rational t = s == k ? Rational(lo + 1) : Rational((lo + cfg.thresholds[s].gamma) / 2);
        QVector d = divisor_at(cfg, t);
        Chamber c;
        for (const auto& f : cls) {
            int sg = sgn(m.pair(f.cls, d));
            if (sg == 0) throw DegenerateWalk("D_t lies on " + f.label());
            c.signs.push_back(sg);
        }
        c.witness = d.primitive();
        WalkStep step;
        step.lower = s == 0 ? "0" : gamma_label(cfg.thresholds[s - 1].i, cfg.thresholds[s - 1].j);
        step.upper = s == k ? "+inf" : gamma_label(cfg.thresholds[s].i, cfg.thresholds[s].j);
        step.t = t;
        step.chamber = std::move(c);
        out.push_back(std::move(step));
    }
    return out;
}

} // namespace flopatlas

#endif
