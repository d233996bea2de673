#ifndef FLOPATLAS_FIBERDIAG_HPP
#define FLOPATLAS_FIBERDIAG_HPP

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chambers.hpp"
#include "exactq.hpp"

namespace flopatlas {

enum class SurfaceType { ProjPlane, Hirzebruch1, Quadric, TwoPointBlowup, Hirzebruch4Static };

inline const char* type_code(SurfaceType t)
{
    switch (t) {
    case SurfaceType::ProjPlane: return "P2";
    case SurfaceType::Hirzebruch1: return "F1";
    case SurfaceType::Quadric: return "Q";
    case SurfaceType::TwoPointBlowup: return "B2";
    case SurfaceType::Hirzebruch4Static: return "F4";
    }
    return "?";
}

inline std::optional<SurfaceType> parse_type_code(const std::string& s)
{
    for (auto t : {SurfaceType::ProjPlane, SurfaceType::Hirzebruch1, SurfaceType::Quadric,
                   SurfaceType::TwoPointBlowup, SurfaceType::Hirzebruch4Static})
        if (s == type_code(t)) return t;
    return std::nullopt;
}

enum class IncidenceKind { Curve, Point, Any };

inline const char* kind_name(IncidenceKind k)
{
    return k == IncidenceKind::Curve ? "curve" : k == IncidenceKind::Point ? "point" : "any";
}

// ---------------------------------------------------------------------------
// Component ids: "P_i_j" (1 <= i <= j <= n) and "Q_i".

inline std::string p_id(int i, int j) { return "P_" + std::to_string(i) + "_" + std::to_string(j); }
inline std::string q_id(int i) { return "Q_" + std::to_string(i); }

struct ComponentKey {
    bool is_q = false;
    int i = 0, j = 0;
    auto operator<=>(const ComponentKey&) const = default;
};

inline std::optional<ComponentKey> parse_component_id(const std::string& id)
{
    static const std::regex p(R"(P_(\d+)_(\d+))"), q(R"(Q_(\d+))");
    std::smatch m;
    if (std::regex_match(id, m, p)) return ComponentKey{false, std::stoi(m[1]), std::stoi(m[2])};
    if (std::regex_match(id, m, q)) return ComponentKey{true, std::stoi(m[1]), 0};
    return std::nullopt;
}

/// P components lexicographically, then Q components.
inline bool component_less(const std::string& a, const std::string& b)
{
    auto ka = parse_component_id(a), kb = parse_component_id(b);
    if (ka && kb) return *ka < *kb;
    return a < b;
}

// ---------------------------------------------------------------------------
// Signed flopping classes and class notation

struct SignedFloppingClass {
    int sign = 1;
    int i = 0, j = 0;

    QVector vec(int n) const { return Rational(sign) * lambda_class(n, i, j); }
    std::string label() const
    {
        return std::string(sign < 0 ? "-" : "") + "lambda_" + std::to_string(i) + "_" + std::to_string(j);
    }
    SignedFloppingClass operator-() const { return {-sign, i, j}; }
    auto operator<=>(const SignedFloppingClass&) const = default;
};

inline std::optional<SignedFloppingClass> as_flopping_class(const QVector& v)
{
    const int n = static_cast<int>(v.size()) - 1;
    if (n < 1 || (v[0] != 1 && v[0] != -1)) return std::nullopt;
    const int s = v[0] == 1 ? 1 : -1;
    int i = 0, j = 0;
    for (int k = 1; k <= n; ++k) {
        if (v[k] == -s) {
            if (j && j != k - 1) return std::nullopt;
            if (!i) i = k;
            j = k;
        } else if (sgn(v[k]) != 0) {
            return std::nullopt;
        }
    }
    if (!i) return std::nullopt;
    return SignedFloppingClass{s, i, j};
}

/// "e_k", "lambda_i_j", "-lambda_i_j", "2*lambda_i_j", or an explicit e-combination.
inline std::string format_class(const QVector& v)
{
    const int n = static_cast<int>(v.size()) - 1;
    for (int k = 0; k <= n; ++k)
        if (v == QVector::unit(n + 1, k)) return "e_" + std::to_string(k);
    if (auto f = as_flopping_class(v)) return f->label();
    if (v.is_integral() && !v.is_zero()) {
        QVector p = v.primitive();
        std::size_t k = 0;
        while (sgn(p[k]) == 0) ++k;
        Rational mult = v[k] / p[k];
        if (mult > 1)
            if (auto f = as_flopping_class(p))
                return std::string(f->sign < 0 ? "-" : "") + to_string(mult) + "*lambda_" + std::to_string(f->i) +
                       "_" + std::to_string(f->j);
    }
    std::string s;
    for (int k = 0; k <= n; ++k) {
        if (sgn(v[k]) == 0) continue;
        Rational a = abs(v[k]);
        s += sgn(v[k]) < 0 ? "-" : (s.empty() ? "" : "+");
        if (a != 1) s += to_string(a) + "*";
        s += "e_" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

/// Inverse of format_class for the symbolic forms used by fixtures.
inline QVector parse_class(const std::string& s, int n)
{
    static const std::regex e(R"(e_(\d+))"), lam(R"((-?)(?:(\d+)\*)?lambda_(\d+)_(\d+))");
    std::smatch m;
    if (std::regex_match(s, m, e)) {
        int k = std::stoi(m[1]);
        if (k > n) throw FixtureParse("class index out of range: " + s);
        return QVector::unit(n + 1, k);
    }
    if (std::regex_match(s, m, lam)) {
        int i = std::stoi(m[3]), j = std::stoi(m[4]);
        if (i < 1 || j < i || j > n) throw FixtureParse("bad flopping class: " + s);
        long mult = m[2].matched ? std::stol(m[2]) : 1;
        return Rational(m[1].length() ? -mult : mult) * lambda_class(n, i, j);
    }
    throw FixtureParse("unrecognised class '" + s + "'");
}

// ---------------------------------------------------------------------------
// Geometric backing: every non-static component is a smooth toric surface,
// stored as its cycle of invariant curves. Curves and fixed points carry
// global ids, so incidences are read off from shared ids.

namespace detail {

// Torus character: first entry is the coefficient of a, second of kappa
// (the weight of the symplectic form); a_i = a + (i-1) kappa.
using Weight = std::array<long, 2>;

inline Weight operator+(Weight x, Weight y) { return {x[0] + y[0], x[1] + y[1]}; }
inline Weight operator-(Weight x, Weight y) { return {x[0] - y[0], x[1] - y[1]}; }
inline Weight operator-(Weight x) { return {-x[0], -x[1]}; }
inline Weight operator*(long k, Weight x) { return {k * x[0], k * x[1]}; }

constexpr Weight kKappa{0, 1};

struct Polygon {
    // Edge k joins verts[k-1] and verts[k]; w[k] = tangent weight of edge k at
    // its start and at its end; si = self-intersections.
    std::vector<int> edges, verts;
    std::vector<std::array<Weight, 2>> w;
    std::vector<int> si;
};

// The conic of P_ii: not an edge of the polygon, tangent to edges at its ends.
struct Conic {
    int curve;
    std::array<int, 2> ends;
    std::array<int, 2> tangent; // -1: no tangent edge
};

struct StaticHolder {
    std::set<int> curves, points;
};

struct Geometry {
    int n = 0;
    int next_id = 0;
    std::map<std::string, Polygon, decltype(&component_less)> poly{&component_less};
    std::map<std::string, std::vector<Conic>> conics;
    std::map<std::string, StaticHolder, decltype(&component_less)> statics{&component_less};
    std::map<int, QVector> cls;

    int fresh() { return next_id++; }
};

inline std::shared_ptr<Geometry> initial_geometry(int n)
{
    auto g = std::make_shared<Geometry>();
    g->n = n;
    std::map<std::string, int> names;
    auto id = [&](const std::string& name) {
        auto it = names.find(name);
        if (it != names.end()) return it->second;
        return names[name] = g->fresh();
    };
    auto tag = [](const char* f, int a, int b) {
        return std::string(f) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    };
    // L(k,i): x_k + C_i; pair(i,j): {x_i, x_j}; nr(k,c): x_k doubled along C_c.
    auto L = [&](int k, int i) { return id(tag("L", k, i)); };
    auto pair = [&](int i, int j) { return id(tag("pair", i, j)); };
    auto nr = [&](int k, int c) { return id(tag("nr", k, c)); };
    auto e = [&](int k) { return QVector::unit(n + 1, k); };
    auto a = [](int i) { return Weight{1, i - 1}; };

    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Polygon p;
            const Weight ai = a(i), aj = a(j);
            if (i == j) {
                const int la = L(i - 1, i), lb = L(i, i), m = id(tag("M", i, i));
                for (int c : {la, lb, m}) g->cls[c] = e(i) - e(0);
                p.edges = {la, lb, m};
                p.verts = {pair(i - 1, i), nr(i, i), nr(i - 1, i)};
                p.w = {{{ai, -ai}, {ai, -ai}, {-2 * ai, 2 * ai}}};
                p.si = {1, 1, 1};
                const int k = id(tag("K", i, i));
                g->cls[k] = Rational(2) * (e(i) - e(0));
                g->conics[p_id(i, i)].push_back({k, {p.verts[2], p.verts[1]}, {la, lb}});
            } else {
                const int bot = L(j - 1, i), right = L(i, j), top = L(j, i), left = L(i - 1, j);
                g->cls.try_emplace(top, e(i));
                g->cls.try_emplace(left, e(j));
                if (j > i + 1) {
                    g->cls.try_emplace(bot, e(i));
                    g->cls.try_emplace(right, e(j));
                    p.edges = {bot, right, top, left};
                    p.verts = {pair(i, j - 1), pair(i, j), pair(i - 1, j), pair(i - 1, j - 1)};
                    p.w = {{{ai, -ai}, {aj, -aj}, {-ai, ai}, {-aj, aj}}};
                    p.si = {0, 0, 0, 0};
                } else {
                    const int f = id(tag("F", i, i));
                    g->cls[f] = e(0);
                    g->cls[bot] = e(i) - e(0);
                    g->cls[right] = e(j) - e(0);
                    p.edges = {bot, f, right, top, left};
                    p.verts = {nr(i, i), nr(i, j), pair(i, j), pair(i - 1, j), pair(i - 1, j - 1)};
                    p.w = {{{ai, -ai}, {aj + ai, -(ai + aj)}, {aj, -aj}, {-ai, ai}, {-aj, aj}}};
                    p.si = {-1, -1, -1, 0, 0};
                }
            }
            g->poly[p_id(i, j)] = std::move(p);
        }
    for (int i = 1; i <= n; ++i) {
        StaticHolder h;
        h.curves.insert(id(tag("K", i, i)));
        if (i > 1) h.curves.insert(id(tag("F", i - 1, i - 1)));
        if (i < n) h.curves.insert(id(tag("F", i, i)));
        g->statics[q_id(i)] = std::move(h);
    }
    return g;
}

inline std::map<int, std::set<int>> curve_endpoints(const Geometry& g)
{
    std::map<int, std::set<int>> ep;
    for (const auto& [cid, p] : g.poly) {
        const std::size_t m = p.edges.size();
        for (std::size_t k = 0; k < m; ++k) ep[p.edges[k]] = {p.verts[(k + m - 1) % m], p.verts[k]};
    }
    for (const auto& [cid, cs] : g.conics)
        for (const auto& c : cs) ep[c.curve] = {c.ends[0], c.ends[1]};
    return ep;
}

/// Mukai flop of the plane `cid`, in place.
inline void flop_plane(Geometry& g, const std::string& cid)
{
    Polygon& P = g.poly.at(cid);
    if (P.edges.size() != 3) throw InconsistentClasses(cid + " is not a plane");
    const QVector ell = g.cls.at(P.edges[0]);
    const std::vector<int> pe = P.edges, pv = P.verts;
    const std::set<int> pvset(pv.begin(), pv.end()), peset(pe.begin(), pe.end());
    std::set<int> own_conics;
    for (const auto& c : g.conics[cid]) own_conics.insert(c.curve);

    // Curves meeting the plane pick up one line class per endpoint on it.
    const auto ep = curve_endpoints(g);
    for (auto& [c, v] : g.cls) {
        if (peset.count(c) || own_conics.count(c)) continue;
        auto it = ep.find(c);
        if (it == ep.end()) continue;
        long k = 0;
        for (int x : it->second) k += pvset.count(x);
        if (k) v += Rational(k) * ell;
    }

    std::map<int, int> dual_pt, dual_cv; // edge -> point, vertex -> curve
    for (int c : pe) dual_pt[c] = g.fresh();
    for (int v : pv) dual_cv[v] = g.fresh();

    // Moment-map values: the tangent at p_k toward p_l is mu_l - mu_k.
    std::map<int, Weight> mu{{pv[0], {0, 0}}};
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < 3; ++k) {
            int s = pv[(k + 2) % 3], t = pv[k];
            if (mu.count(s) && !mu.count(t)) mu[t] = mu[s] + P.w[k][0];
            if (mu.count(t) && !mu.count(s)) mu[s] = mu[t] + P.w[k][1];
        }
    for (std::size_t k = 0; k < 3; ++k) {
        int s = pv[(k + 2) % 3], t = pv[k];
        if (mu[t] - mu[s] != P.w[k][0] || mu[s] - mu[t] != P.w[k][1])
            throw InconsistentClasses("tangent weights of " + cid + " are not a moment triangle");
    }
    auto opposite = [&](std::size_t k) { return pv[(k + 1) % 3]; }; // vertex off edge k

    // Tangent weights of P at each of its vertices, in edge order.
    std::map<int, std::vector<std::pair<int, Weight>>> pw;
    for (std::size_t k = 0; k < 3; ++k) {
        pw[pv[(k + 2) % 3]].push_back({pe[k], P.w[k][0]});
        pw[pv[k]].push_back({pe[k], P.w[k][1]});
    }

    Polygon dual;
    for (std::size_t k = 0; k < 3; ++k) {
        dual.edges.push_back(dual_cv[pv[k]]);
        dual.verts.push_back(dual_pt[pe[(k + 1) % 3]]);
        Weight ms = mu[opposite(k)], me = mu[opposite((k + 1) % 3)];
        dual.w.push_back({ms - me, me - ms});
    }
    dual.si = {1, 1, 1};

    std::vector<Conic> dual_conics;
    for (const auto& c : g.conics[cid]) {
        g.cls[c.curve] = -g.cls[c.curve];
        Conic d{c.curve, {}, {}};
        for (int s = 0; s < 2; ++s) {
            if (c.tangent[s] < 0) throw InconsistentClasses("conic of " + cid + " has no tangent edge");
            d.ends[s] = dual_pt.at(c.tangent[s]);
            d.tangent[s] = dual_cv.at(c.ends[s]);
        }
        dual_conics.push_back(d);
    }

    for (auto& [oid, O] : g.poly) {
        if (oid == cid) continue;
        auto& oc = g.conics[oid];

        // R1: contract every edge shared with the plane.
        std::vector<int> shared;
        for (int c : O.edges)
            if (peset.count(c)) shared.push_back(c);
        for (int c : shared) {
            const std::size_t m = O.edges.size();
            const std::size_t k = std::find(O.edges.begin(), O.edges.end(), c) - O.edges.begin();
            if (O.si[k] != -1)
                throw InconsistentClasses(oid + " meets " + cid + " along a curve of self-intersection " +
                                          std::to_string(O.si[k]));
            O.si[(k + m - 1) % m] += 1;
            O.si[(k + 1) % m] += 1;
            const int vprev = O.verts[(k + m - 1) % m], vnext = O.verts[k];
            O.verts[(k + m - 1) % m] = dual_pt[c];
            O.edges.erase(O.edges.begin() + k);
            O.w.erase(O.w.begin() + k);
            O.si.erase(O.si.begin() + k);
            O.verts.erase(O.verts.begin() + k);
            for (auto& cn : oc)
                for (int& x : cn.ends)
                    if (x == vprev || x == vnext) x = dual_pt[c];
        }

        // R2: blow up every remaining vertex shared with the plane.
        const std::vector<int> snapshot = O.verts;
        for (int v : snapshot) {
            if (!pvset.count(v)) continue;
            const std::size_t m = O.edges.size();
            const std::size_t k = std::find(O.verts.begin(), O.verts.end(), v) - O.verts.begin();
            const int ein = O.edges[k], eout = O.edges[(k + 1) % m];
            const Weight win = O.w[k][1], wout = O.w[(k + 1) % m][0];
            const auto& here = pw.at(v);
            // An edge with weight kappa - u meets the new curve at the dual of the other plane edge.
            auto match = [&](Weight x) {
                if (x == kKappa - here[0].second) return here[1].first;
                if (x == kKappa - here[1].second) return here[0].first;
                throw InconsistentClasses("tangent weight mismatch where " + oid + " meets " + cid);
            };
            const int cin = match(win), cout = match(wout);
            if (cin == cout) throw InconsistentClasses("degenerate blow-up of " + oid);
            O.si[k] -= 1;
            O.si[(k + 1) % m] -= 1;
            O.edges.insert(O.edges.begin() + k + 1, dual_cv[v]);
            O.si.insert(O.si.begin() + k + 1, -1);
            O.w.insert(O.w.begin() + k + 1, {wout - win, win - wout});
            O.verts[k] = dual_pt[cin];
            O.verts.insert(O.verts.begin() + k + 1, dual_pt[cout]);
            for (auto& cn : oc)
                for (int s = 0; s < 2; ++s) {
                    if (cn.ends[s] != v) continue;
                    if (cn.tangent[s] == ein) cn.ends[s] = dual_pt[cin];
                    else if (cn.tangent[s] == eout) cn.ends[s] = dual_pt[cout];
                    else throw InconsistentClasses("conic of " + oid + " passes a blown-up point transversally");
                    cn.tangent[s] = -1;
                }
        }
    }

    for (int c : pe) g.cls.erase(c);
    for (int v : pv) g.cls[dual_cv[v]] = -ell;
    for (auto& [qid, h] : g.statics) {
        for (int c : pe)
            if (h.curves.erase(c)) h.points.insert(dual_pt[c]);
        for (int v : pv)
            if (h.points.erase(v)) h.curves.insert(dual_cv[v]);
    }
    P = std::move(dual);
    g.conics[cid] = std::move(dual_conics);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Summary view

struct Component {
    std::string id;
    SurfaceType type = SurfaceType::Quadric;
    std::map<std::string, QVector> classes;           // named slots, see derive_component
    std::optional<std::vector<QVector>> boundary;     // classes of curves shared with no other P
};

struct Incidence {
    std::string a, b; // a before b in component order
    IncidenceKind kind = IncidenceKind::Point;
    std::optional<QVector> cls;
    std::string note;
};

struct Stub {
    std::string component;
    QVector cls;
};

enum class Scope { Full, GridAdjacent };

/**
 * A central fibre: typed components with class slots and the incidences
 * between them. Engine states carry their geometry so they can be flopped;
 * loaded fixtures are patterns (partial classes, wildcard kinds, stubs).
 */
struct FiberState {
    int n = 0;
    std::pair<std::string, std::string> interval;
    std::vector<Component> components;
    std::vector<Incidence> incidences;

    bool pattern = false;
    Scope scope = Scope::Full;
    std::vector<Stub> stubs;

    std::shared_ptr<const detail::Geometry> geometry;

    const Component* find(const std::string& id) const
    {
        for (const auto& c : components)
            if (c.id == id) return &c;
        return nullptr;
    }
    const Incidence* incidence(std::string a, std::string b) const
    {
        if (component_less(b, a)) std::swap(a, b);
        for (const auto& x : incidences)
            if (x.a == a && x.b == b) return &x;
        return nullptr;
    }
};

namespace detail {

inline SurfaceType classify(const std::string& id, std::vector<int> si)
{
    std::sort(si.begin(), si.end());
    if (si.size() == 3 && si == std::vector<int>{1, 1, 1}) return SurfaceType::ProjPlane;
    if (si == std::vector<int>{0, 0, 0, 0}) return SurfaceType::Quadric;
    if (si == std::vector<int>{-1, 0, 0, 1}) return SurfaceType::Hirzebruch1;
    if (si == std::vector<int>{-1, -1, -1, 0, 0}) return SurfaceType::TwoPointBlowup;
    std::string s;
    for (int x : si) s += std::to_string(x) + " ";
    throw InconsistentClasses(id + " has an unexpected self-intersection cycle: " + s);
}

// Class slots with their defining relations checked:
//   P2: line (all three edges)
//   F1: section_neg = section_pos - ruling, both rulings equal
//   Q: ruling_a <= ruling_b, opposite edges equal
//   B2: cycle mid, exc, fiber, fiber, exc with fiber_x = mid + exc_y (x != y)
inline std::map<std::string, QVector> char_classes(const std::string& id, SurfaceType t, const Polygon& p,
                                                   const std::map<int, QVector>& cls)
{
    const std::size_t m = p.edges.size();
    auto c = [&](std::size_t k) { return cls.at(p.edges[k % m]); };
    auto fail = [&](const std::string& why) { return InconsistentClasses(id + ": " + why); };
    std::map<std::string, QVector> out;
    switch (t) {
    case SurfaceType::ProjPlane:
        if (c(0) != c(1) || c(1) != c(2)) throw fail("plane edges carry different classes");
        out["line"] = c(0);
        break;
    case SurfaceType::Quadric: {
        if (c(0) != c(2) || c(1) != c(3)) throw fail("opposite rulings differ");
        QVector a = c(0), b = c(1);
        if (b < a) std::swap(a, b);
        out["ruling_a"] = a;
        out["ruling_b"] = b;
        break;
    }
    case SurfaceType::Hirzebruch1: {
        std::size_t neg = 0, pos = 0;
        std::vector<QVector> rulings;
        for (std::size_t k = 0; k < m; ++k) {
            if (p.si[k] == -1) neg = k;
            else if (p.si[k] == 1) pos = k;
            else rulings.push_back(c(k));
        }
        if (rulings[0] != rulings[1]) throw fail("F1 rulings differ");
        if (c(neg) != c(pos) - rulings[0]) throw fail("section_neg != section_pos - ruling");
        out["section_neg"] = c(neg);
        out["section_pos"] = c(pos);
        out["ruling"] = rulings[0];
        break;
    }
    case SurfaceType::TwoPointBlowup: {
        std::size_t mid = m;
        for (std::size_t k = 0; k < m; ++k)
            if (p.si[k] == -1 && p.si[(k + 1) % m] == -1 && p.si[(k + m - 1) % m] == -1) mid = k;
        if (mid == m) throw fail("no central (-1)-curve");
        QVector ea = c(mid + m - 1), eb = c(mid + 1);
        QVector fa = c(mid + m - 2), fb = c(mid + 2); // fibres adjacent to ea, eb
        if (eb < ea) {
            std::swap(ea, eb);
            std::swap(fa, fb);
        }
        if (fa != c(mid) + eb || fb != c(mid) + ea) throw fail("fibre != mid + opposite exceptional curve");
        out["mid"] = c(mid);
        out["exc_a"] = ea;
        out["exc_b"] = eb;
        out["fiber_a"] = fa;
        out["fiber_b"] = fb;
        break;
    }
    case SurfaceType::Hirzebruch4Static:
        break;
    }
    return out;
}

inline FiberState summarize(std::shared_ptr<const Geometry> g)
{
    FiberState s;
    s.n = g->n;
    std::map<int, int> edge_owners;
    for (const auto& [id, p] : g->poly)
        for (int c : p.edges) ++edge_owners[c];

    for (const auto& [id, p] : g->poly) {
        Component c;
        c.id = id;
        c.type = classify(id, p.si);
        c.classes = char_classes(id, c.type, p, g->cls);
        std::vector<QVector> b;
        for (int e : p.edges)
            if (edge_owners[e] == 1) b.push_back(g->cls.at(e));
        std::sort(b.begin(), b.end());
        c.boundary = std::move(b);
        s.components.push_back(std::move(c));
    }
    for (const auto& [id, h] : g->statics) s.components.push_back({id, SurfaceType::Hirzebruch4Static, {}, {}});

    // Curves and points carried by each component.
    const auto ep = curve_endpoints(*g);
    std::map<std::string, std::set<int>> curves, points;
    for (const auto& [id, p] : g->poly) {
        curves[id].insert(p.edges.begin(), p.edges.end());
        auto it = g->conics.find(id);
        if (it != g->conics.end())
            for (const auto& cn : it->second) curves[id].insert(cn.curve);
        points[id].insert(p.verts.begin(), p.verts.end());
    }
    for (const auto& [id, h] : g->statics) {
        curves[id] = h.curves;
        points[id] = h.points;
        for (int c : h.curves)
            if (auto it = ep.find(c); it != ep.end()) points[id].insert(it->second.begin(), it->second.end());
    }

    for (std::size_t x = 0; x < s.components.size(); ++x)
        for (std::size_t y = x + 1; y < s.components.size(); ++y) {
            const auto& a = s.components[x].id;
            const auto& b = s.components[y].id;
            std::vector<int> common;
            std::set_intersection(curves[a].begin(), curves[a].end(), curves[b].begin(), curves[b].end(),
                                  std::back_inserter(common));
            if (common.size() > 1) throw InconsistentClasses(a + " and " + b + " share several curves");
            if (common.size() == 1) {
                s.incidences.push_back({a, b, IncidenceKind::Curve, g->cls.at(common[0]), {}});
                continue;
            }
            bool touch = std::any_of(points[a].begin(), points[a].end(), [&](int v) { return points[b].count(v); });
            if (touch) s.incidences.push_back({a, b, IncidenceKind::Point, std::nullopt, {}});
        }
    s.geometry = std::move(g);
    return s;
}

} // namespace detail

/// Hilbert-Chow state: every P_ii a plane with line class -lambda_ii.
inline FiberState initial_state(int n)
{
    if (n < 1) throw std::invalid_argument("initial_state: n must be positive");
    return detail::summarize(detail::initial_geometry(n));
}

/**
 * Flop of the unique plane whose line class is -lambda; the result has that
 * plane with line +lambda and its neighbours rewritten (contractions where
 * they met along a curve, blow-ups where they met at a point).
 */
inline FiberState flop(const FiberState& s, const SignedFloppingClass& lambda)
{
    if (!s.geometry) throw std::invalid_argument("flop needs an engine state, not a loaded pattern");
    const QVector target = (-lambda).vec(s.n);
    std::vector<std::string> hits;
    for (const auto& c : s.components)
        if (c.type == SurfaceType::ProjPlane && c.classes.at("line") == target) hits.push_back(c.id);
    if (hits.empty()) throw NoFlopTarget("no plane with line class " + (-lambda).label());
    if (hits.size() > 1) throw AmbiguousFlopTarget(std::to_string(hits.size()) + " planes with line " + (-lambda).label());
    auto g = std::make_shared<detail::Geometry>(*s.geometry);
    detail::flop_plane(*g, hits[0]);
    FiberState out = detail::summarize(std::move(g));
    const Component* c = out.find(hits[0]);
    if (!c || c->type != SurfaceType::ProjPlane || c->classes.at("line") != lambda.vec(s.n))
        throw InconsistentClasses("flopped plane does not carry " + lambda.label());
    return out;
}

/// Line classes of all planes as signed flopping classes, sorted.
inline std::vector<SignedFloppingClass> p2_classes(const FiberState& s)
{
    std::vector<SignedFloppingClass> out;
    for (const auto& c : s.components) {
        if (c.type != SurfaceType::ProjPlane) continue;
        auto it = c.classes.find("line");
        if (it == c.classes.end()) throw NotAFloppingClass(c.id + " has no line class");
        auto f = as_flopping_class(it->second);
        if (!f) throw NotAFloppingClass(c.id + ": " + format_class(it->second));
        out.push_back(*f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string state_label(const std::string& walk_label)
{
    // "gamma_i_j" -> "g_i_j"; "0" and "+inf" unchanged
    if (walk_label.rfind("gamma_", 0) == 0) return "g_" + walk_label.substr(6);
    return walk_label;
}

/// Fibre on every interval of the walk: state k+1 = flop(state k, lambda of threshold k+1).
inline std::vector<FiberState> walk_states(int n, const WalkConfig& cfg)
{
    if (cfg.n() != n) throw DimensionMismatch("walk_states: config is for n = " + std::to_string(cfg.n()));
    const auto steps = walk(cfg);
    std::vector<FiberState> out{initial_state(n)};
    for (const auto& t : cfg.thresholds) out.push_back(flop(out.back(), {1, t.i, t.j}));
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k].interval = {state_label(steps[k].lower), state_label(steps[k].upper)};
    return out;
}

// ---------------------------------------------------------------------------
// Comparison

namespace detail {

inline bool grid_adjacent(const std::string& a, const std::string& b)
{
    auto ka = parse_component_id(a), kb = parse_component_id(b);
    if (!ka || !kb || ka->is_q || kb->is_q) return false;
    return std::abs(ka->i - kb->i) <= 1 && std::abs(ka->j - kb->j) <= 1;
}

inline bool same_incidence(const Incidence& x, const Incidence& y)
{
    return x.a == y.a && x.b == y.b && x.kind == y.kind && x.cls == y.cls;
}

inline bool same_component(const Component& x, const Component& y)
{
    return x.id == y.id && x.type == y.type && x.classes == y.classes && x.boundary == y.boundary;
}

inline bool structurally_equal(const FiberState& a, const FiberState& b)
{
    if (a.n != b.n || a.components.size() != b.components.size() || a.incidences.size() != b.incidences.size())
        return false;
    for (std::size_t k = 0; k < a.components.size(); ++k)
        if (!same_component(a.components[k], b.components[k])) return false;
    for (std::size_t k = 0; k < a.incidences.size(); ++k)
        if (!same_incidence(a.incidences[k], b.incidences[k])) return false;
    if (a.pattern != b.pattern || a.scope != b.scope || a.stubs.size() != b.stubs.size()) return false;
    for (std::size_t k = 0; k < a.stubs.size(); ++k)
        if (a.stubs[k].component != b.stubs[k].component || a.stubs[k].cls != b.stubs[k].cls) return false;
    return true;
}

/// Human-readable differences of an engine state against a pattern; empty when they match.
inline std::vector<std::string> pattern_mismatches(const FiberState& s, const FiberState& p)
{
    std::vector<std::string> out;
    if (s.n != p.n) return {"n differs"};
    std::set<std::string> ids, pids;
    for (const auto& c : s.components) ids.insert(c.id);
    for (const auto& c : p.components) pids.insert(c.id);
    if (ids != pids) out.push_back("component sets differ");

    for (const auto& pc : p.components) {
        const Component* c = s.find(pc.id);
        if (!c) continue;
        if (c->type != pc.type)
            out.push_back(pc.id + ": type " + type_code(c->type) + ", expected " + type_code(pc.type));
        for (const auto& [slot, v] : pc.classes) {
            auto it = c->classes.find(slot);
            if (it == c->classes.end()) out.push_back(pc.id + ": no slot " + slot);
            else if (it->second != v)
                out.push_back(pc.id + "." + slot + " = " + format_class(it->second) + ", expected " + format_class(v));
        }
        if (pc.boundary && c->boundary != pc.boundary) out.push_back(pc.id + ": boundary differs");
    }

    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& x : p.incidences) pairs.insert({x.a, x.b});
    for (std::size_t x = 0; x < s.components.size(); ++x)
        for (std::size_t y = x + 1; y < s.components.size(); ++y) {
            const auto& a = s.components[x].id;
            const auto& b = s.components[y].id;
            if (p.scope == Scope::Full || grid_adjacent(a, b)) pairs.insert({a, b});
        }
    for (const auto& [a, b] : pairs) {
        const Incidence* want = p.incidence(a, b);
        const Incidence* got = s.incidence(a, b);
        const std::string tag = a + "--" + b;
        if (!want) {
            if (got) out.push_back(tag + ": unexpected " + kind_name(got->kind) + " incidence");
            continue;
        }
        if (want->kind == IncidenceKind::Any) continue;
        if (!got) {
            out.push_back(tag + ": missing " + std::string(kind_name(want->kind)) + " incidence");
            continue;
        }
        if (got->kind != want->kind) {
            out.push_back(tag + ": " + kind_name(got->kind) + ", expected " + kind_name(want->kind));
            continue;
        }
        if (want->cls && got->cls != want->cls)
            out.push_back(tag + ": class " + (got->cls ? format_class(*got->cls) : "none") + ", expected " +
                          format_class(*want->cls));
    }

    for (const auto& st : p.stubs) {
        const Component* c = s.find(st.component);
        bool ok = c && c->boundary && std::find(c->boundary->begin(), c->boundary->end(), st.cls) != c->boundary->end();
        if (!ok) out.push_back(st.component + ": no boundary curve of class " + format_class(st.cls));
    }
    return out;
}

} // namespace detail

/**
 * Types, class slots and incidence sets; layout and interval labels are
 * ignored. When one side is a pattern its wildcards and scope apply.
 */
inline bool states_equal(const FiberState& a, const FiberState& b)
{
    if (a.pattern == b.pattern) return detail::structurally_equal(a, b);
    return a.pattern ? detail::pattern_mismatches(b, a).empty() : detail::pattern_mismatches(a, b).empty();
}

inline std::vector<std::string> explain_mismatch(const FiberState& state, const FiberState& pattern)
{
    return detail::pattern_mismatches(state, pattern);
}

// ---------------------------------------------------------------------------
// Serialisation

inline nlohmann::json class_json(const QVector& v)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) {
        if (!is_integer(x)) throw InconsistentClasses("non-integral curve class");
        a.push_back(x.get_num().get_si());
    }
    return a;
}

inline nlohmann::json to_json_value(const FiberState& s)
{
    using nlohmann::json;
    json j;
    j["n"] = s.n;
    j["interval"] = json::array({s.interval.first, s.interval.second});
    json comps = json::array();
    for (const auto& c : s.components) {
        json jc{{"id", c.id}, {"type", type_code(c.type)}};
        json cl = json::object();
        for (const auto& [slot, v] : c.classes) cl[slot] = class_json(v);
        jc["classes"] = cl;
        if (c.boundary) {
            json b = json::array();
            for (const auto& v : *c.boundary) b.push_back(class_json(v));
            jc["boundary"] = b;
        }
        comps.push_back(jc);
    }
    j["components"] = comps;
    json inc = json::array();
    for (const auto& x : s.incidences) {
        json ji{{"a", x.a}, {"b", x.b}, {"kind", kind_name(x.kind)}};
        if (x.cls) ji["class"] = class_json(*x.cls);
        if (!x.note.empty()) ji["note"] = x.note;
        inc.push_back(ji);
    }
    j["incidences"] = inc;
    if (s.pattern) {
        j["scope"] = s.scope == Scope::Full ? "full" : "grid_adjacent";
        json st = json::array();
        for (const auto& x : s.stubs) st.push_back({{"component", x.component}, {"class", class_json(x.cls)}});
        j["stubs"] = st;
    }
    return j;
}

inline std::string to_json(const FiberState& s) { return to_json_value(s).dump(1); }

namespace detail {

inline QVector class_from_json(const nlohmann::json& j, int n)
{
    if (j.is_string()) return parse_class(j.get<std::string>(), n);
    if (j.is_array()) {
        if (static_cast<int>(j.size()) != n + 1) throw FixtureParse("class vector must have n+1 entries");
        QVector v(n + 1);
        for (int k = 0; k <= n; ++k) {
            if (!j[k].is_number_integer()) throw FixtureParse("class entries must be integers");
            v[k] = Rational(j[k].get<long>());
        }
        return v;
    }
    throw FixtureParse("class must be a string or an integer array");
}

} // namespace detail

/// Reads a fixture (symbolic or integer classes) or a to_json dump as a pattern.
inline FiberState state_from_json(const nlohmann::json& j)
{
    using detail::class_from_json;
    try {
        FiberState s;
        s.pattern = true;
        s.n = j.at("n").get<int>();
        if (s.n < 1) throw FixtureParse("n must be positive");
        const auto& iv = j.at("interval");
        if (!iv.is_array() || iv.size() != 2) throw FixtureParse("interval must have two labels");
        s.interval = {iv[0].get<std::string>(), iv[1].get<std::string>()};
        const std::string scope = j.value("scope", std::string("full"));
        if (scope == "full") s.scope = Scope::Full;
        else if (scope == "grid_adjacent") s.scope = Scope::GridAdjacent;
        else throw FixtureParse("unknown scope '" + scope + "'");

        std::set<std::string> seen;
        for (const auto& jc : j.at("components")) {
            Component c;
            c.id = jc.at("id").get<std::string>();
            auto key = parse_component_id(c.id);
            if (!key || (key->is_q ? key->i < 1 || key->i > s.n : key->i < 1 || key->j < key->i || key->j > s.n))
                throw FixtureParse("bad component id '" + c.id + "'");
            if (!seen.insert(c.id).second) throw FixtureParse("duplicate component " + c.id);
            auto t = parse_type_code(jc.at("type").get<std::string>());
            if (!t) throw FixtureParse(c.id + ": unknown type");
            if ((*t == SurfaceType::Hirzebruch4Static) != key->is_q)
                throw FixtureParse(c.id + ": F4 type is reserved for Q components");
            c.type = *t;
            if (jc.contains("classes"))
                for (const auto& [slot, v] : jc.at("classes").items()) c.classes[slot] = class_from_json(v, s.n);
            if (jc.contains("boundary")) {
                std::vector<QVector> b;
                for (const auto& v : jc.at("boundary")) b.push_back(class_from_json(v, s.n));
                std::sort(b.begin(), b.end());
                c.boundary = std::move(b);
            }
            s.components.push_back(std::move(c));
        }
        if (seen.size() != static_cast<std::size_t>(s.n * (s.n + 1) / 2 + s.n))
            throw FixtureParse("expected " + std::to_string(s.n * (s.n + 1) / 2 + s.n) + " components");
        std::sort(s.components.begin(), s.components.end(),
                  [](const Component& a, const Component& b) { return component_less(a.id, b.id); });

        for (const auto& ji : j.at("incidences")) {
            Incidence x;
            x.a = ji.at("a").get<std::string>();
            x.b = ji.at("b").get<std::string>();
            if (!seen.count(x.a) || !seen.count(x.b) || x.a == x.b) throw FixtureParse("bad incidence endpoints");
            if (component_less(x.b, x.a)) std::swap(x.a, x.b);
            const std::string kind = ji.at("kind").get<std::string>();
            x.kind = kind == "curve" ? IncidenceKind::Curve
                   : kind == "point" ? IncidenceKind::Point
                   : kind == "any"   ? IncidenceKind::Any
                                     : throw FixtureParse("unknown incidence kind '" + kind + "'");
            if (ji.contains("class")) x.cls = class_from_json(ji.at("class"), s.n);
            if (x.kind == IncidenceKind::Point && x.cls) throw FixtureParse("point incidence with a class");
            x.note = ji.value("note", std::string());
            if (s.incidence(x.a, x.b)) throw FixtureParse("duplicate incidence " + x.a + "--" + x.b);
            s.incidences.push_back(std::move(x));
        }
        std::sort(s.incidences.begin(), s.incidences.end(), [](const Incidence& x, const Incidence& y) {
            if (x.a != y.a) return component_less(x.a, y.a);
            return component_less(x.b, y.b);
        });
        if (j.contains("stubs"))
            for (const auto& js : j.at("stubs")) {
                Stub st{js.at("component").get<std::string>(), class_from_json(js.at("class"), s.n)};
                if (!seen.count(st.component)) throw FixtureParse("stub on unknown component " + st.component);
                s.stubs.push_back(std::move(st));
            }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FixtureParse(e.what());
    }
}

inline FiberState load_fixture(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FixtureParse("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FixtureParse(path + ": " + e.what());
    }
    return state_from_json(j);
}

inline std::string dot_class_label(const QVector& v)
{
    if (auto f = as_flopping_class(v))
        return std::string(f->sign < 0 ? "-" : "") + "\xce\xbb" + std::to_string(f->i) + std::to_string(f->j);
    return format_class(v);
}

/// Graphviz: solid edges for curve incidences (labelled), dashed for point incidences.
inline std::string to_dot(const FiberState& s)
{
    auto shape = [](SurfaceType t) {
        switch (t) {
        case SurfaceType::ProjPlane: return "triangle";
        case SurfaceType::Hirzebruch1: return "diamond";
        case SurfaceType::Quadric: return "box";
        case SurfaceType::TwoPointBlowup: return "star";
        case SurfaceType::Hirzebruch4Static: return "ellipse";
        }
        return "circle";
    };
    std::ostringstream os;
    os << "graph fiber {\n";
    os << "  label=\"(" << s.interval.first << ", " << s.interval.second << ")\";\n";
    for (const auto& c : s.components) {
        os << "  \"" << c.id << "\" [shape=" << shape(c.type);
        auto it = c.classes.find("line");
        os << ", label=\"" << c.id;
        if (it != c.classes.end()) os << "\\n" << dot_class_label(it->second);
        os << "\"];\n";
    }
    for (const auto& x : s.incidences) {
        os << "  \"" << x.a << "\" -- \"" << x.b << "\"";
        if (x.kind == IncidenceKind::Point) os << " [style=dashed]";
        else if (x.kind == IncidenceKind::Any) os << " [style=dotted]";
        else if (x.cls) os << " [label=\"" << dot_class_label(*x.cls) << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace flopatlas

#endif
