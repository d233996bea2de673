// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance [fixture_dir]

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include <flopatlas/chambers.hpp>
#include <flopatlas/fiberdiag.hpp>
#include <flopatlas/mckay.hpp>
#include <flopatlas/rootsys.hpp>
#include <flopatlas/toricfan.hpp>

using namespace flopatlas;

namespace {

struct Result {
    bool ok = true;
    std::string note;
    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) note = what;
        ok = ok && cond;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Displayed C_{n-1}: 2 on the diagonal, -1 beside it, and -2 at (1, 0).
QMatrix displayed_c(int m)
{
    QMatrix x(m, m);
    for (int i = 0; i < m; ++i) {
        x(i, i) = 2;
        if (i + 1 < m) x(i, i + 1) = x(i + 1, i) = -1;
    }
    x(1, 0) = -2;
    return x;
}

Result folding()
{
    Result r;
    for (int k = 1; k <= 3; ++k) // A3, A5, A7
        r.require(fold(standard_folding(Family::A, 2 * k + 1)) == cartan_matrix(Family::B, k + 1),
                  "A" + std::to_string(2 * k + 1));
    for (int n = 4; n <= 6; ++n) r.require(fold(standard_folding(Family::D, n)) == displayed_c(n - 1), "D" + std::to_string(n));
    r.require(fold(standard_folding(Family::E, 6)) == cartan_matrix(Family::F, 4), "E6");
    QMatrix g = fold(standard_folding(Family::D, 4, true));
    r.require(g == cartan_matrix(Family::G, 2) || g.transpose() == cartan_matrix(Family::G, 2), "D4 triality");
    for (int n = 1; n <= 5; ++n) r.require(fold(standard_folding(Family::A, 2 * n)) == u_matrix(n), "A" + std::to_string(2 * n));
    return r;
}

Result weyl()
{
    Result r;
    const std::vector<std::pair<Family, int>> systems = {
        {Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 4}, {Family::B, 2}, {Family::B, 3}, {Family::B, 4},
        {Family::C, 2}, {Family::C, 3}, {Family::C, 4}, {Family::D, 4}, {Family::F, 4}, {Family::G, 2}, {Family::E, 6}};
    std::mt19937 rng(2718);
    std::uniform_int_distribution<int> c(-8, 8);
    for (auto [f, n] : systems) {
        RootSystem rs(f, n);
        r.require(weyl_dim(rs, QVector(n)) == 1, "H(0) on " + rs.name());
        for (int t = 0; t < 50; ++t) {
            QVector lam(n);
            for (int i = 0; i < n; ++i) lam[i] = c(rng);
            r.require(serre_dual_check(rs, lam), "Serre on " + rs.name());
        }
        QVector p = rho(rs);
        for (int i = 0; i < n; ++i) r.require(coroot_pairing(rs, QVector::unit(n, i), p) == 2, "rho on " + rs.name());
    }
    RootSystem a1(Family::A, 1);
    for (long m = 0; m <= 20; ++m) r.require(weyl_dim(a1, QVector{m}) == m + 1, "A1 H(m)");
    return r;
}

Result gamma_chain()
{
    Result r;
    for (int n = 1; n <= 8; ++n) {
        auto cfg = gamma_table(default_beta(n));
        r.require(verify_gamma_chain(cfg), "order at n=" + std::to_string(n));
        ResolutionModel m(n);
        for (const auto& [ij, g] : cfg.gamma)
            for (Rational t : {rat(0), rat(1, 3), rat(5, 2), g, rat(1000)})
                r.require(m.pair(lambda_class(n, ij.first, ij.second), divisor_at(cfg, t)) == t - g,
                          "identity at n=" + std::to_string(n));
    }
    return r;
}

Result walk_cardinality()
{
    Result r;
    for (int n = 1; n <= 6; ++n) {
        auto a = walk(gamma_table(default_beta(n)));
        QVector other(n);
        for (int i = 0; i < n; ++i) other[i] = Rational(Integer(3) * (Integer(1) << (2 * i)) + 1); // 4, 13, 49, ...
        auto b = walk(gamma_table(other));
        const std::size_t want = n * (n + 1) / 2 + 1;
        r.require(a.size() == want && b.size() == want, "length at n=" + std::to_string(n));
        for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
            r.require(a[k].chamber.signs == b[k].chamber.signs, "beta dependence at n=" + std::to_string(n));
        std::set<std::vector<int>> distinct;
        for (const auto& s : a) distinct.insert(s.chamber.signs);
        r.require(distinct.size() == want, "repeated chamber");

        ResolutionModel m(n);
        auto hc = hilb_chow_chamber(m);
        r.require(a.front().chamber.signs == hc.signs, "first chamber");
        const Cone hc_cone = chamber_cone(m, hc.signs);
        std::set<QVector> facets(hc_cone.facets().begin(), hc_cone.facets().end());
        std::set<QVector> expect{m.form(QVector::unit(m.dim(), 0)).primitive()};
        for (int i = 1; i <= n; ++i) expect.insert((-m.form(lambda_class(n, i, i))).primitive());
        r.require(facets == expect, "Hilb-Chow facets");

        auto states = walk_states(n, gamma_table(default_beta(n)));
        auto p2 = p2_classes(states.back());
        r.require(p2.size() == 1 && p2[0] == SignedFloppingClass{1, 1, n}, "last fibre at n=" + std::to_string(n));
    }
    return r;
}

Result golden(const std::string& dir)
{
    Result r;
    auto states = walk_states(6, gamma_table(default_beta(6)));
    int total = 0, pass = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        ++total;
        auto p = load_fixture(e.path().string());
        bool ok = false;
        for (const auto& s : states)
            if (s.interval == p.interval) ok = states_equal(s, p);
        pass += ok;
        r.require(ok, e.path().filename().string());
    }
    r.require(total == 17, "expected 17 fixtures, found " + std::to_string(total));
    if (r.ok) r.note = std::to_string(pass) + "/" + std::to_string(total);
    return r;
}

// Independent count: every sign vector decided by the double-description cone.
std::size_t brute_chamber_count(int n)
{
    ResolutionModel m(n);
    const std::size_t k = flopping_classes(n).size();
    std::size_t count = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<int> s(k);
        for (std::size_t b = 0; b < k; ++b) s[b] = (mask >> b) & 1 ? 1 : -1;
        count += chamber_cone(m, s).is_full_dimensional();
    }
    return count;
}

Result n2_crosscheck()
{
    Result r;
    auto states = walk_states(2, gamma_table(QVector{1, 2}));
    const FiberState* s = nullptr;
    for (const auto& x : states)
        if (x.interval == std::make_pair(std::string("g_2_2"), std::string("g_1_2"))) s = &x;
    r.require(s != nullptr, "no (gamma_2_2, gamma_1_2) state");
    if (s) {
        std::set<QVector> got;
        for (const auto& c : p2_classes(*s)) got.insert(c.vec(2));
        r.require(got == std::set<QVector>{QVector{1, -1, 0}, QVector{1, 0, -1}, QVector{-1, 1, 1}}, "plane classes");
    }
    const std::size_t count = enumerate_chambers(ResolutionModel(2)).chambers.size();
    const std::size_t oracle = brute_chamber_count(2);
    r.require(count == oracle && oracle == 5, "count " + std::to_string(count) + " vs oracle " + std::to_string(oracle));
    if (r.ok) r.note = "5 chambers";
    return r;
}

bool parallel(const QVector& a, const QVector& b) { return a.primitive() == b.primitive() || a.primitive() == (-b).primitive(); }

Result duality()
{
    Result r;
    std::vector<std::size_t> counts;
    for (int n = 1; n <= 6; ++n) {
        ResolutionModel m(n);
        Cone mov = mov_cone(m);
        r.require(is_simplicial(mov), "Mov simplicial at n=" + std::to_string(n));
        r.require(dual(dual(mov, m.pairing.transposed()), m.pairing) == mov, "double dual at n=" + std::to_string(n));
        auto cx = enumerate_chambers(m);
        counts.push_back(cx.chambers.size());
        for (const auto& c : cx.chambers) {
            for (const auto& w : c.walls) {
                const QVector lam = m.form(cx.classes[w.flopping_index].cls);
                const auto& nb = cx.chambers[w.neighbor];
                // the wall lies on lambda^perp: the chambers differ exactly in that sign
                int diff = 0;
                for (std::size_t k = 0; k < c.signs.size(); ++k) diff += c.signs[k] != nb.signs[k];
                r.require(diff == 1 && c.signs[w.flopping_index] != nb.signs[w.flopping_index], "wall sign flip");
            }
            // every facet is on some lambda^perp or a Mov facet
            const Cone cc = chamber_cone(m, c.signs);
            for (const auto& f : cc.facets()) {
                bool ok = false;
                for (const auto& l : cx.classes) ok = ok || parallel(f, m.form(l.cls));
                for (const auto& g : mov.facets()) ok = ok || parallel(f, g);
                r.require(ok, "stray facet at n=" + std::to_string(n));
            }
        }
    }
    if (r.ok) {
        r.note = "chamber counts";
        for (auto c : counts) r.note += " " + std::to_string(c);
    }
    return r;
}

Result toric()
{
    Result r;
    for (int k = 2; k <= 4; ++k) {
        auto f = mukai_flop_fans(k);
        r.require(validate_fan(f.plus) && validate_fan(f.minus), "Mukai r=" + std::to_string(k) + " invalid");
        r.require(fully_unimodular(f.plus) && fully_unimodular(f.minus), "Mukai r=" + std::to_string(k) + " not unimodular");
    }
    auto d = c4z3_search();
    Fan f = c4z3_fan();
    r.require(validate_fan(f), "c4z3 fan invalid");
    r.require(fully_unimodular(f), "c4z3 fan not unimodular");
    r.require(f.rays.size() == 6, "c4z3 ray count");
    r.require(has_edge(f.maximal_cones, 4, 5), "missing (v1, v2) edge");
    r.require(d.n.index_of(d.n0.basis()) == 3, "|N:N0| != 3");
    Rational vol = 0;
    for (std::size_t k = 0; k < f.maximal_cones.size(); ++k) vol += slice_volume(f.cone_rays(k), d.n);
    const Rational total = slice_volume(d.n0.basis(), d.n);
    r.require(vol == total && total == 3, "lattice volume " + to_string(vol) + " vs " + to_string(total));
    return r;
}

Result mckay()
{
    Result r;
    auto s3 = symmetric_group(3);
    r.require(conjugacy_class_count(s3) == 3, "S3 classes");
    for (int m = 1; m <= 6; ++m) {
        auto g = wreath_z2(m);
        // oracle: Burnside count of commuting pairs
        int pairs = 0;
        for (int a = 0; a < g.order(); ++a)
            for (int b = 0; b < g.order(); ++b) pairs += g.mul(a, b) == g.mul(b, a);
        r.require(conjugacy_class_count(g) == pairs / g.order(), "wreath m=" + std::to_string(m));
    }
    int t = -1;
    for (int x = 1; x < s3.order(); ++x)
        if (s3.mul(x, x) == 0) t = x;
    r.require(t > 0 && normalizer_quotient_order(s3, {0, t}) == 1, "S3 normalizer");
    return r;
}

Result involution()
{
    Result r;
    int checked = 0;
    for (int n = 1; n <= 6; ++n) {
        auto cfg = gamma_table(default_beta(n));
        auto states = walk_states(n, cfg);
        for (std::size_t k = 0; k + 1 < states.size(); ++k) {
            const auto& th = cfg.thresholds[k];
            r.require(states_equal(flop(states[k + 1], {-1, th.i, th.j}), states[k]),
                      "n=" + std::to_string(n) + " step " + std::to_string(k));
            ++checked;
        }
    }
    if (r.ok) r.note = std::to_string(checked) + " flops";
    return r;
}

} // namespace

int main(int argc, char** argv)
{
    const std::string dir = argc > 1 ? argv[1] : "fixtures/n6";
    struct Criterion {
        const char* name;
        double budget; // seconds, 0 = none
        std::function<Result()> run;
    };
    const std::vector<Criterion> criteria = {
        {"folding identities", 1, folding},
        {"Weyl suite", 5, weyl},
        {"gamma chain", 0, gamma_chain},
        {"walk cardinality", 0, walk_cardinality},
        {"golden diagrams", 10, [&] { return golden(dir); }},
        {"n=2 cross-check", 0, n2_crosscheck},
        {"duality and structure", 0, duality},
        {"toric fans", 2, toric},
        {"McKay utilities", 0, mckay},
        {"flop involution", 0, involution},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        auto t0 = Clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.ok = false;
            r.note = std::string("exception: ") + e.what();
        }
        const double dt = seconds_since(t0);
        if (c.budget > 0 && dt > c.budget) {
            r.ok = false;
            r.note = "over budget";
        }
        failed += !r.ok;
        std::cout << (r.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << c.name << " (" << static_cast<long>(dt * 1000)
                  << " ms)";
        if (!r.note.empty()) std::cout << ": " << r.note;
        std::cout << '\n';
    }
    return failed ? 1 : 0;
}
