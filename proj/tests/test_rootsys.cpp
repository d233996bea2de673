#include <catch_amalgamated.hpp>

#include <random>

#include <flopatlas/rootsys.hpp>

using namespace flopatlas;

namespace {

const std::vector<std::pair<Family, int>> kSystems = {
    {Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 4}, {Family::B, 2}, {Family::B, 3},
    {Family::B, 4}, {Family::C, 2}, {Family::C, 3}, {Family::C, 4}, {Family::D, 4}, {Family::F, 4},
    {Family::G, 2}, {Family::E, 6}};

// Positive roots of a simply laced system as the nonnegative integer vectors
// b with b^T C b = 2, searched in a box. Independent of the string algorithm.
std::size_t norm_two_vectors(const QMatrix& c, int bound)
{
    const std::size_t n = c.rows();
    std::vector<int> b(n, 0);
    std::size_t count = 0;
    while (true) {
        std::size_t k = 0;
        while (k < n && b[k] == bound) b[k++] = 0;
        if (k == n) break;
        ++b[k];
        QVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = b[i];
        if (v.dot(c * v) == 2) ++count;
    }
    return count;
}

// Paper-style display of C_{n-1}: tridiagonal 2/-1 with the (1,0) entry -2.
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

} // namespace

TEST_CASE("Cartan determinants")
{
    for (int n = 1; n <= 8; ++n) CHECK(cartan_matrix(Family::A, n).determinant() == n + 1);
    for (int n = 2; n <= 8; ++n) {
        CHECK(cartan_matrix(Family::B, n).determinant() == 2);
        CHECK(cartan_matrix(Family::C, n).determinant() == 2);
    }
    for (int n = 3; n <= 8; ++n) CHECK(cartan_matrix(Family::D, n).determinant() == 4);
    CHECK(cartan_matrix(Family::E, 6).determinant() == 3);
    CHECK(cartan_matrix(Family::E, 7).determinant() == 2);
    CHECK(cartan_matrix(Family::E, 8).determinant() == 1);
    CHECK(cartan_matrix(Family::F, 4).determinant() == 1);
    CHECK(cartan_matrix(Family::G, 2).determinant() == 1);
    CHECK(cartan_matrix(Family::B, 3) == cartan_matrix(Family::C, 3).transpose());
}

TEST_CASE("invalid types are rejected")
{
    CHECK_THROWS_AS(cartan_matrix(Family::E, 5), InvalidType);
    CHECK_THROWS_AS(cartan_matrix(Family::F, 3), InvalidType);
    CHECK_THROWS_AS(cartan_matrix(Family::A, 0), InvalidType);
    CHECK_THROWS_AS(parse_family("H"), InvalidType);
    CHECK(parse_family("d") == Family::D);
}

TEST_CASE("positive root counts")
{
    for (int n = 1; n <= 6; ++n)
        for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
            if ((f == Family::B || f == Family::C) && n < 2) continue;
            if (f == Family::D && n < 3) continue;
            CHECK(RootSystem(f, n).positive_roots().size() == classical_root_count(f, n));
        }
    for (int n : {6, 7, 8}) CHECK(RootSystem(Family::E, n).positive_roots().size() == classical_root_count(Family::E, n));
    CHECK(RootSystem(Family::F, 4).positive_roots().size() == 24);
    CHECK(RootSystem(Family::G, 2).positive_roots().size() == 6);
}

TEST_CASE("simply laced roots match the norm-two search")
{
    CHECK(norm_two_vectors(cartan_matrix(Family::A, 4), 1) == RootSystem(Family::A, 4).positive_roots().size());
    CHECK(norm_two_vectors(cartan_matrix(Family::D, 5), 2) == RootSystem(Family::D, 5).positive_roots().size());
    CHECK(norm_two_vectors(cartan_matrix(Family::E, 6), 3) == RootSystem(Family::E, 6).positive_roots().size());
}

TEST_CASE("highest root of G2 and height ordering")
{
    RootSystem g(Family::G, 2);
    const auto& r = g.positive_roots();
    CHECK(r.back() == QVector{2, 3});
    for (std::size_t k = 1; k < r.size(); ++k) {
        Rational h0 = 0, h1 = 0;
        for (const auto& x : r[k - 1]) h0 += x;
        for (const auto& x : r[k]) h1 += x;
        CHECK(h0 <= h1);
    }
}

TEST_CASE("rho pairs to 2 with every simple coroot")
{
    for (auto [f, n] : kSystems) {
        RootSystem rs(f, n);
        QVector p = rho(rs);
        for (int i = 0; i < n; ++i) CHECK(coroot_pairing(rs, QVector::unit(n, i), p) == 2);
    }
}

TEST_CASE("Weyl dimension: trivial weight and A1")
{
    for (auto [f, n] : kSystems) CHECK(weyl_dim(RootSystem(f, n), QVector(n)) == 1);
    RootSystem a1(Family::A, 1);
    for (long m = 0; m <= 20; ++m) CHECK(weyl_dim(a1, QVector{m}) == m + 1);
}

TEST_CASE("Weyl dimension against closed forms and known representations")
{
    RootSystem a2(Family::A, 2);
    for (long a = 0; a <= 6; ++a)
        for (long b = 0; b <= 6; ++b) CHECK(weyl_dim(a2, QVector{a, b}) == rat((a + 1) * (b + 1) * (a + b + 2), 2));

    RootSystem g2(Family::G, 2); // node 0 long
    CHECK(weyl_dim(g2, QVector{1, 0}) == 14);
    CHECK(weyl_dim(g2, QVector{0, 1}) == 7);

    RootSystem f4(Family::F, 4); // nodes 2, 3 long
    CHECK(weyl_dim(f4, QVector{0, 0, 0, 1}) == 52);
    CHECK(weyl_dim(f4, QVector{1, 0, 0, 0}) == 26);

    RootSystem e6(Family::E, 6);
    CHECK(weyl_dim(e6, QVector::unit(6, 0)) == 27);
    CHECK(weyl_dim(e6, QVector::unit(6, 1)) == 78);
    CHECK(weyl_dim(e6, QVector::unit(6, 5)) == 27);
    CHECK(weyl_dim(RootSystem(Family::E, 8), QVector::unit(8, 7)) == 248);

    CHECK(weyl_dim(RootSystem(Family::B, 3), QVector{0, 0, 1}) == 7);
    CHECK(weyl_dim(RootSystem(Family::B, 3), QVector{1, 0, 0}) == 8); // spin
    CHECK(weyl_dim(RootSystem(Family::C, 3), QVector{0, 0, 1}) == 6);
}

TEST_CASE("Weyl dimension does not depend on the symmetrizer scale")
{
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> c(-5, 5);
    for (auto [f, n] : kSystems) {
        RootSystem rs(f, n);
        std::vector<Rational> d3 = rs.symmetrizer();
        for (auto& x : d3) x *= 3;
        QVector lam(n);
        for (int i = 0; i < n; ++i) lam[i] = c(rng);
        CHECK(weyl_dim(rs, lam, d3) == weyl_dim(rs, lam));
    }
}

TEST_CASE("Weyl dimension is a polynomial of degree |R+|")
{
    // forward differences of order |R+|+1 vanish along a lattice line
    for (auto [f, n] : std::vector<std::pair<Family, int>>{{Family::A, 2}, {Family::B, 2}, {Family::G, 2}, {Family::A, 3}}) {
        RootSystem rs(f, n);
        const std::size_t k = rs.positive_roots().size() + 1;
        QVector dir(n), base(n);
        for (int i = 0; i < n; ++i) {
            dir[i] = i + 1;
            base[i] = -i;
        }
        std::vector<Rational> vals;
        for (std::size_t t = 0; t <= k; ++t) vals.push_back(weyl_dim(rs, base + Rational(static_cast<long>(t)) * dir));
        for (std::size_t order = 0; order < k; ++order)
            for (std::size_t i = 0; i + 1 < vals.size() - order; ++i) vals[i] = vals[i + 1] - vals[i];
        CHECK(vals[0] == 0);
    }
}

TEST_CASE("Serre duality for random weights")
{
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> c(-9, 9);
    for (auto [f, n] : kSystems) {
        RootSystem rs(f, n);
        for (int trial = 0; trial < 50; ++trial) {
            QVector lam(n);
            for (int i = 0; i < n; ++i) lam[i] = c(rng);
            CHECK(serre_dual_check(rs, lam));
        }
    }
}

TEST_CASE("foldings reproduce the target Cartan matrices")
{
    // A_{2k+1} -> B_{k+1}
    for (int k = 1; k <= 4; ++k) CHECK(fold(standard_folding(Family::A, 2 * k + 1)) == cartan_matrix(Family::B, k + 1));
    // A_{2k} -> U_k
    for (int k = 1; k <= 5; ++k) CHECK(fold(standard_folding(Family::A, 2 * k)) == u_matrix(k));
    // D_n -> C_{n-1}, in the displayed form
    for (int n = 4; n <= 8; ++n) {
        CHECK(fold(standard_folding(Family::D, n)) == displayed_c(n - 1));
        CHECK(displayed_c(n - 1) == cartan_matrix(Family::C, n - 1));
    }
    CHECK(fold(standard_folding(Family::E, 6)) == cartan_matrix(Family::F, 4));
    CHECK(fold(standard_folding(Family::D, 4, true)) == cartan_matrix(Family::G, 2));
    // centre first gives the other G2 orientation
    CHECK(fold(RootSystem(Family::D, 4), d4_triality(), {2, 0}) == cartan_matrix(Family::G, 2).transpose());
}

TEST_CASE("folding preconditions")
{
    CHECK_THROWS_AS(fold(RootSystem(Family::B, 3), DiagramAutomorphism{{0, 1, 2}}, {0, 1, 2}), InvalidType);
    CHECK_THROWS_AS(fold(RootSystem(Family::A, 3), DiagramAutomorphism{{1, 0, 2}}, {0, 2}), NotAnAutomorphism);
    CHECK_THROWS_AS(fold(RootSystem(Family::A, 3), chain_involution(3), {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(standard_folding(Family::E, 7), InvalidType);
    CHECK_THROWS_AS(standard_folding(Family::D, 5, true), InvalidType);
}

TEST_CASE("identity automorphism folds to the Cartan matrix")
{
    for (auto [f, n] : std::vector<std::pair<Family, int>>{{Family::A, 5}, {Family::D, 6}, {Family::E, 7}}) {
        RootSystem rs(f, n);
        DiagramAutomorphism id;
        std::vector<int> order;
        for (int i = 0; i < n; ++i) {
            id.permutation.push_back(i);
            order.push_back(i);
        }
        CHECK(fold(rs, id, order) == rs.cartan());
    }
}
