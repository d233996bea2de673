#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace flopatlas {

/**
 * Finite group as an explicit multiplication table on 0..order-1, with 0
 * the identity. Associativity, identity and inverses are checked on
 * construction.
 */
class FiniteGroupTable {
public:
    FiniteGroupTable(std::vector<std::vector<int>> mul, std::vector<std::string> labels = {})
        : mul_(std::move(mul)), labels_(std::move(labels))
    {
        const int n = order();
        if (n == 0) throw InvalidGroupTable("empty table");
        for (const auto& row : mul_) {
            if (static_cast<int>(row.size()) != n) throw InvalidGroupTable("table is not square");
            for (int x : row)
                if (x < 0 || x >= n) throw InvalidGroupTable("entry out of range");
        }
        if (!labels_.empty() && static_cast<int>(labels_.size()) != n) throw InvalidGroupTable("label count");
        for (int a = 0; a < n; ++a)
            if (mul_[0][a] != a || mul_[a][0] != a) throw InvalidGroupTable("0 is not the identity");
        inv_.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b)
                if (mul_[a][b] == 0) {
                    inv_[a] = b;
                    break;
                }
            if (inv_[a] < 0 || mul_[inv_[a]][a] != 0) throw InvalidGroupTable("missing inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]]) throw InvalidGroupTable("not associative");
    }

    int order() const { return static_cast<int>(mul_.size()); }
    int mul(int a, int b) const { return mul_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    const std::vector<std::vector<int>>& table() const { return mul_; }
    const std::vector<std::string>& labels() const { return labels_; }
    int conjugate(int g, int x) const { return mul(mul(g, x), inv(g)); } // g x g^-1

private:
    std::vector<std::vector<int>> mul_;
    std::vector<std::string> labels_;
    std::vector<int> inv_;
};

/// Z_m, elements 0..m-1 under addition.
inline FiniteGroupTable cyclic_group(int m)
{
    if (m < 1) throw std::invalid_argument("cyclic_group: m must be positive");
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
    return FiniteGroupTable(t);
}

/// S_k acting on {0..k-1}; element 0 is the identity, the rest in lexicographic order.
inline FiniteGroupTable symmetric_group(int k)
{
    if (k < 1 || k > 6) throw std::invalid_argument("symmetric_group: 1 <= k <= 6");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const int n = static_cast<int>(perms.size());
    auto index = [&](const std::vector<int>& q) {
        return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
    };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> labels;
    for (int a = 0; a < n; ++a) {
        std::string s;
        for (int x : perms[a]) s += std::to_string(x);
        labels.push_back(s);
        for (int b = 0; b < n; ++b) {
            std::vector<int> c(k);
            for (int i = 0; i < k; ++i) c[i] = perms[a][perms[b][i]]; // (a*b)(i) = a(b(i))
            t[a][b] = index(c);
        }
    }
    return FiniteGroupTable(t, labels);
}

/**
 * (Z_m)^2 semidirect Z_2, Z_2 swapping the factors. Element ((a,b),s) has
 * index s*m^2 + a*m + b; ((a,b),s)((c,d),t) = ((a,b) + s.(c,d), s+t).
 */
inline FiniteGroupTable wreath_z2(int m)
{
    if (m < 1) throw std::invalid_argument("wreath_z2: m must be positive");
    const int n = 2 * m * m;
    auto idx = [m](int a, int b, int s) { return s * m * m + a * m + b; };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> labels(n);
    for (int x = 0; x < n; ++x) {
        const int s = x / (m * m), a = (x / m) % m, b = x % m;
        labels[x] = "(" + std::to_string(a) + "," + std::to_string(b) + ")" + (s ? "s" : "");
        for (int y = 0; y < n; ++y) {
            const int u = y / (m * m), c = (y / m) % m, d = y % m;
            const int c2 = s ? d : c, d2 = s ? c : d;
            t[x][y] = idx((a + c2) % m, (b + d2) % m, (s + u) % 2);
        }
    }
    return FiniteGroupTable(t, labels);
}

/// Conjugacy classes by orbit partition, each sorted, ordered by smallest element.
inline std::vector<std::vector<int>> conjugacy_classes(const FiniteGroupTable& g)
{
    const int n = g.order();
    std::vector<bool> done(n, false);
    std::vector<std::vector<int>> out;
    for (int x = 0; x < n; ++x) {
        if (done[x]) continue;
        std::set<int> orbit;
        for (int h = 0; h < n; ++h) orbit.insert(g.conjugate(h, x));
        for (int y : orbit) done[y] = true;
        out.emplace_back(orbit.begin(), orbit.end());
    }
    return out;
}

inline int conjugacy_class_count(const FiniteGroupTable& g)
{
    return static_cast<int>(conjugacy_classes(g).size());
}

inline bool is_subgroup(const FiniteGroupTable& g, const std::vector<int>& h)
{
    std::set<int> hs(h.begin(), h.end());
    if (hs.empty() || !hs.count(0)) return false;
    for (int x : hs) {
        if (x < 0 || x >= g.order() || !hs.count(g.inv(x))) return false;
        for (int y : hs)
            if (!hs.count(g.mul(x, y))) return false;
    }
    return true;
}

/// |N_G(H)| / |H| by direct enumeration.
inline int normalizer_quotient_order(const FiniteGroupTable& g, const std::vector<int>& h)
{
    if (!is_subgroup(g, h)) throw NotASubgroup("elements are not closed under multiplication and inverse");
    std::set<int> hs(h.begin(), h.end());
    int normalizer = 0;
    for (int x = 0; x < g.order(); ++x) {
        bool ok = true;
        for (int y : hs)
            if (!hs.count(g.conjugate(x, y))) {
                ok = false;
                break;
            }
        normalizer += ok;
    }
    return normalizer / static_cast<int>(hs.size());
}

} // namespace flopatlas
