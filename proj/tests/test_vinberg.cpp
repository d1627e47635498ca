#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "vgitk3/lattice.hpp"
#include "vgitk3/vinberg.hpp"

#include <algorithm>
#include <set>

using namespace vgitk3;
using namespace vgitk3::lattice;
using namespace vgitk3::vinberg;
using namespace testsupport;

namespace {

IntVector iv(std::initializer_list<long> xs) {
    IntVector v;
    for (long x : xs)
        v.push_back(x);
    return v;
}

std::vector<IntVector> brute_short(const IntMatrix& g, long norm, long box) {
    std::size_t r = g.rows();
    std::vector<IntVector> out;
    IntVector x(r, Integer(-box));
    while (true) {
        if (bilinear(g, x, x) == norm)
            out.push_back(x);
        std::size_t i = 0;
        while (i < r && x[i] == box) {
            x[i] = -box;
            ++i;
        }
        if (i == r)
            break;
        x[i] += 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

IntVector hvec(std::size_t rank, long a, long b) {
    IntVector h(rank, Integer(0));
    h[0] = a;
    h[1] = b;
    return h;
}

// Affine Dynkin diagrams written out edge by edge.
struct Affine {
    std::string name;
    AffineType type;
    std::size_t rank;
    IntMatrix gram;
};

IntMatrix from_edges(std::size_t k, const std::vector<std::pair<int, int>>& edges) {
    IntMatrix g(k, k);
    for (std::size_t i = 0; i < k; ++i)
        g(i, i) = -2;
    for (auto [a, b] : edges)
        g(a, b) = g(b, a) = 1;
    return g;
}

IntMatrix arms(const std::vector<int>& lens) {
    std::vector<std::pair<int, int>> e;
    int next = 1;
    for (int len : lens) {
        int prev = 0;
        for (int s = 0; s < len; ++s) {
            e.push_back({prev, next});
            prev = next++;
        }
    }
    return from_edges(next, e);
}

std::vector<Affine> catalog(std::size_t max_nodes) {
    std::vector<Affine> c;
    IntMatrix a1{{-2, 2}, {2, -2}};
    c.push_back({"A1~", AffineType::A, 1, a1});
    for (std::size_t n = 2; n + 1 <= max_nodes; ++n) {
        std::vector<std::pair<int, int>> e;
        for (std::size_t i = 0; i <= n; ++i)
            e.push_back({int(i), int((i + 1) % (n + 1))});
        c.push_back({"A" + std::to_string(n) + "~", AffineType::A, n, from_edges(n + 1, e)});
    }
    c.push_back({"D4~", AffineType::D, 4, arms({1, 1, 1, 1})});
    for (std::size_t n = 5; n + 1 <= max_nodes; ++n) {
        // chain 0..n-2, leaves n-1 on node 1 and n on node n-3
        std::vector<std::pair<int, int>> e;
        for (std::size_t i = 0; i + 2 < n; ++i)
            e.push_back({int(i), int(i + 1)});
        e.push_back({int(n - 1), 1});
        e.push_back({int(n), int(n - 3)});
        c.push_back({"D" + std::to_string(n) + "~", AffineType::D, n, from_edges(n + 1, e)});
    }
    c.push_back({"E6~", AffineType::E, 6, arms({2, 2, 2})});
    c.push_back({"E7~", AffineType::E, 7, arms({1, 3, 3})});
    c.push_back({"E8~", AffineType::E, 8, arms({1, 2, 5})});
    std::erase_if(c, [&](const Affine& a) { return a.gram.rows() > max_nodes; });
    return c;
}

const Affine* match(const CoxeterDiagram& d, const std::vector<std::size_t>& s, const std::vector<Affine>& cat) {
    for (const auto& a : cat) {
        if (a.gram.rows() != s.size())
            continue;
        std::vector<std::size_t> p(s.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = i;
        do {
            bool same = true;
            for (std::size_t i = 0; i < p.size() && same; ++i)
                for (std::size_t j = 0; j < p.size() && same; ++j)
                    if (d.weight(s[p[i]], s[p[j]]) != a.gram(i, j))
                        same = false;
            if (same)
                return &a;
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return nullptr;
}

struct Oracle {
    std::vector<std::size_t> nodes;
    AffineType type;
    std::size_t rank;
};

std::vector<Oracle> brute_parabolics(const CoxeterDiagram& d) {
    std::size_t n = d.size();
    auto cat = catalog(n);
    std::vector<Oracle> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1)
                s.push_back(i);
        if (s.size() < 2)
            continue;
        if (const Affine* a = match(d, s, cat))
            out.push_back({s, a->type, a->rank});
    }
    std::sort(out.begin(), out.end(), [](const Oracle& a, const Oracle& b) { return a.nodes < b.nodes; });
    return out;
}

// Connected induced subgraphs grown one vertex at a time, pruned by conditions that
// persist under enlargement, then matched against the catalog by backtracking.
bool embed(const CoxeterDiagram& d, const std::vector<std::size_t>& s, const IntMatrix& g,
           std::vector<int>& assign, std::vector<bool>& used, std::size_t pos) {
    if (pos == s.size())
        return true;
    for (std::size_t c = 0; c < s.size(); ++c) {
        if (used[c])
            continue;
        bool ok = true;
        for (std::size_t q = 0; q < pos && ok; ++q)
            if (d.weight(s[pos], s[q]) != g(c, assign[q]))
                ok = false;
        if (!ok)
            continue;
        used[c] = true;
        assign[pos] = int(c);
        if (embed(d, s, g, assign, used, pos + 1))
            return true;
        used[c] = false;
    }
    return false;
}

std::vector<Oracle> grown_parabolics(const CoxeterDiagram& d, std::size_t max_nodes) {
    std::size_t n = d.size();
    auto cat = catalog(max_nodes);
    std::vector<Oracle> out;
    std::set<std::vector<std::size_t>> seen, level;
    for (std::size_t i = 0; i < n; ++i)
        level.insert({i});
    std::vector<std::vector<std::size_t>> found;
    while (!level.empty()) {
        std::set<std::vector<std::size_t>> next;
        for (const auto& s : level) {
            bool affine = false;
            if (s.size() >= 2) {
                for (const auto& a : cat) {
                    if (a.gram.rows() != s.size())
                        continue;
                    std::vector<int> assign(s.size());
                    std::vector<bool> used(s.size(), false);
                    if (embed(d, s, a.gram, assign, used, 0)) {
                        out.push_back({s, a.type, a.rank});
                        affine = true;
                        break;
                    }
                }
            }
            if (affine || s.size() >= max_nodes)
                continue;
            for (std::size_t u = 0; u < n; ++u) {
                if (std::find(s.begin(), s.end(), u) != s.end())
                    continue;
                bool adjacent = false;
                for (auto x : s)
                    if (d.weight(x, u) != 0)
                        adjacent = true;
                if (!adjacent)
                    continue;
                std::vector<std::size_t> t = s;
                t.push_back(u);
                std::sort(t.begin(), t.end());
                bool bad = false;
                for (std::size_t a = 0; a < t.size() && !bad; ++a) {
                    int deg = 0;
                    for (std::size_t b = 0; b < t.size(); ++b) {
                        if (a == b)
                            continue;
                        Integer w = d.weight(t[a], t[b]);
                        if (w < 0 || w > 2 || (w == 2 && t.size() > 2))
                            bad = true;
                        if (w != 0)
                            ++deg;
                    }
                    if (deg > 4)
                        bad = true;
                }
                for (const auto& f : found)
                    if (std::includes(t.begin(), t.end(), f.begin(), f.end()))
                        bad = true;
                if (!bad && seen.insert(t).second)
                    next.insert(t);
            }
        }
        for (const auto& o : out)
            found.push_back(o.nodes);
        level = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const Oracle& a, const Oracle& b) { return a.nodes < b.nodes; });
    out.erase(std::unique(out.begin(), out.end(), [](const Oracle& a, const Oracle& b) { return a.nodes == b.nodes; }), out.end());
    return out;
}

void compare_with_oracle(const CoxeterDiagram& d, const std::vector<Oracle>& want) {
    auto got = connected_parabolics(d);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].nodes == want[i].nodes);
        CHECK(got[i].type == want[i].type);
        CHECK(got[i].rank == want[i].rank);
    }
}

CoxeterDiagram random_diagram(std::size_t n) {
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = -2;
        for (std::size_t j = i + 1; j < n; ++j) {
            long r = uniform(0, 99);
            long w = r < 55 ? 0 : r < 93 ? 1 : r < 98 ? 2 : 3;
            g(i, j) = g(j, i) = w;
        }
    }
    return CoxeterDiagram::from_gram(g);
}

std::set<std::string> run_labels(const std::string& expr, long a, long b) {
    Lattice l = parse_named(expr);
    HyperbolicLattice n(l);
    auto c = classify_isotropic(n, hvec(l.rank(), a, b), 30);
    const auto& d = c.run.diagram;
    CHECK(stop_criterion(d, n.n()));
    compare_with_oracle(d, grown_parabolics(d, n.n() + 1));
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(bilinear(l.gram, d.nodes[i].vector, d.nodes[i].vector) == -2);
        for (std::size_t j = i + 1; j < d.size(); ++j)
            CHECK(d.weight(i, j) >= 0);
    }
    for (const auto& pc : c.classes) {
        CHECK(bilinear(l.gram, pc.isotropic, pc.isotropic) == 0);
        CHECK(content(pc.isotropic) == 1);
        for (const auto& comp : pc.components)
            for (auto k : comp.nodes)
                CHECK(bilinear(l.gram, pc.isotropic, d.nodes[k].vector) == 0);
    }
    return {c.labels.begin(), c.labels.end()};
}

const std::string S = "\xE2\x8A\xA5";

}  // namespace

TEST_CASE("short vectors of root lattices match a box search") {
    CHECK(short_vectors(parse_named("A1"), -2).size() == 2);
    CHECK(short_vectors(parse_named("A2"), -2).size() == 6);
    CHECK(short_vectors(parse_named("D4"), -2).size() == 24);
    CHECK(short_vectors(parse_named("D4"), -2, true).size() == 12);
    CHECK(short_vectors(parse_named("E6"), -2).size() == 72);
    for (const char* e : {"A2", "A1+A2", "D4", "A3"}) {
        Lattice l = parse_named(e);
        CHECK(short_vectors(l, -2) == brute_short(l.gram, -2, 2));
        CHECK(short_vectors(l, -4) == brute_short(l.gram, -4, 3));
    }
    CHECK_THROWS(short_vectors(parse_named("U"), -2));
}

TEST_CASE("roots of U at height zero") {
    HyperbolicLattice n(parse_named("U"));
    auto r = roots_at_height(n, iv({1, 1}), 0);
    CHECK(r == std::vector<IntVector>{iv({-1, 1}), iv({1, -1})});
    CHECK(roots_at_height(n, iv({1, 1}), 1).empty());
}

TEST_CASE("roots at a height agree with a box search") {
    for (const char* e : {"U+A1", "U+A2", "U+A1^2"}) {
        Lattice l = parse_named(e);
        HyperbolicLattice n(l);
        IntVector h = hvec(l.rank(), 1, 2);
        RootEnumerator en(n, h);
        auto box = brute_short(l.gram, -2, 5);
        for (long m = 0; m <= 3; ++m) {
            std::vector<IntVector> want;
            for (const auto& x : box)
                if (bilinear(l.gram, h, x) == m)
                    want.push_back(x);
            CHECK(en.at_height(m) == want);
        }
    }
}

TEST_CASE("connected parabolics agree with a catalog isomorphism search") {
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = static_cast<std::size_t>(uniform(3, 8));
        CoxeterDiagram d = random_diagram(n);
        auto got = connected_parabolics(d);
        auto want = brute_parabolics(d);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].nodes == want[i].nodes);
            CHECK(got[i].type == want[i].type);
            CHECK(got[i].rank == want[i].rank);
        }
    }
    for (int trial = 0; trial < 10; ++trial) {
        CoxeterDiagram d = random_diagram(24);
        compare_with_oracle(d, grown_parabolics(d, 10));
    }
    for (const auto& a : catalog(9)) {
        auto got = connected_parabolics(CoxeterDiagram::from_gram(a.gram));
        REQUIRE(got.size() == 1);
        CHECK(got[0].type == a.type);
        CHECK(got[0].rank == a.rank);
        IntVector m = got[0].marks;
        IntVector z = a.gram * m;
        CHECK(std::all_of(z.begin(), z.end(), [](const Integer& x) { return x == 0; }));
        CHECK(std::all_of(m.begin(), m.end(), [](const Integer& x) { return x > 0; }));
    }
}

TEST_CASE("labels") {
    CHECK(label_of({{AffineType::D, 4}, {AffineType::A, 1}, {AffineType::A, 1}, {AffineType::A, 1}, {AffineType::A, 1}}) ==
          "A_1^4" + S + "D_4");
    CHECK(label_of({{AffineType::D, 4}, {AffineType::D, 4}}) == "D_4" + S + "D_4");
    CHECK(label_of({{AffineType::E, 7}, {AffineType::A, 1}}) == "A_1" + S + "E_7");
}

TEST_CASE("stop criterion on small diagrams") {
    // two disjoint A1~ inside a rank-2 target: both extend
    CoxeterDiagram d = CoxeterDiagram::from_gram(IntMatrix{{-2, 2, 0, 0}, {2, -2, 0, 0}, {0, 0, -2, 2}, {0, 0, 2, -2}});
    CHECK(stop_criterion(d, 3));
    CHECK(detect_parabolic(d, 2).size() == 1);
    // A2~ triangle plus an A1~ linked to it: the A1~ cannot be completed to rank 2
    CoxeterDiagram e = CoxeterDiagram::from_gram(IntMatrix{
        {-2, 1, 1, 0, 0}, {1, -2, 1, 0, 0}, {1, 1, -2, 1, 0}, {0, 0, 1, -2, 2}, {0, 0, 0, 2, -2}});
    CHECK(!stop_criterion(e, 3));
    CHECK(stop_criterion(CoxeterDiagram{}, 3));
}

TEST_CASE("U+A1 with h = e+f") {
    HyperbolicLattice n(parse_named("U+A1"));
    auto r = vinberg_run(n, iv({1, 1, 0}), 10);
    CHECK(r.stopped);
    for (std::size_t i = 0; i < r.diagram.size(); ++i)
        for (std::size_t j = i + 1; j < r.diagram.size(); ++j)
            CHECK(r.diagram.weight(i, j) >= 0);
}

TEST_CASE("isotropic classes of the three boundary lattices") {
    auto a = run_labels("U+A1^4+D4", 1, 1);
    auto b = run_labels("U+D4^2", 1, 1);
    auto c = run_labels("U+A1^2+D6", 1, 1);
    std::set<std::string> ea{"A_1^4" + S + "D_4", "A_1^2" + S + "D_6", "D_4" + S + "D_4"};
    std::set<std::string> eb{"D_4" + S + "D_4", "D_8"};
    std::set<std::string> ec{"A_1^2" + S + "D_6", "A_1" + S + "E_7", "D_8"};
    for (const auto& x : ea)
        CHECK(a.count(x) == 1);
    for (const auto& x : eb)
        CHECK(b.count(x) == 1);
    for (const auto& x : ec)
        CHECK(c.count(x) == 1);
    std::set<std::string> all = a;
    all.insert(b.begin(), b.end());
    all.insert(c.begin(), c.end());
    CHECK(all.size() == 5);
    // a different interior vector gives the same label sets
    CHECK(run_labels("U+A1^4+D4", 1, 2) == a);
    CHECK(run_labels("U+D4^2", 1, 2) == b);
    CHECK(run_labels("U+A1^2+D6", 1, 2) == c);
}
