#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "vgitk3/vgit.hpp"

#include <algorithm>
#include <numeric>

using namespace vgitk3;
using namespace vgitk3::vgit;
using namespace testsupport;

namespace {

Polynomial P(const std::string& s, std::size_t nv = 3) {
    return parse_polynomial(s, nv, {{"a", Rational(2)}});
}

Tuple T(const std::string& f, std::vector<std::string> lines) {
    std::vector<Polynomial> ls;
    for (auto& l : lines)
        ls.push_back(P(l));
    return tuple_from_polynomials(1, P(f), ls);
}

Weights W(std::initializer_list<Rational> xs) { return Weights(xs); }

Support random_support(int nvars, int deg, int max_terms) {
    Support s;
    s.degree = deg;
    int terms = static_cast<int>(uniform(1, max_terms));
    for (int i = 0; i < terms; ++i) {
        Exponent e(nvars, 0);
        int left = deg;
        for (int j = 0; j + 1 < nvars; ++j) {
            e[j] = uniform(0, left);
            left -= static_cast<int>(e[j]);
        }
        e[nvars - 1] = left;
        std::shuffle(e.begin(), e.end(), rng());
        s.monomials.insert(e);
    }
    return s;
}

Tuple random_tuple(int n, int d, int k) {
    Tuple t;
    t.n = n;
    t.hypersurface = random_support(n + 2, d, 4);
    for (int i = 0; i < k; ++i)
        t.hyperplanes.push_back(random_support(n + 2, 1, 3));
    return t;
}

Weights random_weights(int k) {
    Weights t;
    for (int i = 0; i < k; ++i)
        t.push_back(ratio(Integer(uniform(0, 12)), Integer(uniform(1, 4))));
    return t;
}

// Independent description of S_{1,d}: normalized lambda form the cone spanned by
// (2,-1,-1) and (1,1,-2); breakpoints are the rays where some delta in Eq(1,d) vanishes.
std::set<OneParam> segment_oracle(int d) {
    std::set<OneParam> out;
    const OneParam a{2, -1, -1}, b{1, 1, -2};
    for (int x = -d; x <= d; ++x)
        for (int y = -d; y <= d; ++y) {
            int z = -x - y;
            if (z < -d || z > d || (x == 0 && y == 0))
                continue;
            long pa = 2L * x - y - z, pb = x + y - 2L * z;
            // s*pa + u*pb = 0 with s,u >= 0 not both zero
            long s, u;
            if (pa == 0 && pb == 0)
                continue;
            if (pa == 0) {
                s = 1;
                u = 0;
            } else if (pb == 0) {
                s = 0;
                u = 1;
            } else if ((pa > 0) != (pb > 0)) {
                s = std::abs(pb);
                u = std::abs(pa);
            } else {
                continue;
            }
            OneParam lam{s * a[0] + u * b[0], s * a[1] + u * b[1], s * a[2] + u * b[2]};
            long g = std::gcd(std::gcd(std::abs(lam[0]), std::abs(lam[1])), std::abs(lam[2]));
            for (auto& e : lam)
                e /= g;
            out.insert(lam);
        }
    return out;
}

Rational max_over_box(const Tuple& tup, const Weights& t, int bound) {
    Rational best;
    bool first = true;
    for (int x = -bound; x <= bound; ++x)
        for (int y = -bound; y <= bound; ++y) {
            OneParam lam{x, y, -x - y};
            if (x == 0 && y == 0)
                continue;
            Rational v = mu_t(tup, t, lam);
            if (first || v > best)
                best = v;
            first = false;
        }
    return best;
}

}  // namespace

TEST_CASE("pairing and mu examples") {
    CHECK(pairing({0, 0, 4}, {2, -1, -1}) == -4);
    CHECK(pairing({4, 0, 0}, {2, -1, -1}) == 8);
    CHECK(pairing({1, 1, 1}, {5, -2, -3}) == 0);
    CHECK_THROWS(pairing({1, 1}, {1, -1, 0}));
    Support full;
    full.degree = 4;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j)
            full.monomials.insert({i, j, 4 - i - j});
    CHECK(full.monomials.size() == 15);
    CHECK(mu(full, {2, -1, -1}) == -4);
    CHECK(mu(Support::of(P("x0^4")), {2, -1, -1}) == 8);
    CHECK(mu(Support::of(P("x2")), {2, -1, -1}) == -1);
    CHECK_THROWS(mu(Support{}, {2, -1, -1}));
}

TEST_CASE("mu_t examples") {
    CHECK(mu_t(T("x0^4", {"x1", "x2"}), W({4, 4}), {2, -1, -1}) == 0);
    Tuple q = T("x2^4", {"x0", "x2"});
    for (int t1 = 0; t1 <= 4; ++t1)
        for (int t2 = 0; t2 <= 4; ++t2)
            CHECK(mu_t(q, W({t1, t2}), {2, -1, -1}) == -4 + 2 * t1 - t2);
    Tuple g = T("x0^3*x1 + x2^4", {"x0+x1", "x2"});
    CHECK(mu_t(g, W({0, 0}), {2, -1, -1}) == mu(g.hypersurface, {2, -1, -1}));
    CHECK_THROWS(mu_t(g, W({1}), {2, -1, -1}));
}

TEST_CASE("fundamental set for small degree") {
    auto s11 = fundamental_set(1, 1);
    CHECK(s11 == std::vector<OneParam>{{1, 1, -2}, {2, -1, -1}});
    CHECK_THROWS_AS(fundamental_set(3, 2), std::domain_error);
    for (int d = 1; d <= 8; ++d) {
        auto s = fundamental_set(1, d);
        std::set<OneParam> got(s.begin(), s.end());
        CHECK(got == segment_oracle(d));
        for (auto& lam : s) {
            CHECK(is_normalized(lam));
            CHECK(std::gcd(std::gcd(std::abs(lam[0]), std::abs(lam[1])), std::abs(lam[2])) == 1);
        }
    }
}

TEST_CASE("fundamental sets grow with the degree") {
    for (int d = 1; d <= 7; ++d) {
        auto a = fundamental_set(1, d), b = fundamental_set(1, d + 1);
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
    for (int d = 1; d <= 2; ++d) {
        auto a = fundamental_set(2, d), b = fundamental_set(2, d + 1);
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        for (auto& lam : a)
            CHECK(is_normalized(lam));
    }
}

TEST_CASE("torus_worst examples") {
    auto w = torus_worst(T("x0^4", {"x1", "x2"}), W({4, 4}));
    CHECK(w.value == 0);
    auto q = torus_worst(T("x2^4", {"x0", "x2"}), W({0, 0}));
    CHECK(q.value > 0);
    auto g = torus_worst(T("x0^4 + x1^4 + x2^4 + x0*x1*x2^2", {"x0+x1+x2", "x0-x1+2*x2"}), W({1, 1}));
    CHECK(g.value < 0);
}

TEST_CASE("torus_worst sign agrees with a brute-force box search") {
    int bound = 0;
    for (auto& lam : fundamental_set(1, 4))
        for (auto x : lam)
            bound = std::max<int>(bound, static_cast<int>(std::abs(x)));
    for (int trial = 0; trial < 60; ++trial) {
        Tuple tup = random_tuple(1, 4, static_cast<int>(uniform(0, 2)));
        Weights t = random_weights(tup.k());
        Rational a = torus_worst(tup, t).value;
        Rational b = max_over_box(tup, t, bound);
        CHECK(sgn(a) == sgn(b));
    }
}

TEST_CASE("centroid criterion matches the torus maximum") {
    CHECK(torus_semistable_centroid(T("x0^4", {"x1", "x2"}), W({4, 4})));
    CHECK_FALSE(torus_semistable_centroid(T("x2^4", {"x0", "x2"}), W({0, 0})));
    CHECK(torus_semistable_centroid(T("x0^4+x1^4+x2^4", {"x0", "x1"}), W({0, 0})));
    for (int trial = 0; trial < 150; ++trial) {
        int d = static_cast<int>(uniform(2, 4));
        Tuple tup = random_tuple(1, d, static_cast<int>(uniform(0, 2)));
        Weights t = random_weights(tup.k());
        CHECK(torus_semistable_centroid(tup, t) == (torus_worst(tup, t).value <= 0));
    }
}

TEST_CASE("mu of a power support scales") {
    for (int trial = 0; trial < 50; ++trial) {
        Support s = random_support(3, static_cast<int>(uniform(1, 4)), 5);
        int m = static_cast<int>(uniform(1, 4));
        Support p = power_support(s, Integer(m));
        for (auto& lam : fundamental_set(1, 4))
            CHECK(mu(p, lam) == m * mu(s, lam));
    }
}

TEST_CASE("mu_t is affine in the weights") {
    for (int trial = 0; trial < 40; ++trial) {
        Tuple tup = random_tuple(1, 4, 2);
        Weights a = random_weights(2), b = random_weights(2);
        Rational s = ratio(Integer(uniform(0, 5)), Integer(5));
        Weights c{s * a[0] + (1 - s) * b[0], s * a[1] + (1 - s) * b[1]};
        for (auto& lam : fundamental_set(1, 4))
            CHECK(mu_t(tup, c, lam) == s * mu_t(tup, a, lam) + (1 - s) * mu_t(tup, b, lam));
    }
}

TEST_CASE("torus_worst is invariant under permuting coordinates") {
    for (int trial = 0; trial < 40; ++trial) {
        Tuple tup = random_tuple(1, 4, 2);
        Weights t = random_weights(2);
        std::vector<int> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng());
        RatMatrix p(3, 3);
        for (int i = 0; i < 3; ++i)
            p(i, perm[i]) = 1;
        Tuple moved = transform_tuple(tup, p);
        CHECK(torus_worst(moved, t).value == torus_worst(tup, t).value);
    }
}

TEST_CASE("degeneration identity") {
    Tuple base = T("x0^2*x1*x2 + x1^4", {"x0", "x2"});
    auto d1 = degenerate(base, W({1, 1}), {0, 1});
    CHECK(d1.s0 == 1);
    CHECK(d1.t.empty());
    CHECK(d1.tuple.d() == 6);
    CHECK(d1.tuple.hypersurface == Support::of(P("(x0^2*x1*x2 + x1^4)*x0*x2")));
    auto d2 = degenerate(base, W({Q(1, 2), 1}), {0});
    CHECK(d2.s0 == 2);
    CHECK(d2.t == W({2}));
    CHECK(d2.tuple.hypersurface == Support::of(P("(x0^2*x1*x2 + x1^4)^2*x0")));
    auto d3 = degenerate(base, W({1, 1}), {});
    CHECK(d3.s0 == 1);
    CHECK(d3.tuple == base);
    CHECK_THROWS(degenerate(base, W({0, 1}), {0}));

    for (int trial = 0; trial < 80; ++trial) {
        Tuple tup = random_tuple(1, static_cast<int>(uniform(2, 4)), 2);
        Weights t = random_weights(2);
        std::set<int> I;
        for (int i = 0; i < 2; ++i)
            if (t[i] != 0 && uniform(0, 1))
                I.insert(i);
        auto dg = degenerate(tup, t, I);
        for (auto& lam : weyl_orbit_set(1, 4))
            CHECK(Rational(dg.s0) * mu_t(tup, t, lam) == mu_t(dg.tuple, dg.t, lam));
    }
}

TEST_CASE("stability region") {
    auto r = stab_region(4);
    auto v = r.vertices();
    std::set<Weights> got(v.begin(), v.end());
    CHECK(got == std::set<Weights>{W({0, 0}), W({2, 0}), W({0, 2}), W({4, 4})});
    CHECK(r.contains(W({1, 1})));
    CHECK_FALSE(r.contains(W({5, 0})));
    for (int d = 1; d <= 9; ++d) {
        auto vs = stab_region(d).vertices();
        std::set<Weights> s(vs.begin(), vs.end());
        CHECK(s == std::set<Weights>{W({0, 0}), W({Q(d, 2), 0}), W({0, Q(d, 2)}), W({d, d})});
    }
}

TEST_CASE("candidate walls") {
    auto walls = candidate_walls(1, 4, 2);
    std::set<Wall> ws(walls.begin(), walls.end());
    CHECK(ws.count(normalize_wall({-4, 2, -1})));
    for (auto& w : walls) {
        long g = 0;
        for (auto c : w.coeffs)
            g = std::gcd(g, std::abs(c));
        CHECK(g == 1);
        CHECK((w.coeffs[1] != 0 || w.coeffs[2] != 0));
    }
    // for d = 1 no member of S_{1,1} has a zero entry, so the coordinate edges t_i = 0 cannot occur
    for (int d = 2; d <= 6; ++d) {
        auto wd = candidate_walls(1, d, 2);
        std::set<Wall> s(wd.begin(), wd.end());
        CHECK(s.count(normalize_wall({-d, 2, -1})));
        CHECK(s.count(normalize_wall({-d, -1, 2})));
        CHECK(s.count(normalize_wall({0, 1, 0})));
        CHECK(s.count(normalize_wall({0, 0, 1})));
    }
    CHECK_THROWS(candidate_walls(2, 3, 1, WallFilter::stab_interior));
}

TEST_CASE("filtered wall count matches an exhaustive enumeration") {
    for (int d = 3; d <= 5; ++d) {
        // all (monomial, i1, i2, lambda) combinations, normalized independently
        std::set<std::vector<long>> forms;
        auto lams = fundamental_set(1, d);
        for (int a = 0; a <= d; ++a)
            for (int b = 0; a + b <= d; ++b)
                for (int i1 = 0; i1 < 3; ++i1)
                    for (int i2 = 0; i2 < 3; ++i2)
                        for (auto& lam : lams) {
                            std::vector<long> c{a * lam[0] + b * lam[1] + (d - a - b) * lam[2], lam[i1], lam[i2]};
                            if (c[1] == 0 && c[2] == 0)
                                continue;
                            long g = std::gcd(std::gcd(std::abs(c[0]), std::abs(c[1])), std::abs(c[2]));
                            for (auto& x : c)
                                x /= g;
                            for (auto& x : c)
                                if (x != 0) {
                                    if (x < 0)
                                        for (auto& y : c)
                                            y = -y;
                                    break;
                                }
                            forms.insert(c);
                        }
        // keep a form when it takes both signs on a slightly shrunk copy of the region
        const Rational eps(1, 1000000);
        std::vector<Weights> corners{W({0, 0}), W({Q(d, 2), 0}), W({d, d}), W({0, Q(d, 2)})};
        Weights c{Q(d, 2) * Q(1, 2) + Q(d, 4), Q(d, 2) * Q(1, 2) + Q(d, 4)};
        c = W({Q(3 * d, 8), Q(3 * d, 8)});
        std::size_t expected = 0;
        for (auto& f : forms) {
            bool pos = false, neg = false;
            for (auto& v : corners) {
                Weights p{(1 - eps) * v[0] + eps * c[0], (1 - eps) * v[1] + eps * c[1]};
                Rational val = Rational(f[0]) + Rational(f[1]) * p[0] + Rational(f[2]) * p[1];
                if (val > 0)
                    pos = true;
                if (val < 0)
                    neg = true;
            }
            if (pos && neg)
                ++expected;
        }
        CHECK(candidate_walls(1, d, 2, WallFilter::none).size() == forms.size());
        CHECK(candidate_walls(1, d, 2, WallFilter::stab_interior).size() == expected);
    }
}

TEST_CASE("bound_2gen") {
    auto b = bound_2gen(4, 3, 12, 4, Bound2GenCase::exterior);
    CHECK(b.c0 == Q(-8, 7));
    CHECK(b.c == std::vector<Rational>{1, 1});
    CHECK(bound_2gen(3, 2, 6, 4, Bound2GenCase::exterior).c0 == Q(2, 5));
    CHECK(bound_2gen(1, 1, 2, 4, Bound2GenCase::exterior).c0 == 1);
    auto o = bound_2gen(4, 3, 12, 4, Bound2GenCase::on_l1);
    CHECK(o.c == std::vector<Rational>{Q(-2, 7), 1});
    CHECK_THROWS(bound_2gen(3, 4, 12, 4, Bound2GenCase::exterior));
    CHECK(bound_2gen_witness(4, 3) == OneParam{5, 2, -7});
}

TEST_CASE("moduli dimension") {
    CHECK(moduli_dim(1, 4, 2) == 10);
    CHECK(moduli_dim(1, 5, 1) == 14);
    for (int n = 1; n <= 4; ++n)
        for (int d = 3; d <= 6; ++d) {
            Integer b;
            mpz_bin_uiui(b.get_mpz_t(), n + d + 1, d);
            CHECK(moduli_dim(n, d, 4) == b - n * n);
        }
    CHECK_THROWS(moduli_dim(1, 2, 2));
}

TEST_CASE("unstable certificates") {
    RatMatrix id = RatMatrix::identity(3);
    auto c = unstable_certificate(T("x2^4", {"x0", "x2"}), W({0, 0}), {id});
    REQUIRE(c.has_value());
    CHECK(c->value > 0);
    auto s = unstable_certificate(T("x0^4", {"x1", "x2"}), W({4, 4}), {id});
    CHECK_FALSE(s.has_value());
    auto ns = unstable_certificate(T("x0^4", {"x1", "x2"}), W({4, 4}), {id}, CertificateMode::non_stable);
    REQUIRE(ns.has_value());
    CHECK(ns->value == 0);
    RatMatrix sing(3, 3);
    CHECK_THROWS_AS(unstable_certificate(T("x0^4", {"x1", "x2"}), W({1, 1}), {sing}), SingularMatrixError);

    // the first flag spreads the support of x2^4 over all quartic monomials
    RatMatrix spread{{1, 0, 0}, {0, 1, 0}, {1, 1, 1}};
    auto second = unstable_certificate(T("x2^4", {"x0", "x1"}), W({0, 0}), {spread, id});
    REQUIRE(second.has_value());
    CHECK(second->flag_index == 1);
}

TEST_CASE("two-generator witness destabilizes below the bound") {
    struct G {
        long w1, w2, wdeg;
        int d;
    };
    for (G g : {G{1, 1, 2, 4}, G{2, 1, 2, 4}, G{3, 2, 6, 4}, G{4, 3, 12, 4}, G{2, 1, 4, 4}, G{1, 1, 3, 4},
                G{5, 4, 20, 5}, G{5, 2, 10, 5}}) {
        long a = g.wdeg / g.w1, b = g.wdeg / g.w2;
        for (auto kind : {Bound2GenCase::exterior, Bound2GenCase::on_l1}) {
            Tuple tup;
            tup.n = 1;
            tup.hypersurface.degree = g.d;
            tup.hypersurface.monomials = {{a, 0, g.d - a}, {0, b, g.d - b}};
            Support full_line{1, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
            Support on_line{1, {{1, 0, 0}, {0, 1, 0}}};
            tup.hyperplanes = {kind == Bound2GenCase::exterior ? full_line : on_line, full_line};
            HalfPlane h = bound_2gen(g.w1, g.w2, g.wdeg, g.d, kind);
            OneParam lam = bound_2gen_witness(g.w1, g.w2);
            long gg = std::gcd(std::gcd(std::abs(lam[0]), std::abs(lam[1])), std::abs(lam[2]));
            for (auto& x : lam)
                x /= gg;
            for (int i = 0; i <= 2 * g.d; ++i)
                for (int j = 0; j <= 2 * g.d; ++j) {
                    Weights t{Q(i, 2), Q(j, 2)};
                    if (!stab_region(g.d).contains(t))
                        continue;
                    Rational direct = mu_t(tup, t, lam);
                    CHECK(direct * Rational(gg) == -Rational(g.w1 + g.w2) * h.eval(t));
                    if (h.eval(t) < 0) {
                        auto c = unstable_certificate(tup, t, {RatMatrix::identity(3)});
                        REQUIRE(c.has_value());
                        CHECK(std::find(c->destabilizers.begin(), c->destabilizers.end(), lam) !=
                              c->destabilizers.end());
                    }
                }
        }
    }
}

TEST_CASE("polynomial parsing") {
    Polynomial p = P("(x0*x2 - x1^2)^2");
    CHECK(p.homogeneous_degree() == 4);
    CHECK(p.terms().size() == 3);
    CHECK(P("x1*x2*(x2-x1)*(x2-a*x1)").terms().size() == 3);
    CHECK(P("2x0 - x0 - x0").is_zero());
    CHECK(P("x0/2 + x0/2") == P("x0"));
    CHECK_THROWS(P("x3"));
    CHECK_THROWS(P("x0 +"));
    CHECK_THROWS(P("b*x0"));
    CHECK_THROWS(P("x0/x1"));
    CHECK_THROWS(tuple_from_polynomials(1, P("x0 - x0"), {}));
    CHECK_THROWS(tuple_from_polynomials(1, P("x0^2 + x1"), {}));
    CHECK(parse_polynomial(P("x0*x1^2 - 3/2*x2^3").str(), 3) == P("x0*x1^2 - 3/2*x2^3"));
}
