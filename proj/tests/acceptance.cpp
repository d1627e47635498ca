// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any line fails.
#include "support.hpp"
#include "vgitk3/casebook.hpp"
#include "vgitk3/discforms.hpp"
#include "vgitk3/fqm.hpp"
#include "vgitk3/lattice.hpp"
#include "vgitk3/vgit.hpp"
#include "vgitk3/vinberg.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>

using namespace vgitk3;
using namespace testsupport;
using vgit::OneParam;
using vgit::Support;
using vgit::Tuple;
using vgit::Weights;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
};

std::int64_t max_height() {
    const char* s = std::getenv("MAX_HEIGHT");
    return s && *s ? std::strtoll(s, nullptr, 10) : 30;
}

// ---- C1 ----

Outcome c1() {
    auto cb = casebook::Casebook::standard();
    lattice::Lattice m = casebook::lattice_M(cb);
    Integer det = determinant(m.gram);
    RatMatrix inv = rational_inverse(m.gram);
    const auto& printed = cb.get("gm_inv2").ints;  // 2 G_M^{-1} as printed
    std::size_t bad = 0;
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            if (inv(i, j) * 2 != Rational(Integer(std::to_string(printed.at(10 * i + j)))))
                ++bad;
    // the inverse also has to be a two-sided inverse
    RatMatrix prod = to_rational(m.gram) * inv;
    bool ident = prod == RatMatrix::identity(10);
    return {det == -64 && bad == 0 && ident,
            "det(G_M) = " + det.get_str() + ", " + std::to_string(bad) + " of 100 entries differ from the printed inverse"};
}

// ---- C2 ----

Outcome c2() {
    auto cb = casebook::Casebook::standard();
    lattice::Lattice m = casebook::lattice_M(cb);
    Signature s = signature(m.gram);
    auto diag = snf(m.gram).diagonal();
    std::size_t twos = 0, ones = 0;
    for (const auto& x : diag)
        twos += x == 2, ones += x == 1;
    FQM a = discforms::labeled_discriminant(m, {0, 2, 3, 6, 7, 9}, discforms::am_labels());
    // coordinates (a, b, c, d, e, f) on gamma*, alpha1*, alpha2*, beta1*, beta2*, xi*
    auto formula = [](const FQM::Element& x) {
        Integer a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5];
        Integer v2 = 2 * (b * b + c * c + b * c + d * d + e * e + d * e + (a + b + c + d + e) * f) - f * f;
        return Rational(v2, 2);
    };
    std::size_t bad = 0, count = 0;
    for (const auto& x : a.elements()) {
        ++count;
        if (mod_rational(formula(x) - a.q(x), 2) != 0)
            ++bad;
    }
    bool ok = s.plus == 1 && s.minus == 9 && s.zero == 0 && twos == 6 && ones == 4 && a.size() == 64 &&
              count == 64 && bad == 0;
    return {ok, "signature (" + std::to_string(s.plus) + "," + std::to_string(s.minus) + "), SNF has " +
                    std::to_string(twos) + " entries 2 and " + std::to_string(ones) + " entries 1, |A_M| = " +
                    std::to_string(a.size()) + ", q_M formula mismatches on " + std::to_string(bad) + " of " +
                    std::to_string(count) + " elements"};
}

// ---- C3 ----

Outcome c3() {
    auto cb = casebook::Casebook::standard();
    lattice::Lattice m = casebook::lattice_M(cb);
    FQM a = discforms::labeled_discriminant(m, {0, 2, 3, 6, 7, 9}, discforms::am_labels());
    auto iso = isotropic_elements(a);
    std::set<FQM::Element> got(iso.begin(), iso.end()), listed;
    listed.insert(discforms::am_element(a, "0"));
    listed.insert(discforms::am_element(a, "gamma*"));
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            std::string s = "alpha" + std::to_string(i) + "*+beta" + std::to_string(j) + "*";
            listed.insert(discforms::am_element(a, s));
            listed.insert(discforms::am_element(a, s + "+gamma*"));
        }
    std::vector<std::uint64_t> idx;
    for (const auto& x : iso)
        idx.push_back(a.index(x));
    std::sort(idx.begin(), idx.end());
    std::size_t orbits[2], orders[2];
    bool inj[2];
    for (int w = 0; w < 2; ++w) {
        std::vector<FQMIsometry> gens;
        for (const auto& s : discforms::standard_generators(w == 1))
            gens.push_back(discforms::build_action(a, s));
        auto g = group_closure(a, gens);
        orders[w] = g.order();
        orbits[w] = vgitk3::orbits(g, idx).size();
        inj[w] = injectivity_check(w ? 1152 : 576, a, gens);
    }
    bool ok = iso.size() == 20 && got == listed && orbits[0] == 3 && orbits[1] == 3 && orders[0] == 576 &&
              orders[1] == 1152 && inj[0] && inj[1];
    return {ok, std::to_string(iso.size()) + " isotropic elements, equal to the listed set: " +
                    (got == listed ? "yes" : "no") + "; orbits " + std::to_string(orbits[0]) + "/" +
                    std::to_string(orbits[1]) + "; images of order " + std::to_string(orders[0]) + "/" +
                    std::to_string(orders[1]) + ", injective " + (inj[0] && inj[1] ? "yes" : "no")};
}

// ---- C4 ----

Outcome c4() {
    auto cb = casebook::Casebook::standard();
    lattice::Lattice m = casebook::lattice_M(cb), t = casebook::lattice_T(cb);
    auto L = [](const char* e) { return lattice::parse_named(e); };
    std::vector<std::pair<lattice::Lattice, lattice::Lattice>> pairs{
        {m, L("U(2)+A1^2+D6")},
        {L("U+U(2)+A1^2+D6"), L("U+U+A1^4+D4")},
        {L("U+A1^4+D4"), L("U(2)+A1^2+D6")},
        {L("U+D4+D4"), L("U(2)+D8")},
        {L("U+A1^2+D6"), L("U(2)+A1+E7")},
        {t, L("U+U(2)+A1^2+D6")},
    };
    std::size_t equal = 0;
    for (const auto& [x, y] : pairs)
        equal += lattice::same_2elem_genus(x, y);
    auto ti = lattice::two_elem_invariants(t);
    auto mi = lattice::two_elem_invariants(m);
    // (A_T, q_T) must be the negative of (A_M, q_M): same length, opposite q-signatures
    int qm = q_signature_mod8(lattice::discriminant_group(m)).value;
    int qt = q_signature_mod8(lattice::discriminant_group(t)).value;
    bool comp = ti.sig.plus == 2 && ti.sig.minus == 10 && ti.ell == 6 && ti.ell == mi.ell && (qm + qt) % 8 == 0 &&
                mi.sig.plus + ti.sig.plus == 3 && mi.sig.minus + ti.sig.minus == 19;
    return {equal == pairs.size() && comp, std::to_string(equal) + " of " + std::to_string(pairs.size()) +
                                               " genus equalities hold; T has signature (" +
                                               std::to_string(ti.sig.plus) + "," + std::to_string(ti.sig.minus) +
                                               "), l = " + std::to_string(ti.ell) + ", q-signatures " +
                                               std::to_string(qm) + " and " + std::to_string(qt)};
}

// ---- C5 ----

Outcome c5() {
    auto cb = casebook::Casebook::standard();
    auto ls = casebook::constructed_lattices(cb);
    std::size_t ok = 0;
    std::string bad;
    for (const auto& l : ls) {
        Signature s = signature(l.gram);
        int sig = ((static_cast<int>(s.plus) - static_cast<int>(s.minus)) % 8 + 8) % 8;
        auto q = q_signature_mod8(lattice::discriminant_group(l));
        if (q.exact && q.value == sig)
            ++ok;
        else
            bad += " " + l.name;
    }
    return {ok == ls.size() && !ls.empty(),
            std::to_string(ok) + " of " + std::to_string(ls.size()) + " constructed lattices satisfy Milgram" +
                (bad.empty() ? "" : "; failing:" + bad)};
}

// ---- C6 ----

Outcome c6() {
    struct Job {
        const char* expr;
        std::set<std::string> expect;
    };
    const std::string P = "\xE2\x8A\xA5";
    std::vector<Job> jobs{
        {"U+A1^4+D4", {"A_1^4" + P + "D_4", "A_1^2" + P + "D_6", "D_4" + P + "D_4"}},
        {"U+D4^2", {"D_4" + P + "D_4", "D_8"}},
        {"U+A1^2+D6", {"A_1^2" + P + "D_6", "A_1" + P + "E_7", "D_8"}},
    };
    std::set<std::string> expected_union{"A_1^4" + P + "D_4", "A_1^2" + P + "D_6", "A_1" + P + "E_7",
                                         "D_4" + P + "D_4", "D_8"};
    std::set<std::string> all;
    bool ok = true;
    std::string detail;
    for (const auto& j : jobs) {
        lattice::Lattice l = lattice::parse_named(j.expr);
        IntVector h(l.rank(), Integer(0));
        h[0] = h[1] = 1;
        vinberg::HyperbolicLattice hl(l);
        std::set<std::string> labels;
        std::string height = "-";
        try {
            auto c = vinberg::classify_isotropic(hl, h, max_height());
            labels.insert(c.labels.begin(), c.labels.end());
            height = c.run.last_height.get_str();
        } catch (const std::runtime_error&) {
            ok = false;
        }
        bool inc = std::includes(labels.begin(), labels.end(), j.expect.begin(), j.expect.end());
        ok = ok && inc;
        all.insert(labels.begin(), labels.end());
        detail += std::string(j.expr) + ": " + std::to_string(labels.size()) + " labels, stop height " + height +
                  (inc ? "" : " (missing expected labels)") + "; ";
    }
    ok = ok && all == expected_union;
    std::string u;
    for (const auto& s : all)
        u += (u.empty() ? "" : ", ") + s;
    return {ok, detail + "union {" + u + "}"};
}

// ---- C7 ----

Outcome c7() {
    auto r = vgit::stab_region(4);
    auto v = r.vertices();
    std::set<Weights> got(v.begin(), v.end());
    std::set<Weights> want{{0, 0}, {2, 0}, {0, 2}, {4, 4}};
    bool mem = r.contains({1, 1});
    Integer dim = vgit::moduli_dim(1, 4, 2);
    return {got == want && v.size() == 4 && mem && dim == 10,
            std::to_string(v.size()) + " vertices, equal to {(0,0),(2,0),(0,2),(4,4)}: " + (got == want ? "yes" : "no") +
                "; (1,1) in Stab: " + (mem ? "yes" : "no") + "; moduli_dim(1,4,2) = " + dim.get_str()};
}

// ---- C8 ----

// S_{1,d} from its defining property: primitive normalized lambda on which some
// nonzero delta with |delta_i| <= d and sum zero vanishes, enumerated in a box.
std::set<OneParam> s_oracle(int d) {
    std::set<OneParam> out;
    int box = 12 * d + 2;
    for (int x = -box; x <= box; ++x)
        for (int y = -box; y <= x; ++y) {
            int z = -x - y;
            if (z > y || (x == 0 && y == 0))
                continue;
            if (std::gcd(std::gcd(std::abs(x), std::abs(y)), std::abs(z)) != 1)
                continue;
            // lambda lies on a ray of the chamber decomposition: it is orthogonal to some delta
            // and the delta-hyperplanes through it give a one-dimensional solution space
            bool hit = false;
            for (int a = -d; a <= d && !hit; ++a)
                for (int b = -d; b <= d && !hit; ++b) {
                    int c = -a - b;
                    if (c < -d || c > d || (a == 0 && b == 0))
                        continue;
                    hit = a * x + b * y + c * z == 0;
                }
            if (hit)
                out.insert({x, y, z});
        }
    return out;
}

Integer mu_direct(const Support& s, const OneParam& lam) {
    bool first = true;
    std::int64_t best = 0;
    for (const auto& m : s.monomials) {
        std::int64_t v = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            v += m[i] * lam[i];
        if (first || v < best)
            best = v;
        first = false;
    }
    return best;
}

Rational mu_t_direct(const Tuple& tup, const Weights& t, const OneParam& lam) {
    Rational v = mu_direct(tup.hypersurface, lam);
    for (std::size_t i = 0; i < t.size(); ++i)
        v += t[i] * Rational(mu_direct(tup.hyperplanes[i], lam));
    return v;
}

Support random_support(int nvars, int deg, int max_terms) {
    Support s;
    s.degree = deg;
    int terms = static_cast<int>(uniform(1, max_terms));
    for (int i = 0; i < terms; ++i) {
        vgitk3::Exponent e(nvars, 0);
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

Tuple random_tuple(int d, int k) {
    Tuple t;
    t.n = 1;
    t.hypersurface = random_support(3, d, 5);
    for (int i = 0; i < k; ++i)
        t.hyperplanes.push_back(random_support(3, 1, 3));
    return t;
}

Weights random_weights(int k) {
    Weights t;
    for (int i = 0; i < k; ++i)
        t.push_back(ratio(Integer(uniform(0, 12)), Integer(uniform(1, 4))));
    return t;
}

Outcome c8() {
    bool s11 = vgit::fundamental_set(1, 1) == std::vector<OneParam>{{1, 1, -2}, {2, -1, -1}};
    bool nested = true, oracle_eq = true;
    for (int d = 1; d <= 4; ++d) {
        auto a = vgit::fundamental_set(1, d), b = vgit::fundamental_set(1, d + 1);
        nested = nested && std::includes(b.begin(), b.end(), a.begin(), a.end());
        oracle_eq = oracle_eq && std::set<OneParam>(a.begin(), a.end()) == s_oracle(d);
    }
    // every coordinate permutation of the oracle set
    std::set<OneParam> orbit;
    for (auto lam : s_oracle(4)) {
        std::sort(lam.begin(), lam.end());
        do
            orbit.insert(lam);
        while (std::next_permutation(lam.begin(), lam.end()));
    }
    std::size_t agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Tuple tup = random_tuple(4, static_cast<int>(uniform(0, 2)));
        Weights t = random_weights(tup.k());
        Rational best;
        bool first = true;
        for (const auto& lam : orbit) {
            Rational v = mu_t_direct(tup, t, lam);
            if (first || v > best)
                best = v;
            first = false;
        }
        agree += vgit::torus_worst(tup, t).value == best;
    }
    return {s11 && nested && oracle_eq && agree == 100,
            std::string("S_{1,1} correct: ") + (s11 ? "yes" : "no") + "; nested for d = 1..4: " + (nested ? "yes" : "no") +
                "; equal to the box oracle: " + (oracle_eq ? "yes" : "no") + "; torus_worst agrees on " +
                std::to_string(agree) + " of 100 random quartic tuples (oracle orbit of size " +
                std::to_string(orbit.size()) + ")"};
}

// ---- C9 ----

Outcome c9() {
    std::size_t deg_ok = 0, deg_total = 0;
    while (deg_total < 1000) {
        Tuple tup = random_tuple(static_cast<int>(uniform(1, 4)), 2);
        Weights t = random_weights(2);
        std::set<int> I;
        for (int i = 0; i < 2; ++i)
            if (t[i] != 0 && uniform(0, 1))
                I.insert(i);
        auto dg = vgit::degenerate(tup, t, I);
        for (int s = 0; s < 10; ++s) {
            std::int64_t x = uniform(-9, 9), y = uniform(-9, 9);
            OneParam lam{x, y, -x - y};
            ++deg_total;
            deg_ok += Rational(dg.s0) * mu_t_direct(tup, t, lam) == mu_t_direct(dg.tuple, dg.t, lam);
        }
    }
    std::size_t cen_ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Tuple tup = random_tuple(static_cast<int>(uniform(2, 4)), static_cast<int>(uniform(0, 2)));
        Weights t = random_weights(tup.k());
        cen_ok += vgit::torus_semistable_centroid(tup, t) == (vgit::torus_worst(tup, t).value <= 0);
    }
    return {deg_ok == deg_total && cen_ok == 200,
            "degeneration identity on " + std::to_string(deg_ok) + " of " + std::to_string(deg_total) +
                " samples; centroid criterion agrees on " + std::to_string(cen_ok) + " of 200 tuples"};
}

// ---- C10 ----

Outcome c10() {
    auto cb = casebook::Casebook::standard();
    Weights t{1, 1};
    std::size_t zero = 0, total = 0;
    std::string detail, off;
    for (const auto& name : casebook::bd11_names()) {
        const auto& f = cb.get(name);
        std::string sv, wv;
        for (const auto& a : casebook::a_samples()) {
            Tuple tup = casebook::bd11_tuple(f, a);
            Rational s = casebook::worst_over_S(tup, t);
            Rational w = vgit::torus_worst(tup, t).value;
            ++total;
            zero += s == 0;
            sv += (sv.empty() ? "" : ",") + to_string(s);
            wv += (wv.empty() ? "" : ",") + to_string(w);
        }
        std::string label = name.substr(name.find('_') + 1);
        if (sv != "0,0,0" || wv != "0,0,0")
            off += " " + label + " S:{" + sv + "} W.S:{" + wv + "}";
    }
    detail = std::to_string(zero) + " of " + std::to_string(total) + " (tuple, a) samples have max mu_t = 0 over S_{1,4}";
    if (!off.empty())
        detail += "; nonzero:" + off;
    return {zero == total, detail};
}

// ---- C11 ----

Outcome c11() {
    struct G {
        long w1, w2, wdeg;
        int d;
    };
    std::size_t violated = 0, witnessed = 0, formula = 0, points = 0;
    std::vector<G> grid{{4, 3, 12, 4}, {1, 1, 2, 4}, {2, 1, 2, 4}, {3, 2, 6, 4}, {2, 1, 4, 4},
                        {1, 1, 3, 4}, {3, 1, 3, 4}, {5, 4, 20, 5}, {5, 2, 10, 5}, {3, 2, 6, 6}};
    for (G g : grid) {
        long a = g.wdeg / g.w1, b = g.wdeg / g.w2;
        for (auto kind : {vgit::Bound2GenCase::exterior, vgit::Bound2GenCase::on_l1}) {
            vgit::HalfPlane h;
            try {
                h = vgit::bound_2gen(g.w1, g.w2, g.wdeg, g.d, kind);
            } catch (const std::invalid_argument&) {
                continue;
            }
            Tuple tup;
            tup.n = 1;
            tup.hypersurface.degree = g.d;
            tup.hypersurface.monomials = {{a, 0, g.d - a}, {0, b, g.d - b}};
            Support full_line{1, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
            Support on_line{1, {{1, 0, 0}, {0, 1, 0}}};
            tup.hyperplanes = {kind == vgit::Bound2GenCase::exterior ? full_line : on_line, full_line};
            OneParam lam = vgit::bound_2gen_witness(g.w1, g.w2);
            OneParam expect{2 * g.w1 - g.w2, 2 * g.w2 - g.w1, -g.w1 - g.w2};
            formula += lam == expect;
            long gg = std::gcd(std::gcd(std::abs(lam[0]), std::abs(lam[1])), std::abs(lam[2]));
            for (auto& x : lam)
                x /= gg;
            for (int i = 0; i <= 2 * g.d; ++i)
                for (int j = 0; j <= 2 * g.d; ++j) {
                    Weights t{Q(i, 2), Q(j, 2)};
                    if (!vgit::stab_region(g.d).contains(t))
                        continue;
                    ++points;
                    if (h.eval(t) >= 0)
                        continue;
                    ++violated;
                    auto c = vgit::unstable_certificate(tup, t, {RatMatrix::identity(3)});
                    if (c && std::find(c->destabilizers.begin(), c->destabilizers.end(), lam) != c->destabilizers.end() &&
                        mu_t_direct(tup, t, lam) > 0)
                        ++witnessed;
                }
        }
    }
    return {violated > 0 && witnessed == violated && formula > 0,
            "witness formula matched on " + std::to_string(formula) + " cases; bound violated at " +
                std::to_string(violated) + " of " + std::to_string(points) + " grid points, witness certified at " +
                std::to_string(witnessed)};
}

// ---- C12 ----

Outcome c12() {
    auto cb = casebook::Casebook::standard();
    casebook::RunOptions opt;
    opt.max_height = max_height();
    cb.reset_usage();
    auto rep = casebook::run(cb, opt);
    std::size_t used = cb.used().size(), total = cb.fixtures().size();
    std::size_t fails = 0;
    std::string failing;
    for (const auto& l : rep.lines)
        if (!l.pass) {
            ++fails;
            failing += " [" + l.anchor + "]";
        }
    auto muts = casebook::mutation_test(cb, opt);
    std::size_t detected = 0;
    for (const auto& m : muts)
        detected += m.detected;
    bool ok = rep.all_pass() && used == total && !muts.empty() && detected == muts.size();
    return {ok, std::to_string(rep.lines.size() - fails) + " PASS / " + std::to_string(fails) + " FAIL lines" +
                    (failing.empty() ? "" : " (FAIL:" + failing + ")") + "; fixtures exercised " +
                    std::to_string(used) + "/" + std::to_string(total) + "; single-integer mutations detected " +
                    std::to_string(detected) + "/" + std::to_string(muts.size())};
}

}  // namespace

int main() {
    std::vector<Criterion> cs{
        {1, "G_M determinant and printed inverse", 1, c1},
        {2, "signature, A_M via SNF, q_M formula", 1, c2},
        {3, "isotropic elements, orbits, injectivity", 5, c3},
        {4, "2-elementary genus equalities", 1, c4},
        {5, "Milgram consistency", 5, c5},
        {6, "Vinberg runs and the five labels", 600, c6},
        {7, "stability region and moduli dimension", 0, c7},
        {8, "fundamental set and torus_worst oracle", 0, c8},
        {9, "degeneration identity and centroid criterion", 0, c9},
        {10, "boundary tuples strictly semistable at t = (1,1)", 60, c10},
        {11, "two-generator bound witness", 0, c11},
        {12, "casebook all-PASS and mutation detection", 0, c12},
    };
    bool all = true;
    for (const auto& c : cs) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the runtime bound";
        }
        all = all && o.pass;
        char tbuf[64];
        std::snprintf(tbuf, sizeof tbuf, "%.2f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " C" << c.id << " " << c.title << ": " << o.detail << " [" << tbuf
                  << (c.budget_s > 0 ? ", bound " + std::to_string(static_cast<int>(c.budget_s)) + " s" : "") << "]"
                  << std::endl;
    }
    return all ? 0 : 1;
}
