#include "vgitk3/casebook.hpp"

#include "vgitk3/discforms.hpp"
#include "vgitk3/fqm.hpp"
#include "vgitk3/polynomial.hpp"
#include "vgitk3/vinberg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace vgitk3::casebook {

using lattice::Lattice;

namespace {

const std::string PERP = "\xE2\x8A\xA5";

std::vector<std::int64_t> flat(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::int64_t> out;
    for (const auto& r : rows)
        out.insert(out.end(), r.begin(), r.end());
    return out;
}

// [count, (c0 c1 e0 e1 e2) * count] for C, L1, L2 in turn; coefficient = c0 + c1 a
std::vector<std::int64_t> terms(std::initializer_list<std::initializer_list<std::initializer_list<std::int64_t>>> polys) {
    std::vector<std::int64_t> out;
    for (const auto& p : polys) {
        out.push_back(static_cast<std::int64_t>(p.size()));
        for (const auto& t : p)
            out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

std::vector<Fixture> standard_fixtures() {
    std::vector<Fixture> f;
    f.push_back({"gm", "Gram matrix G_M of M in the basis gamma, l1', alpha1..alpha3, l2', beta1..beta3, xi",
                 flat({{-2, 1, 0, 0, 0, 1, 0, 0, 0, 2},
                       {1, -2, 1, 1, 1, 0, 0, 0, 0, 0},
                       {0, 1, -2, 0, 0, 0, 0, 0, 0, 0},
                       {0, 1, 0, -2, 0, 0, 0, 0, 0, 0},
                       {0, 1, 0, 0, -2, 0, 0, 0, 0, 0},
                       {1, 0, 0, 0, 0, -2, 1, 1, 1, 0},
                       {0, 0, 0, 0, 0, 1, -2, 0, 0, 0},
                       {0, 0, 0, 0, 0, 1, 0, -2, 0, 0},
                       {0, 0, 0, 0, 0, 1, 0, 0, -2, 0},
                       {2, 0, 0, 0, 0, 0, 0, 0, 0, 0}}),
                 {}});
    f.push_back({"gm_det", "det(G_M) = -64", {-64}, {}});
    f.push_back({"gm_inv2", "printed inverse of G_M (entries doubled)",
                 flat({{0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                       {0, -4, -2, -2, -2, 0, 0, 0, 0, 2},
                       {0, -2, -2, -1, -1, 0, 0, 0, 0, 1},
                       {0, -2, -1, -2, -1, 0, 0, 0, 0, 1},
                       {0, -2, -1, -1, -2, 0, 0, 0, 0, 1},
                       {0, 0, 0, 0, 0, -4, -2, -2, -2, 2},
                       {0, 0, 0, 0, 0, -2, -2, -1, -1, 1},
                       {0, 0, 0, 0, 0, -2, -1, -2, -1, 1},
                       {0, 0, 0, 0, 0, -2, -1, -1, -2, 1},
                       {1, 2, 1, 1, 1, 2, 1, 1, 1, -1}}),
                 {}});
    f.push_back({"gm_sig", "M has rank 10 and signature (1,9)", {10, 1, 9}, {}});
    // orders, |A_M|, basis indices of gamma*, alpha1*, alpha2*, beta1*, beta2*, xi*
    f.push_back({"am", "A_M = (Z/2)^6 generated by gamma*, alpha1*, alpha2*, beta1*, beta2*, xi*",
                 {2, 2, 2, 2, 2, 2, 64, 0, 2, 3, 6, 7, 9},
                 {}});
    // 2 q_M in the coordinates (a, b, c, d, e, f): coefficients of x_i x_j, i <= j, mod 4
    f.push_back({"qm", "closed formula for q_M(a gamma* + b alpha1* + c alpha2* + d beta1* + e beta2* + f xi*)",
                 {0, 0, 0, 0, 0, 2, 2, 2, 0, 0, 2, 2, 0, 0, 2, 2, 2, 2, 2, 2, -1},
                 {}});
    f.push_back({"h", "h = gamma + xi", {1, 0, 0, 0, 0, 0, 0, 0, 0, 1}, {}});
    // (h,h), (h,l1'), (h,l2'), (h,alpha1..3), (h,beta1..3)
    f.push_back({"h_pairings", "(h,h) = 2, (h,l1') = (h,l2') = 1, (h,alpha_i) = (h,beta_j) = 0",
                 {2, 1, 1, 0, 0, 0, 0, 0, 0}, {}});
    f.push_back({"alpha4_beta4", "alpha4 = xi - 2l1' - alpha1 - alpha2 - alpha3 and beta4 = xi - 2l2' - beta1 - beta2 - beta3",
                 {0, -2, -1, -1, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -2, -1, -1, -1, 1}, {}});
    // coefficients on (gamma, l1', alpha1..alpha4) and (gamma, l2', beta1..beta4)
    f.push_back({"class_h", "h = 2l1' + alpha1 + ... + alpha4 + gamma = 2l2' + beta1 + ... + beta4 + gamma",
                 {1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1}, {}});
    f.push_back({"genus_M", "M is isomorphic to U(2)+A1^2+D6", {}, {"U(2)+A1^2+D6"}});
    // signature of T and its discriminant rank
    f.push_back({"genus_T", "T = U+U(2)+A1^2+D6 of signature (2,10)", {2, 10, 6},
                 {"U+U(2)+A1^2+D6", "U+U+A1^4+D4"}});
    f.push_back({"k3", "signature (3,19) of the K3 lattice", {3, 19}, {}});
    f.push_back({"group_orders", "image of Sigma4 x Sigma4, and of its extension by the swap, in O(q_M)", {576, 1152}, {}});
    {
        Fixture iso{"isotropic", "isotropic elements 0, gamma*, alpha_i*+beta_j*, alpha_i*+beta_j*+gamma*", {20}, {"0", "gamma*"}};
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
                std::string s = "alpha" + std::to_string(i) + "*+beta" + std::to_string(j) + "*";
                iso.texts.push_back(s);
                iso.texts.push_back(s + "+gamma*");
            }
        f.push_back(iso);
    }
    f.push_back({"orbit_counts", "orbits of isotropic elements under Sigma4 x Sigma4 and with the swap", {3, 3}, {}});
    // coordinates (e, f, gamma, l1', alpha1..3, l2', beta1..3, xi) of T = U + M
    f.push_back({"t_vectors", "primitive isotropic vectors v of T with vbar = 0, gamma*, alpha1*+beta1*",
                 flat({{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                       {2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                       {2, 2, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0}}),
                 {"0", "gamma*", "alpha1*+beta1*", "e", "2e+xi", "2e+2f+alpha2+alpha3+beta2+beta3"}});
    f.push_back({"hv_sizes", "H_v is 0 or Z/2", {1, 2, 2}, {}});
    f.push_back({"quotient_genera", "isomorphism classes of v-perp/Zv", {1, 9},
                 {"U+A1^4+D4", "U(2)+A1^2+D6", "U+D4^2", "U(2)+D8", "U+A1^2+D6", "U(2)+A1+E7"}});
    f.push_back({"vinberg", "isotropic classes of v-perp/Zv from Vinberg's algorithm", {3, 2, 3, 5},
                 {"U+A1^4+D4", "U+D4^2", "U+A1^2+D6",
                  "A_1^4" + PERP + "D_4|A_1^2" + PERP + "D_6|D_4" + PERP + "D_4",
                  "D_4" + PERP + "D_4|D_8",
                  "A_1^2" + PERP + "D_6|A_1" + PERP + "E_7|D_8",
                  "A_1^4" + PERP + "D_4|A_1^2" + PERP + "D_6|A_1" + PERP + "E_7|D_4" + PERP + "D_4|D_8"}});
    f.push_back({"git_bb", "GIT boundary and Baily-Borel boundary table", {5, 3},
                 {"II(1)=D_4" + PERP + "D_4", "II(2a1)=A_1" + PERP + "E_7", "II(2a2)=A_1^4" + PERP + "D_4",
                  "II(2b)=A_1^2" + PERP + "D_6", "II(3)=D_8", "III(1)=U+D4^2", "III(2a)=U+A1^2+D6",
                  "III(2b)=U+A1^4+D4"}});
    // d, inequalities c0 + c1 t1 + c2 t2 >= 0, vertices
    f.push_back({"stab", "Stab(1,d,2): 2t1 - t2 - d <= 0, 2t2 - t1 - d <= 0, t1, t2 >= 0, vertices (0,0), (d/2,0), (0,d/2), (d,d)",
                 {4, 4, -2, 1, 4, 1, -2, 0, 1, 0, 0, 0, 1, 0, 0, 2, 0, 0, 2, 4, 4}, {}});
    f.push_back({"moduli_dim", "dimension 10 of the moduli of quartics with two lines", {1, 4, 2, 10}, {}});
    f.push_back({"bd11_III(1)", "boundary tuple III(1)",
                 terms({{{1, 0, 2, 0, 2}, {-2, 0, 1, 2, 1}, {1, 0, 0, 4, 0}}, {{1, 0, 1, 0, 0}}, {{1, 0, 0, 0, 1}}}),
                 {"(x0*x2-x1^2)^2", "x0", "x2"}});
    f.push_back({"bd11_III(2a)", "boundary tuple III(2a)",
                 terms({{{1, 0, 0, 2, 2}}, {{1, 0, 1, 0, 0}}, {{1, 0, 1, 0, 0}}}),
                 {"x1^2*x2^2", "x0", "x0"}});
    f.push_back({"bd11_III(2b)", "boundary tuple III(2b)",
                 terms({{{1, 0, 1, 2, 1}}, {{1, 0, 1, 0, 0}}, {{1, 0, 0, 0, 1}}}),
                 {"x0*x1^2*x2", "x0", "x2"}});
    f.push_back({"bd11_II(1)", "boundary tuple II(1)",
                 terms({{{1, 0, 2, 0, 2}, {-1, -1, 1, 2, 1}, {0, 1, 0, 4, 0}}, {{1, 0, 1, 0, 0}}, {{1, 0, 0, 0, 1}}}),
                 {"(x0*x2-x1^2)*(x0*x2-a*x1^2)", "x0", "x2"}});
    f.push_back({"bd11_II(2a1)", "boundary tuple II(2a1)",
                 terms({{{1, 0, 0, 1, 3}, {-1, -1, 0, 2, 2}, {0, 1, 0, 3, 1}}, {{1, 0, 1, 0, 0}}, {{1, 0, 1, 0, 0}}}),
                 {"x1*x2*(x2-x1)*(x2-a*x1)", "x0", "x0"}});
    f.push_back({"bd11_II(2a2)", "boundary tuple II(2a2)",
                 terms({{{1, 0, 1, 0, 3}, {-1, -1, 1, 1, 2}, {0, 1, 1, 2, 1}}, {{1, 0, 1, 0, 0}}, {{1, 0, 0, 1, 0}}}),
                 {"x0*x2*(x2-x1)*(x2-a*x1)", "x0", "x1"}});
    f.push_back({"bd11_II(2b1)", "boundary tuple II(2b1)",
                 terms({{{1, 0, 2, 0, 2}, {-1, -1, 2, 1, 1}, {0, 1, 2, 2, 0}}, {{1, 0, 0, 1, 0}}, {{1, 0, 0, 0, 1}}}),
                 {"x0^2*(x2-x1)*(x2-a*x1)", "x1", "x2"}});
    f.push_back({"bd11_II(2b2)", "boundary tuple II(2b2)",
                 terms({{{1, 0, 1, 0, 3}, {-1, -1, 1, 1, 2}, {0, 1, 1, 2, 1}}, {{1, 0, 0, 1, 0}}, {{1, 0, 1, 0, 0}}}),
                 {"x0*x2*(x2-x1)*(x2-a*x1)", "x1", "x0"}});
    f.push_back({"bd11_II(3)", "boundary tuple II(3)",
                 terms({{{1, 0, 2, 0, 2}, {-2, 0, 1, 2, 1}, {1, 0, 0, 4, 0}},
                        {{1, 0, 0, 1, 0}},
                        {{0, 1, 1, 0, 0}, {-1, -1, 0, 1, 0}, {1, 0, 0, 0, 1}}}),
                 {"(x0*x2-x1^2)^2", "x1", "a*x0-(a+1)*x1+x2"}});
    // t1, t2, expected maximum of mu_t
    f.push_back({"bd11_common", "boundary tuples are strictly semistable at t = (1,1)", {1, 1, 0}, {}});
    // s0 and the degree of the product for I = {1, 2}
    f.push_back({"degeneration", "tuple degeneration s0 mu_t = mu_t' on C + L1 + L2", {1, 6}, {}});
    f.push_back({"pair_gram", "Gram matrix of the sublattices spanned by l1', gamma, alpha1..alpha4 and l2', gamma, beta1..beta4",
                 flat({{-2, 1, 1, 1, 1, 1},
                       {1, -2, 0, 0, 0, 0},
                       {1, 0, -2, 0, 0, 0},
                       {1, 0, 0, -2, 0, 0},
                       {1, 0, 0, 0, -2, 0},
                       {1, 0, 0, 0, 0, -2}}),
                 {}});
    return f;
}

IntMatrix square(const std::vector<std::int64_t>& v, std::size_t n, std::size_t offset = 0) {
    if (v.size() < offset + n * n)
        throw std::invalid_argument("fixture too short");
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = v[offset + i * n + j];
    return m;
}

IntVector slice(const std::vector<std::int64_t>& v, std::size_t offset, std::size_t n) {
    if (v.size() < offset + n)
        throw std::invalid_argument("fixture too short");
    IntVector out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(v[offset + i]);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <class T>
std::string join(const T& items, const std::string& sep) {
    std::string out;
    for (const auto& x : items)
        out += (out.empty() ? "" : sep) + x;
    return out;
}

std::string vec_str(const IntVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

class Ctx {
public:
    Ctx(const Casebook& cb, Report& r, int check) : cb_(cb), r_(r), check_(check) {}
    const Fixture& use(const std::string& name) {
        const Fixture& f = cb_.get(name);
        r_.consumed[check_].insert(name);
        anchors_.push_back(f.anchor);
        return f;
    }
    void expect(const Fixture& f, bool ok, const std::string& detail) {
        r_.lines.push_back({check_, ok, f.anchor, detail});
    }
    void note(const std::string& s) { r_.notes.push_back("[" + std::to_string(check_) + "] " + s); }
    void fail_all(const std::string& what) {
        std::vector<std::string> seen;
        for (const auto& a : anchors_) {
            if (std::find(seen.begin(), seen.end(), a) != seen.end())
                continue;
            seen.push_back(a);
            r_.lines.push_back({check_, false, a, "exception: " + what});
        }
        if (anchors_.empty())
            r_.lines.push_back({check_, false, "casebook", "exception: " + what});
    }

private:
    const Casebook& cb_;
    Report& r_;
    int check_;
    std::vector<std::string> anchors_;
};

// "2e+xi" style sums over the basis names of T
IntVector t_expression(const std::string& text) {
    static const std::vector<std::string> names{"e", "f", "gamma", "l1'", "alpha1", "alpha2", "alpha3",
                                                "l2'", "beta1", "beta2", "beta3", "xi"};
    IntVector v(names.size(), Integer(0));
    for (const auto& part : split(text, '+')) {
        std::size_t k = 0;
        while (k < part.size() && std::isdigit(static_cast<unsigned char>(part[k])))
            ++k;
        Integer coef = k == 0 ? Integer(1) : Integer(part.substr(0, k));
        auto it = std::find(names.begin(), names.end(), part.substr(k));
        if (it == names.end())
            throw std::invalid_argument("unknown basis name in '" + text + "'");
        v[static_cast<std::size_t>(it - names.begin())] += coef;
    }
    return v;
}

Lattice m_from(const Fixture& gm) { return {"M", square(gm.ints, 10), {}}; }

Lattice t_from(const Lattice& m) {
    Lattice t = lattice::direct_sum(lattice::parse_named("U"), m);
    t.name = "T";
    return t;
}

FQM labeled_am(const Lattice& m, const Fixture& am, std::size_t shift = 0) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 7; i < 13; ++i) {
        if (i >= am.ints.size() || am.ints[i] < 0)
            throw std::invalid_argument("bad dual index");
        idx.push_back(static_cast<std::size_t>(am.ints[i]) + shift);
    }
    return discforms::labeled_discriminant(m, idx, discforms::am_labels());
}

std::vector<FQMIsometry> actions(const FQM& am, bool with_swap) {
    std::vector<FQMIsometry> g;
    for (const auto& s : discforms::standard_generators(with_swap))
        g.push_back(discforms::build_action(am, s));
    return g;
}

// ---- checks ----

void check1(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& det = c.use("gm_det");
    const auto& inv = c.use("gm_inv2");
    Lattice m = m_from(gm);
    m.validate();
    Integer d = determinant(m.gram);
    c.expect(det, d == det.ints.at(0), "det(G_M) = " + d.get_str());
    RatMatrix gi = rational_inverse(m.gram);
    IntMatrix printed = square(inv.ints, 10);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            if (gi(i, j) * 2 != Rational(printed(i, j)))
                ++bad;
    c.expect(inv, bad == 0, "G_M^-1 equals the printed matrix entry-for-entry (" + std::to_string(bad) + " mismatches)");
    c.expect(gm, m.even() && bad == 0, "G_M is even and inverts to the printed matrix");
}

void check2(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& sig = c.use("gm_sig");
    const auto& am = c.use("am");
    const auto& qm = c.use("qm");
    Lattice m = m_from(gm);
    Signature s = signature(m.gram);
    c.expect(sig, m.rank() == std::size_t(sig.ints.at(0)) && s.plus == std::size_t(sig.ints.at(1)) &&
                      s.minus == std::size_t(sig.ints.at(2)) && s.zero == 0,
             "rank " + std::to_string(m.rank()) + ", signature " + lattice::signature_str(s));
    FQM a = labeled_am(m, am);
    bool orders = a.orders().size() == 6;
    for (std::size_t i = 0; i < a.orders().size() && i < 6; ++i)
        orders = orders && a.orders()[i] == am.ints.at(i);
    c.expect(am, orders && a.size() == std::uint64_t(am.ints.at(6)),
             "|A_M| = " + std::to_string(a.size()) + ", 2-elementary of length " + std::to_string(a.orders().size()));
    // l1'*, l2'* vanish, alpha3* = gamma* + alpha1* + alpha2*, beta3* = gamma* + beta1* + beta2*
    RatMatrix gi = rational_inverse(m.gram);
    bool rel = a.class_of(gi.col(1)) == a.zero() && a.class_of(gi.col(5)) == a.zero() &&
               a.class_of(gi.col(4)) == discforms::am_element(a, "alpha3*") &&
               a.class_of(gi.col(8)) == discforms::am_element(a, "beta3*");
    c.expect(am, rel, std::string("l1'* = l2'* = 0, alpha3* = gamma*+alpha1*+alpha2*, beta3* = gamma*+beta1*+beta2*: ") +
                          (rel ? "yes" : "no"));
    if (qm.ints.size() != 21)
        throw std::invalid_argument("q_M formula needs 21 coefficients");
    std::size_t bad = 0;
    for (const auto& x : a.elements()) {
        std::int64_t v = 0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i; j < 6; ++j)
                v += qm.ints[k++] * x[i] * x[j];
        Rational direct = a.q(x) * 2;
        if (direct.get_den() != 1 || ((v - direct.get_num().get_si()) % 4 + 4) % 4 != 0)
            ++bad;
    }
    c.expect(qm, bad == 0, "q_M closed formula matches direct computation on " + std::to_string(a.size()) +
                               " elements (" + std::to_string(bad) + " mismatches)");
}

void check3(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& hf = c.use("h");
    const auto& hp = c.use("h_pairings");
    Lattice m = m_from(gm);
    IntVector h = slice(hf.ints, 0, 10);
    auto e = [](std::size_t i) {
        IntVector v(10, Integer(0));
        v[i] = 1;
        return v;
    };
    std::vector<IntVector> others{h, e(1), e(5), e(2), e(3), e(4), e(6), e(7), e(8)};
    IntVector got;
    for (const auto& o : others)
        got.push_back(bilinear(m.gram, h, o));
    IntVector want = slice(hp.ints, 0, 9);
    c.expect(hp, got == want, "(h,h), (h,l1'), (h,l2'), (h,alpha_i), (h,beta_j) = " + vec_str(got));
    c.expect(hf, got == want && content(h) == 1, "h = " + vec_str(h) + " is primitive with (h,h) = " + got[0].get_str());
}

void check4(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& hf = c.use("h");
    const auto& ab = c.use("alpha4_beta4");
    const auto& ch = c.use("class_h");
    Lattice m = m_from(gm);
    IntVector h = slice(hf.ints, 0, 10);
    IntVector a4 = slice(ab.ints, 0, 10), b4 = slice(ab.ints, 10, 10);
    auto e = [](std::size_t i) {
        IntVector v(10, Integer(0));
        v[i] = 1;
        return v;
    };
    // gamma, l1', alpha1..alpha4 and gamma, l2', beta1..beta4
    std::vector<IntVector> side1{e(0), e(1), e(2), e(3), e(4), a4};
    std::vector<IntVector> side2{e(0), e(5), e(6), e(7), e(8), b4};
    auto combo = [&](const std::vector<IntVector>& vs, std::size_t off) {
        IntVector s(10, Integer(0));
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = 0; j < 10; ++j)
                s[j] += Integer(ch.ints.at(off + i)) * vs[i][j];
        return s;
    };
    bool ok1 = combo(side1, 0) == h, ok2 = combo(side2, 6) == h;
    c.expect(ch, ok1 && ok2, std::string("h = 2l1' + alpha1 + ... + alpha4 + gamma: ") + (ok1 ? "holds" : "fails") +
                                 "; h = 2l2' + beta1 + ... + beta4 + gamma: " + (ok2 ? "holds" : "fails"));
    bool roots = bilinear(m.gram, a4, a4) == -2 && bilinear(m.gram, b4, b4) == -2 && bilinear(m.gram, h, a4) == 0 &&
                 bilinear(m.gram, h, b4) == 0 && bilinear(m.gram, a4, e(1)) == 1 && bilinear(m.gram, b4, e(5)) == 1 &&
                 bilinear(m.gram, a4, b4) == 0;
    for (std::size_t i : {2, 3, 4})
        roots = roots && bilinear(m.gram, a4, e(i)) == 0;
    for (std::size_t i : {6, 7, 8})
        roots = roots && bilinear(m.gram, b4, e(i)) == 0;
    c.expect(ab, roots && ok1 && ok2,
             "alpha4, beta4 are roots orthogonal to h, alpha_i, beta_j meeting l1', l2' once");
}

void check5(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& gM = c.use("genus_M");
    const auto& gT = c.use("genus_T");
    const auto& k3 = c.use("k3");
    Lattice m = m_from(gm);
    Lattice rep = lattice::parse_named(gM.texts.at(0));
    bool same = lattice::same_2elem_genus(m, rep) && determinant(m.gram) == determinant(rep.gram);
    c.expect(gM, same, "M and " + gM.texts.at(0) + " share (r, sig, l, delta) = (" +
                           std::to_string(lattice::two_elem_invariants(m).r) + ", " +
                           lattice::signature_str(lattice::two_elem_invariants(m).sig) + ", " +
                           std::to_string(lattice::two_elem_invariants(m).ell) + ", " +
                           std::to_string(lattice::two_elem_invariants(m).delta) + ")");
    Lattice t = t_from(m);
    auto ti = lattice::two_elem_invariants(t);
    bool tok = ti.sig.plus == std::size_t(gT.ints.at(0)) && ti.sig.minus == std::size_t(gT.ints.at(1)) &&
               ti.ell == std::size_t(gT.ints.at(2));
    for (const auto& e : gT.texts)
        tok = tok && lattice::same_2elem_genus(t, lattice::parse_named(e));
    c.expect(gT, tok, "T = U+M has signature " + lattice::signature_str(ti.sig) + ", l = " + std::to_string(ti.ell) +
                          " and lies in the genus of " + join(gT.texts, " and "));
    Signature sm = signature(m.gram);
    bool kok = sm.plus + ti.sig.plus == std::size_t(k3.ints.at(0)) && sm.minus + ti.sig.minus == std::size_t(k3.ints.at(1)) &&
               lattice::two_elem_invariants(m).ell == ti.ell;
    // A_M and A_T are anti-isometric: q-signatures add to 0 mod 8
    int qm = q_signature_mod8(lattice::discriminant_group(m)).value;
    int qt = q_signature_mod8(lattice::discriminant_group(t)).value;
    kok = kok && (qm + qt) % 8 == 0;
    c.expect(k3, kok, "sig(M) + sig(T) = (" + std::to_string(sm.plus + ti.sig.plus) + "," +
                          std::to_string(sm.minus + ti.sig.minus) + "), q-signatures " + std::to_string(qm) + " + " +
                          std::to_string(qt) + " = 0 mod 8");
}

void check6(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& am = c.use("am");
    const auto& go = c.use("group_orders");
    FQM a = labeled_am(m_from(gm), am);
    auto g1 = actions(a, false), g2 = actions(a, true);
    std::size_t o1 = group_closure(a, g1).order(), o2 = group_closure(a, g2).order();
    bool i1 = injectivity_check(std::size_t(go.ints.at(0)), a, g1);
    bool i2 = injectivity_check(std::size_t(go.ints.at(1)), a, g2);
    c.expect(go, i1 && i2 && o1 == std::size_t(go.ints.at(0)) && o2 == std::size_t(go.ints.at(1)),
             "image orders " + std::to_string(o1) + " and " + std::to_string(o2) + ", injective: " +
                 (i1 && i2 ? "yes" : "no"));
}

void check7(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& am = c.use("am");
    const auto& iso = c.use("isotropic");
    const auto& oc = c.use("orbit_counts");
    FQM a = labeled_am(m_from(gm), am);
    auto els = isotropic_elements(a);
    std::set<FQM::Element> got(els.begin(), els.end()), listed;
    for (const auto& n : iso.texts)
        listed.insert(discforms::am_element(a, n));
    c.expect(iso, got.size() == std::size_t(iso.ints.at(0)) && got == listed && iso.texts.size() == listed.size(),
             "isotropic count = " + std::to_string(got.size()) + ", equal to the listed elements: " +
                 (got == listed ? "yes" : "no"));
    std::vector<std::uint64_t> idx;
    for (const auto& x : els)
        idx.push_back(a.index(x));
    std::sort(idx.begin(), idx.end());
    std::size_t n1 = orbits(group_closure(a, actions(a, false)), idx).size();
    std::size_t n2 = orbits(group_closure(a, actions(a, true)), idx).size();
    c.expect(oc, n1 == std::size_t(oc.ints.at(0)) && n2 == std::size_t(oc.ints.at(1)),
             "orbit count = " + std::to_string(n1) + " under Sigma4 x Sigma4, " + std::to_string(n2) + " with the swap");
}

void check8(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& am = c.use("am");
    const auto& tv = c.use("t_vectors");
    const auto& hs = c.use("hv_sizes");
    const auto& qg = c.use("quotient_genera");
    Lattice t = t_from(m_from(gm));
    FQM at = labeled_am(t, am, 2);
    for (std::size_t k = 0; k < 3; ++k) {
        IntVector v = slice(tv.ints, 12 * k, 12);
        FQM::Element x = lattice::vbar(t, at, v);
        bool vok = x == discforms::am_element(at, tv.texts.at(k)) && v == t_expression(tv.texts.at(3 + k));
        c.expect(tv, vok, "v = " + tv.texts.at(3 + k) + " = " + vec_str(v) + " has vbar = " + tv.texts.at(k) + ": " +
                              (vok ? "yes" : "no"));
        auto h = discforms::H_v(t, at, v);
        auto hp = discforms::orthogonal_in(at, h);
        c.expect(hs, h.size() == std::size_t(hs.ints.at(k)),
                 "|H_v| = " + std::to_string(h.size()) + " for vbar = " + tv.texts.at(k));
        Lattice q = lattice::quotient_vperp(t, v);
        Signature s = signature(q.gram);
        Integer dq = abs(determinant(q.gram));
        bool qok = s.plus == std::size_t(qg.ints.at(0)) && s.minus == std::size_t(qg.ints.at(1)) &&
                   dq * Integer(static_cast<unsigned long>(h.size())) == Integer(static_cast<unsigned long>(hp.size())) &&
                   lattice::same_2elem_genus(q, lattice::parse_named(qg.texts.at(2 * k))) &&
                   lattice::same_2elem_genus(lattice::parse_named(qg.texts.at(2 * k)),
                                             lattice::parse_named(qg.texts.at(2 * k + 1)));
        c.expect(qg, qok, "v-perp/Zv for vbar = " + tv.texts.at(k) + ": signature " + lattice::signature_str(s) +
                              ", |det| = " + dq.get_str() + ", genus " + qg.texts.at(2 * k) + " = " + qg.texts.at(2 * k + 1));
    }
}

std::map<std::string, std::vector<std::string>>& vinberg_cache() {
    static std::map<std::string, std::vector<std::string>> cache;
    return cache;
}

std::vector<std::string> vinberg_labels(const std::string& expr, std::int64_t max_height) {
    std::string key = expr + "#" + std::to_string(max_height);
    auto& cache = vinberg_cache();
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    Lattice l = lattice::parse_named(expr);
    vinberg::HyperbolicLattice n(l);
    IntVector h(l.rank(), Integer(0));
    h[0] = 1;
    h[1] = 1;
    auto cl = vinberg::classify_isotropic(n, h, max_height);
    cache[key] = cl.labels;
    return cl.labels;
}

void check9(Ctx& c, std::int64_t max_height) {
    const auto& vf = c.use("vinberg");
    const auto& bb = c.use("git_bb");
    std::set<std::string> all;
    for (std::size_t k = 0; k < 3; ++k) {
        auto labels = vinberg_labels(vf.texts.at(k), max_height);
        std::set<std::string> got(labels.begin(), labels.end());
        all.insert(got.begin(), got.end());
        auto want = split(vf.texts.at(3 + k), '|');
        bool inc = std::all_of(want.begin(), want.end(), [&](const std::string& w) { return got.count(w) > 0; });
        c.expect(vf, inc && got.size() == std::size_t(vf.ints.at(k)),
                 vf.texts.at(k) + ": parabolic classes {" + join(got, ", ") + "}");
    }
    auto uw = split(vf.texts.at(6), '|');
    std::set<std::string> want_union(uw.begin(), uw.end());
    c.expect(vf, all == want_union && all.size() == std::size_t(vf.ints.at(3)), "BB labels = {" + join(all, ", ") + "}");
    // table: Type II labels are the Vinberg labels, Type III labels are the genera of v-perp/Zv
    std::set<std::string> type2, type3, git;
    for (const auto& row : bb.texts) {
        auto kv = split(row, '=');
        if (kv.size() != 2)
            throw std::invalid_argument("malformed table row");
        git.insert(kv[0]);
        (kv[0].rfind("III", 0) == 0 ? type3 : type2).insert(kv[1]);
    }
    bool t3 = type3.size() == std::size_t(bb.ints.at(1));
    for (const auto& g : type3) {
        bool found = false;
        for (std::size_t k = 0; k < 3; ++k)
            if (lattice::same_2elem_genus(lattice::parse_named(g), lattice::parse_named(vf.texts.at(k))))
                found = true;
        t3 = t3 && found;
    }
    std::set<std::string> bd;
    for (const auto& n : bd11_names()) {
        std::string s = n.substr(5);
        if (s == "II(2b1)" || s == "II(2b2)")
            s = "II(2b)";
        bd.insert(s);
    }
    c.expect(bb, type2 == all && type2.size() == std::size_t(bb.ints.at(0)) && t3 && git == bd,
             "Type II column = Vinberg labels, Type III column = genera of v-perp/Zv, GIT column = boundary tuples");
}

void check10(Ctx& c) {
    const auto& st = c.use("stab");
    const auto& md = c.use("moduli_dim");
    const auto& com = c.use("bd11_common");
    int d = static_cast<int>(st.ints.at(0));
    auto r = vgit::stab_region(d);
    std::vector<std::vector<Rational>> got, want;
    for (const auto& h : r.inequalities)
        got.push_back({h.c0, h.c.at(0), h.c.at(1)});
    for (std::size_t i = 0; i < 4; ++i)
        want.push_back({Rational(st.ints.at(1 + 3 * i)), Rational(st.ints.at(2 + 3 * i)), Rational(st.ints.at(3 + 3 * i))});
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    auto verts = r.vertices();
    std::set<vgit::Weights> gv(verts.begin(), verts.end()), wv;
    for (std::size_t i = 0; i < 4; ++i)
        wv.insert({Rational(st.ints.at(13 + 2 * i)), Rational(st.ints.at(14 + 2 * i))});
    std::string vs;
    for (const auto& v : verts)
        vs += (vs.empty() ? "" : ", ") + ("(" + to_string(v[0]) + "," + to_string(v[1]) + ")");
    vgit::Weights t{Rational(com.ints.at(0)), Rational(com.ints.at(1))};
    bool inside = r.interior_contains(t) && t[0] == t[1];
    c.expect(st, got == want && gv == wv && inside,
             "Stab(1," + std::to_string(d) + ",2) vertices " + vs + "; (" + to_string(t[0]) + "," + to_string(t[1]) +
                 ") on the diagonal in the interior");
    Integer dim = vgit::moduli_dim(int(md.ints.at(0)), int(md.ints.at(1)), int(md.ints.at(2)));
    c.expect(md, dim == md.ints.at(3), "moduli_dim(" + std::to_string(md.ints.at(0)) + "," + std::to_string(md.ints.at(1)) +
                                           "," + std::to_string(md.ints.at(2)) + ") = " + dim.get_str());
}

void check11(Ctx& c) {
    const auto& com = c.use("bd11_common");
    vgit::Weights t{Rational(com.ints.at(0)), Rational(com.ints.at(1))};
    bool all = true;
    for (const auto& name : bd11_names()) {
        const auto& f = c.use(name);
        std::string vals, full;
        bool ok = true;
        for (const auto& a : a_samples()) {
            vgit::Tuple tup = bd11_tuple(f, a);
            bool same = tup == bd11_tuple_from_text(f, a);
            Rational w = worst_over_S(tup, t);
            Rational wf = vgit::torus_worst(tup, t).value;
            ok = ok && same && w == Rational(com.ints.at(2));
            vals += (vals.empty() ? "" : ", ") + ("a=" + to_string(a) + ": " + to_string(w) + (same ? "" : " (terms differ from text)"));
            full += (full.empty() ? "" : ", ") + to_string(wf);
        }
        all = all && ok;
        c.expect(f, ok, f.name.substr(5) + " max mu_t over S_{1,4} at t = (" + to_string(t[0]) + "," + to_string(t[1]) +
                            "): " + vals);
        c.note(f.name.substr(5) + " max over coordinate permutations of S_{1,4}: " + full);
    }
    c.expect(com, all, "all boundary tuples have max mu_t = " + std::to_string(com.ints.at(2)) + " over S_{1,4}");
    c.note("torus test only: strict semistability for the diagonal torus, closedness of orbits is not checked");
}

void check12(Ctx& c) {
    const auto& dg = c.use("degeneration");
    const auto& com = c.use("bd11_common");
    vgit::Weights t{Rational(com.ints.at(0)), Rational(com.ints.at(1))};
    auto lams = vgit::weyl_orbit_set(1, 6);
    std::size_t samples = 0, bad = 0;
    bool shape = true;
    for (const auto& name : bd11_names()) {
        const auto& f = c.use(name);
        Rational a(2);
        vgit::Tuple tup = bd11_tuple(f, a);
        auto d = vgit::degenerate(tup, t, {0, 1});
        Polynomial prod = bd11_polynomial(f.ints, 0, 0, a);
        shape = shape && d.s0 == dg.ints.at(0) && d.tuple.d() == dg.ints.at(1) && d.t.empty() &&
                d.tuple.hypersurface == vgit::Support::of(prod);
        for (const auto& lam : lams) {
            ++samples;
            if (Rational(d.s0) * vgit::mu_t(tup, t, lam) != vgit::mu_t(d.tuple, d.t, lam))
                ++bad;
        }
    }
    c.expect(dg, shape && bad == 0,
             "s0 = " + std::to_string(dg.ints.at(0)) + ", product degree " + std::to_string(dg.ints.at(1)) +
                 ", identity on " + std::to_string(samples) + " (tuple, lambda) pairs, " + std::to_string(bad) +
                 " failures");
}

void check13(Ctx& c) {
    const auto& gm = c.use("gm");
    const auto& ab = c.use("alpha4_beta4");
    const auto& pg = c.use("pair_gram");
    Lattice m = m_from(gm);
    auto e = [](std::size_t i) {
        IntVector v(10, Integer(0));
        v[i] = 1;
        return v;
    };
    IntVector a4 = slice(ab.ints, 0, 10), b4 = slice(ab.ints, 10, 10);
    std::vector<IntVector> s1{e(1), e(0), e(2), e(3), e(4), a4};
    std::vector<IntVector> s2{e(5), e(0), e(6), e(7), e(8), b4};
    IntMatrix want = square(pg.ints, 6);
    auto gram_of = [&](const std::vector<IntVector>& vs) {
        IntMatrix g(6, 6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                g(i, j) = bilinear(m.gram, vs[i], vs[j]);
        return g;
    };
    bool ok = gram_of(s1) == want && gram_of(s2) == want;
    Lattice l{"pair", want, {}};
    l.validate();
    Signature s = signature(want);
    Integer d = determinant(want);
    c.expect(pg, ok && l.even(), std::string("both sublattices have the stored Gram matrix: ") + (ok ? "yes" : "no") +
                                     "; det " + d.get_str() + ", signature " + lattice::signature_str(s));
}

}  // namespace

Casebook Casebook::standard() {
    Casebook cb;
    cb.fixtures_ = standard_fixtures();
    return cb;
}

const Fixture& Casebook::get(const std::string& name) const {
    for (const auto& f : fixtures_)
        if (f.name == name) {
            used_.insert(name);
            return f;
        }
    throw std::out_of_range("unknown fixture " + name);
}

Fixture& Casebook::edit(const std::string& name) {
    for (auto& f : fixtures_)
        if (f.name == name)
            return f;
    throw std::out_of_range("unknown fixture " + name);
}

std::vector<std::string> Casebook::names() const {
    std::vector<std::string> out;
    for (const auto& f : fixtures_)
        out.push_back(f.name);
    return out;
}

std::string Line::str() const {
    return std::string(pass ? "PASS" : "FAIL") + " [" + std::to_string(check) + "] " + anchor + ": " + detail;
}

bool Report::all_pass() const {
    return !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.pass; });
}

std::string Report::str() const {
    std::ostringstream os;
    for (const auto& l : lines)
        os << l.str() << "\n";
    for (const auto& n : notes)
        os << "NOTE " << n << "\n";
    return os.str();
}

const std::vector<std::pair<int, std::string>>& check_titles() {
    static const std::vector<std::pair<int, std::string>> t{
        {1, "G_M determinant and inverse"},
        {2, "signature, A_M and the q_M formula"},
        {3, "pairings of h"},
        {4, "class of h"},
        {5, "genera of M and T"},
        {6, "injectivity of the permutation actions"},
        {7, "isotropic elements and orbits"},
        {8, "H_v and the genera of v-perp/Zv"},
        {9, "Vinberg runs and the boundary table"},
        {10, "stability region and moduli dimension"},
        {11, "boundary tuples are torus strictly semistable"},
        {12, "degeneration identity"},
        {13, "degree-5-pair Gram matrix"},
    };
    return t;
}

std::vector<Rational> a_samples() { return {Rational(2), Rational(-1), ratio(1, 2)}; }

std::vector<std::string> bd11_names() {
    return {"bd11_III(1)", "bd11_III(2a)", "bd11_III(2b)", "bd11_II(1)", "bd11_II(2a1)",
            "bd11_II(2a2)", "bd11_II(2b1)", "bd11_II(2b2)", "bd11_II(3)"};
}

Polynomial bd11_polynomial(const std::vector<std::int64_t>& ints, std::size_t first, std::size_t count, const Rational& a) {
    // count == 0 with first == 0 means the product of all three polynomials
    std::vector<Polynomial> polys;
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        if (pos >= ints.size())
            throw std::invalid_argument("boundary tuple: truncated terms");
        std::int64_t n = ints[pos++];
        if (n < 1 || pos + 5 * std::size_t(n) > ints.size())
            throw std::invalid_argument("boundary tuple: bad term count");
        Polynomial p(3);
        for (std::int64_t i = 0; i < n; ++i, pos += 5) {
            Exponent e{ints[pos + 2], ints[pos + 3], ints[pos + 4]};
            if (std::any_of(e.begin(), e.end(), [](std::int64_t x) { return x < 0; }))
                throw std::invalid_argument("boundary tuple: negative exponent");
            p.add_term(e, Rational(ints[pos]) + Rational(ints[pos + 1]) * a);
        }
        polys.push_back(p);
    }
    if (pos != ints.size())
        throw std::invalid_argument("boundary tuple: trailing terms");
    if (count == 0)
        return polys[0] * polys[1] * polys[2];
    return polys.at(first);
}

vgit::Tuple bd11_tuple(const Fixture& f, const Rational& a) {
    Polynomial c = bd11_polynomial(f.ints, 0, 1, a);
    Polynomial l1 = bd11_polynomial(f.ints, 1, 1, a);
    Polynomial l2 = bd11_polynomial(f.ints, 2, 1, a);
    if (c.homogeneous_degree() != 4 || l1.homogeneous_degree() != 1 || l2.homogeneous_degree() != 1)
        throw std::invalid_argument("boundary tuple: wrong degrees");
    return vgit::tuple_from_polynomials(1, c, {l1, l2});
}

vgit::Tuple bd11_tuple_from_text(const Fixture& f, const Rational& a) {
    std::map<std::string, Rational> params{{"a", a}};
    std::vector<Polynomial> p;
    for (std::size_t i = 0; i < 3; ++i)
        p.push_back(parse_polynomial(f.texts.at(i), 3, params));
    // full equality of polynomials, not only supports
    for (std::size_t i = 0; i < 3; ++i)
        if (p[i] != bd11_polynomial(f.ints, i, 1, a))
            throw std::invalid_argument("boundary tuple " + f.name + ": stored terms differ from the factored form");
    return vgit::tuple_from_polynomials(1, p[0], {p[1], p[2]});
}

Rational worst_over_S(const vgit::Tuple& tup, const vgit::Weights& t) {
    auto s = vgit::fundamental_set(1, 4);
    Rational best = vgit::mu_t(tup, t, s.at(0));
    for (const auto& lam : s)
        best = std::max(best, vgit::mu_t(tup, t, lam));
    return best;
}

Lattice lattice_M(const Casebook& cb) { return m_from(cb.get("gm")); }
Lattice lattice_T(const Casebook& cb) { return t_from(lattice_M(cb)); }

std::vector<Lattice> constructed_lattices(const Casebook& cb) {
    std::vector<Lattice> out;
    Lattice m = lattice_M(cb), t = lattice_T(cb);
    out.push_back(m);
    out.push_back(t);
    std::vector<std::string> exprs = cb.get("genus_M").texts;
    for (const auto& e : cb.get("genus_T").texts)
        exprs.push_back(e);
    for (const auto& e : cb.get("quotient_genera").texts)
        exprs.push_back(e);
    for (std::size_t k = 0; k < 3; ++k)
        exprs.push_back(cb.get("vinberg").texts.at(k));
    for (const auto& e : exprs) {
        Lattice l = lattice::parse_named(e);
        l.name = e;
        out.push_back(l);
    }
    const auto& tv = cb.get("t_vectors");
    for (std::size_t k = 0; k < 3; ++k) {
        Lattice q = lattice::quotient_vperp(t, slice(tv.ints, 12 * k, 12));
        q.name = "v-perp/Zv for vbar = " + tv.texts.at(k);
        out.push_back(q);
    }
    out.push_back({"degree-5-pair sublattice", square(cb.get("pair_gram").ints, 6), {}});
    return out;
}

Report run(const Casebook& cb, const RunOptions& opt) {
    Report r;
    for (const auto& [k, title] : check_titles()) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), k) == opt.only.end())
            continue;
        Ctx c(cb, r, k);
        try {
            switch (k) {
            case 1: check1(c); break;
            case 2: check2(c); break;
            case 3: check3(c); break;
            case 4: check4(c); break;
            case 5: check5(c); break;
            case 6: check6(c); break;
            case 7: check7(c); break;
            case 8: check8(c); break;
            case 9: check9(c, opt.max_height); break;
            case 10: check10(c); break;
            case 11: check11(c); break;
            case 12: check12(c); break;
            case 13: check13(c); break;
            }
        } catch (const std::exception& e) {
            c.fail_all(e.what());
        }
    }
    return r;
}

std::vector<MutationOutcome> mutation_test(const Casebook& cb, const RunOptions& opt,
                                           const std::function<void(const MutationOutcome&)>& progress) {
    Report base = run(cb, opt);
    std::map<std::string, std::vector<int>> consumers;
    for (const auto& [k, names] : base.consumed)
        for (const auto& n : names)
            consumers[n].push_back(k);
    std::vector<MutationOutcome> out;
    for (const auto& f : cb.fixtures()) {
        for (std::size_t i = 0; i < f.ints.size(); ++i) {
            Casebook copy = cb;
            copy.edit(f.name).ints[i] += 1;
            RunOptions o = opt;
            o.only = consumers[f.name];
            MutationOutcome m{f.name, i, false, ""};
            if (!o.only.empty()) {
                Report r = run(copy, o);
                for (const auto& l : r.lines)
                    if (!l.pass && l.anchor == f.anchor) {
                        m.detected = true;
                        m.line = l.str();
                        break;
                    }
            }
            if (progress)
                progress(m);
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace vgitk3::casebook
