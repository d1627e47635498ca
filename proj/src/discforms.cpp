#include "vgitk3/discforms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace vgitk3::discforms {

Overlattice overlattice(const Lattice& l, const std::vector<RatVector>& lifts) {
    l.validate();
    std::size_t r = l.rank();
    RatMatrix g = to_rational(l.gram);
    Integer den = 1;
    for (const auto& x : lifts) {
        if (x.size() != r)
            throw std::invalid_argument("overlattice: lift has the wrong length");
        RatVector gx = g * x;
        if (lcm_of_denominators(gx) != 1)
            throw std::invalid_argument("overlattice: lift is not in the dual lattice");
        den = lcm(den, lcm_of_denominators(x));
    }
    for (std::size_t i = 0; i < lifts.size(); ++i) {
        Rational qi = bilinear(g, lifts[i], lifts[i]);
        if (qi.get_den() != 1 || qi.get_num() % 2 != 0)
            throw std::invalid_argument("overlattice: lift " + std::to_string(i + 1) + " is not isotropic");
        for (std::size_t j = i + 1; j < lifts.size(); ++j)
            if (bilinear(g, lifts[i], lifts[j]).get_den() != 1)
                throw std::invalid_argument("overlattice: lifts do not span an isotropic subgroup");
    }
    IntMatrix gen(r + lifts.size(), r);
    for (std::size_t i = 0; i < r; ++i)
        gen(i, i) = den;
    for (std::size_t k = 0; k < lifts.size(); ++k)
        for (std::size_t j = 0; j < r; ++j)
            gen(r + k, j) = to_integer(RatVector{lifts[k][j] * Rational(den)})[0];
    IntMatrix b = lattice_basis_rows(gen);
    if (b.rows() != r)
        throw std::logic_error("overlattice: rank changed");
    IntMatrix raw = b * l.gram * b.transpose();
    IntMatrix ng(r, r);
    Integer d2 = den * den;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            if (raw(i, j) % d2 != 0)
                throw std::invalid_argument("overlattice: result is not integral");
            ng(i, j) = raw(i, j) / d2;
        }
    Lattice out{l.name.empty() ? "" : "over(" + l.name + ")", ng, {}};
    if (!out.even())
        throw std::invalid_argument("overlattice: result is not even");
    Integer db = abs(determinant(b));
    Integer dr = 1;
    for (std::size_t i = 0; i < r; ++i)
        dr *= den;
    if (dr % db != 0)
        throw std::logic_error("overlattice: non-integral index");
    Integer index = dr / db;
    Integer dl = abs(determinant(l.gram)), dn = abs(determinant(ng));
    if (index * index * dn != dl)
        throw std::logic_error("overlattice: index identity failed");
    return {out, b, den, index};
}

FQM labeled_discriminant(const Lattice& l, const std::vector<std::size_t>& dual_indices,
                         const std::vector<std::string>& labels) {
    FQM a = lattice::discriminant_group(l);
    RatMatrix inv = rational_inverse(l.gram);
    std::vector<RatVector> lifts;
    for (auto i : dual_indices) {
        if (i >= l.rank())
            throw std::invalid_argument("labeled_discriminant: index out of range");
        lifts.push_back(inv.col(i));
    }
    return a.relabel(lifts, labels);
}

const std::vector<std::string>& am_labels() {
    static const std::vector<std::string> l{"gamma*", "alpha1*", "alpha2*", "beta1*", "beta2*", "xi*"};
    return l;
}

namespace {

void require_labeled(const FQM& am) {
    if (am.labels() != am_labels())
        throw std::invalid_argument("action: module does not carry the casebook labels");
    for (auto d : am.orders())
        if (d != 2)
            throw std::invalid_argument("action: module is not 2-elementary");
}

FQM::Element coords(std::initializer_list<int> c) {
    return FQM::Element(c.begin(), c.end());
}

// a gamma* + b alpha1* + c alpha2* + d beta1* + e beta2* + f xi*
const std::map<std::string, FQM::Element>& named() {
    static const std::map<std::string, FQM::Element> m{
        {"0", coords({0, 0, 0, 0, 0, 0})},
        {"gamma*", coords({1, 0, 0, 0, 0, 0})},
        {"alpha1*", coords({0, 1, 0, 0, 0, 0})},
        {"alpha2*", coords({0, 0, 1, 0, 0, 0})},
        {"alpha3*", coords({1, 1, 1, 0, 0, 0})},
        {"beta1*", coords({0, 0, 0, 1, 0, 0})},
        {"beta2*", coords({0, 0, 0, 0, 1, 0})},
        {"beta3*", coords({1, 0, 0, 1, 1, 0})},
        {"xi*", coords({0, 0, 0, 0, 0, 1})},
    };
    return m;
}

}  // namespace

FQM::Element am_element(const FQM& am, const std::string& name) {
    require_labeled(am);
    FQM::Element x = am.zero();
    std::size_t pos = 0;
    while (pos <= name.size()) {
        std::size_t e = name.find('+', pos);
        if (e == std::string::npos)
            e = name.size();
        std::string part = name.substr(pos, e - pos);
        auto it = named().find(part);
        if (it == named().end())
            throw std::invalid_argument("am_element: unknown element '" + part + "'");
        x = am.add(x, it->second);
        pos = e + 1;
    }
    return x;
}

std::string action_str(const PermActionSpec& s) {
    switch (s.kind) {
    case ActionKind::alpha_transposition:
        return "(alpha" + std::to_string(s.i) + " alpha" + std::to_string(s.j) + ")";
    case ActionKind::alpha_with4: return "(alpha" + std::to_string(s.i) + " alpha4)";
    case ActionKind::beta_transposition:
        return "(beta" + std::to_string(s.i) + " beta" + std::to_string(s.j) + ")";
    case ActionKind::beta_with4: return "(beta" + std::to_string(s.i) + " beta4)";
    case ActionKind::swap: return "swap";
    }
    return "?";
}

FQMIsometry build_action(const FQM& am, const PermActionSpec& spec) {
    require_labeled(am);
    std::string side = (spec.kind == ActionKind::beta_transposition || spec.kind == ActionKind::beta_with4)
                           ? "beta"
                           : "alpha";
    auto el = [&](const std::string& n) { return am_element(am, n); };
    auto sym = [&](int i) { return side + std::to_string(i) + "*"; };
    std::map<std::string, FQM::Element> img;
    // images of gamma*, X1*, X2*, X3*, xi* on the moving side; all else fixed
    for (const auto& n : am_labels())
        img[n] = el(n);
    std::map<int, FQM::Element> side_img;
    for (int i = 1; i <= 3; ++i)
        side_img[i] = el(sym(i));
    switch (spec.kind) {
    case ActionKind::alpha_transposition:
    case ActionKind::beta_transposition: {
        int i = spec.i, j = spec.j;
        if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
            throw std::invalid_argument("action: transposition indices must be distinct in 1..3");
        std::swap(side_img[i], side_img[j]);
        break;
    }
    case ActionKind::alpha_with4:
    case ActionKind::beta_with4: {
        int i = spec.i;
        if (i < 1 || i > 3)
            throw std::invalid_argument("action: index must lie in 1..3");
        // X_k* -> X_i* + X_k* for k != i, xi* -> xi* + X_i*
        for (int k = 1; k <= 3; ++k)
            if (k != i)
                side_img[k] = am.add(el(sym(i)), el(sym(k)));
        img["xi*"] = am.add(el("xi*"), el(sym(i)));
        break;
    }
    case ActionKind::swap:
        for (int i = 1; i <= 2; ++i) {
            img["alpha" + std::to_string(i) + "*"] = el("beta" + std::to_string(i) + "*");
            img["beta" + std::to_string(i) + "*"] = el("alpha" + std::to_string(i) + "*");
        }
        break;
    }
    if (spec.kind != ActionKind::swap) {
        img[sym(1)] = side_img[1];
        img[sym(2)] = side_img[2];
        // consistency: the image of X3* = gamma* + X1* + X2* must match
        FQM::Element x3 = am.add(img["gamma*"], am.add(side_img[1], side_img[2]));
        if (x3 != side_img[3])
            throw std::logic_error("action: inconsistent image of the third dual class");
    }
    FQMIsometry g;
    for (const auto& n : am_labels())
        g.images.push_back(img[n]);
    verify_isometry(am, g);
    return g;
}

std::vector<PermActionSpec> standard_generators(bool with_swap) {
    std::vector<PermActionSpec> out;
    for (auto [t, w] : {std::pair{ActionKind::alpha_transposition, ActionKind::alpha_with4},
                        std::pair{ActionKind::beta_transposition, ActionKind::beta_with4}}) {
        out.push_back({t, 1, 2});
        out.push_back({t, 1, 3});
        out.push_back({t, 2, 3});
        for (int i = 1; i <= 3; ++i)
            out.push_back({w, i, 0});
    }
    if (with_swap)
        out.push_back({ActionKind::swap, 0, 0});
    return out;
}

std::vector<std::uint64_t> H_v(const Lattice& l, const FQM& a, const IntVector& v) {
    FQM::Element x = lattice::vbar(l, a, v);
    return generated_subgroup(a, {x});
}

std::vector<std::uint64_t> orthogonal_in(const FQM& a, const std::vector<std::uint64_t>& h) {
    std::vector<std::uint64_t> out;
    std::uint64_t n = a.size();
    for (std::uint64_t i = 0; i < n; ++i) {
        FQM::Element x = a.element(i);
        bool ok = std::all_of(h.begin(), h.end(), [&](std::uint64_t j) { return a.b(x, a.element(j)) == 0; });
        if (ok)
            out.push_back(i);
    }
    return out;
}

}  // namespace vgitk3::discforms
