#include "vgitk3/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace vgitk3::lattice {

bool Lattice::even() const {
    for (std::size_t i = 0; i < gram.rows(); ++i)
        if (gram(i, i) % 2 != 0)
            return false;
    return true;
}

void Lattice::validate() const {
    if (gram.rows() != gram.cols())
        throw std::invalid_argument("lattice: Gram matrix not square");
    if (!gram.symmetric())
        throw std::invalid_argument("lattice: Gram matrix not symmetric");
    if (!labels.empty() && labels.size() != gram.rows())
        throw std::invalid_argument("lattice: label count does not match rank");
}

namespace {

void link(IntMatrix& g, std::size_t i, std::size_t j) {
    g(i, j) = 1;
    g(j, i) = 1;
}

std::string kind_name(RootKind k, int n) {
    switch (k) {
    case RootKind::A: return "A" + std::to_string(n);
    case RootKind::D: return "D" + std::to_string(n);
    case RootKind::E: return "E" + std::to_string(n);
    case RootKind::U: return "U";
    }
    return "?";
}

}  // namespace

Lattice make_named(RootKind kind, int n, std::int64_t scale) {
    if (scale == 0)
        throw std::invalid_argument("make_named: scale must be nonzero");
    IntMatrix g;
    switch (kind) {
    case RootKind::A:
        if (n < 1)
            throw std::invalid_argument("make_named: A_n needs n >= 1");
        g = IntMatrix(n, n);
        for (int i = 0; i < n; ++i)
            g(i, i) = -2;
        for (int i = 0; i + 1 < n; ++i)
            link(g, i, i + 1);
        break;
    case RootKind::D:
        if (n < 4)
            throw std::invalid_argument("make_named: D_m needs m >= 4");
        g = IntMatrix(n, n);
        for (int i = 0; i < n; ++i)
            g(i, i) = -2;
        for (int i = 0; i + 2 < n; ++i)
            link(g, i, i + 1);
        link(g, n - 1, n - 3);
        break;
    case RootKind::E:
        if (n < 6 || n > 8)
            throw std::invalid_argument("make_named: E_r needs r in {6,7,8}");
        g = IntMatrix(n, n);
        for (int i = 0; i < n; ++i)
            g(i, i) = -2;
        for (int i = 0; i + 2 < n; ++i)
            link(g, i, i + 1);
        link(g, n - 1, 2);
        break;
    case RootKind::U:
        g = IntMatrix{{0, 1}, {1, 0}};
        break;
    }
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            g(i, j) *= scale;
    std::string name = kind_name(kind, n);
    if (scale != 1)
        name += "(" + std::to_string(scale) + ")";
    return {name, g, {}};
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
    std::size_t n = a.rank(), m = b.rank();
    IntMatrix g(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g(i, j) = a.gram(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            g(n + i, n + j) = b.gram(i, j);
    std::vector<std::string> labels;
    if (!a.labels.empty() || !b.labels.empty()) {
        for (std::size_t i = 0; i < n; ++i)
            labels.push_back(a.labels.empty() ? a.name + "." + std::to_string(i + 1) : a.labels[i]);
        for (std::size_t i = 0; i < m; ++i)
            labels.push_back(b.labels.empty() ? b.name + "." + std::to_string(i + 1) : b.labels[i]);
    }
    std::string name = a.name.empty() ? b.name : (b.name.empty() ? a.name : a.name + "+" + b.name);
    return {name, g, labels};
}

Lattice direct_sum(const std::vector<Lattice>& parts) {
    Lattice out{"", IntMatrix(0, 0), {}};
    for (const auto& p : parts)
        out = direct_sum(out, p);
    return out;
}

Lattice parse_named(const std::string& expr) {
    std::string s;
    for (std::size_t i = 0; i < expr.size(); ++i) {
        // "⊥" is U+22A5, encoded E2 8A A5
        if (expr.compare(i, 3, "\xE2\x8A\xA5") == 0) {
            s += '+';
            i += 2;
        } else if (expr[i] != '_' && !std::isspace(static_cast<unsigned char>(expr[i]))) {
            s += expr[i];
        }
    }
    if (s.empty())
        throw std::invalid_argument("parse_named: empty expression");
    std::vector<Lattice> parts;
    std::size_t pos = 0;
    auto read_int = [&](const char* what) {
        std::size_t start = pos;
        if (pos < s.size() && s[pos] == '-')
            ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (start == pos || (s[start] == '-' && pos == start + 1))
            throw std::invalid_argument(std::string("parse_named: expected ") + what + " in '" + expr + "'");
        return std::stoll(s.substr(start, pos - start));
    };
    while (true) {
        if (pos >= s.size())
            throw std::invalid_argument("parse_named: dangling '+' in '" + expr + "'");
        char c = s[pos++];
        RootKind kind;
        int n = 0;
        switch (c) {
        case 'A': kind = RootKind::A; break;
        case 'D': kind = RootKind::D; break;
        case 'E': kind = RootKind::E; break;
        case 'U': kind = RootKind::U; break;
        default: throw std::invalid_argument("parse_named: unknown summand in '" + expr + "'");
        }
        if (kind != RootKind::U)
            n = static_cast<int>(read_int("rank"));
        std::int64_t scale = 1;
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            scale = read_int("scale");
            if (pos >= s.size() || s[pos] != ')')
                throw std::invalid_argument("parse_named: missing ')' in '" + expr + "'");
            ++pos;
        }
        std::int64_t mult = 1;
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            mult = read_int("exponent");
            if (mult < 1)
                throw std::invalid_argument("parse_named: exponent must be positive");
        }
        Lattice part = make_named(kind, n, scale);
        for (std::int64_t i = 0; i < mult; ++i)
            parts.push_back(part);
        if (pos == s.size())
            break;
        if (s[pos] != '+')
            throw std::invalid_argument("parse_named: unexpected character in '" + expr + "'");
        ++pos;
    }
    Lattice out = direct_sum(parts);
    out.name = expr;
    return out;
}

Invariants invariants(const Lattice& l) {
    l.validate();
    Invariants inv;
    inv.rank = l.rank();
    inv.det = l.rank() ? determinant(l.gram) : Integer(1);
    inv.even = l.even();
    inv.sig = signature(l.gram);
    return inv;
}

FQM discriminant_group(const Lattice& l) {
    l.validate();
    if (!l.even())
        throw std::domain_error("discriminant_group: lattice is not even");
    std::size_t r = l.rank();
    if (r == 0)
        return FQM({}, RatMatrix(0, 0));
    SmithForm s = snf(l.gram);
    auto d = s.diagonal();
    for (const auto& x : d)
        if (x == 0)
            throw std::domain_error("discriminant_group: degenerate lattice");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < r; ++i)
        if (d[i] > 1)
            idx.push_back(i);
    std::size_t k = idx.size();
    RatMatrix lifts(r, k);
    IntMatrix reducer(k, r);
    std::vector<std::int64_t> orders;
    for (std::size_t a = 0; a < k; ++a) {
        std::size_t i = idx[a];
        if (!d[i].fits_slong_p())
            throw std::overflow_error("discriminant_group: elementary divisor too large");
        orders.push_back(d[i].get_si());
        for (std::size_t j = 0; j < r; ++j) {
            lifts(j, a) = ratio(s.V(j, i), d[i]);
            reducer(a, j) = s.U(i, j);
        }
    }
    RatMatrix g = lifts.transpose() * to_rational(l.gram) * lifts;
    FQM out(orders, g);
    out.set_provenance({l.gram, lifts, reducer});
    return out;
}

Integer divisor(const Lattice& l, const IntVector& v) {
    if (v.size() != l.rank())
        throw std::invalid_argument("divisor: vector has the wrong length");
    if (std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; }))
        throw std::invalid_argument("divisor: zero vector");
    Integer g = content(l.gram * v);
    if (g == 0)
        throw std::domain_error("divisor: vector lies in the kernel of the form");
    return g;
}

FQM::Element vbar(const Lattice& l, const FQM& a, const IntVector& v) {
    if (v.size() != l.rank())
        throw std::invalid_argument("vbar: vector has the wrong length");
    if (content(v) != 1)
        throw std::invalid_argument("vbar: vector is not primitive");
    if (bilinear(l.gram, v, v) != 0)
        throw std::invalid_argument("vbar: vector is not isotropic");
    Integer dv = divisor(l, v);
    RatVector x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        x[i] = ratio(v[i], dv);
    return a.class_of(x);
}

Lattice orthogonal_complement(const Lattice& l, const std::vector<IntVector>& vs, IntMatrix* basis) {
    l.validate();
    std::size_t r = l.rank();
    IntMatrix c(vs.size(), r);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].size() != r)
            throw std::invalid_argument("orthogonal_complement: vector has the wrong length");
        IntVector gv = l.gram * vs[i];
        for (std::size_t j = 0; j < r; ++j)
            c(i, j) = gv[j];
    }
    std::vector<IntVector> ker;
    if (vs.empty()) {
        for (std::size_t i = 0; i < r; ++i) {
            IntVector e(r, Integer(0));
            e[i] = 1;
            ker.push_back(e);
        }
    } else {
        ker = integer_kernel(c);
    }
    IntMatrix b = ker.empty() ? IntMatrix(0, r) : IntMatrix::from_rows(ker);
    IntMatrix g = b * l.gram * b.transpose();
    if (basis)
        *basis = b;
    return {l.name.empty() ? "" : "perp(" + l.name + ")", g, {}};
}

Lattice quotient_vperp(const Lattice& l, const IntVector& v) {
    l.validate();
    if (!l.even())
        throw std::domain_error("quotient_vperp: lattice is not even");
    if (v.size() != l.rank())
        throw std::invalid_argument("quotient_vperp: vector has the wrong length");
    if (content(v) != 1)
        throw std::invalid_argument("quotient_vperp: vector is not primitive");
    if (bilinear(l.gram, v, v) != 0)
        throw std::invalid_argument("quotient_vperp: vector is not isotropic");
    IntMatrix k;
    orthogonal_complement(l, {v}, &k);
    // v = c^T K
    std::size_t m = k.rows(), r = l.rank();
    RatMatrix kt = to_rational(k.transpose());
    // solve through the normal equations; K has full row rank
    RatMatrix kkt = to_rational(k * k.transpose());
    RatVector rhs = to_rational(k * v);
    RatVector c = rational_inverse(kkt) * rhs;
    RatVector back = kt * c;
    for (std::size_t i = 0; i < r; ++i)
        if (back[i] != Rational(v[i]))
            throw std::logic_error("quotient_vperp: v not in its own complement");
    IntVector ci = to_integer(c);
    IntMatrix w = complete_to_basis(ci);
    IntMatrix nb = w.transpose() * k;
    IntMatrix rest(m - 1, r);
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < r; ++j)
            rest(i - 1, j) = nb(i, j);
    IntMatrix g = rest * l.gram * rest.transpose();
    return {l.name.empty() ? "" : "vperp/v(" + l.name + ")", g, {}};
}

TwoElemInvariants two_elem_invariants(const Lattice& l) {
    FQM a = discriminant_group(l);
    for (auto d : a.orders())
        if (d != 2)
            throw std::domain_error("two_elem_invariants: discriminant group is not 2-elementary");
    TwoElemInvariants t;
    t.r = l.rank();
    t.sig = signature(l.gram);
    t.ell = a.ngens();
    for (const auto& x : a.elements())
        if (a.q(x).get_den() != 1) {
            t.delta = 1;
            break;
        }
    return t;
}

bool same_2elem_genus(const Lattice& a, const Lattice& b) {
    for (const Lattice* l : {&a, &b}) {
        if (!l->even())
            throw std::domain_error("same_2elem_genus: lattice is not even");
        Signature s = signature(l->gram);
        if (s.zero != 0)
            throw std::domain_error("same_2elem_genus: lattice is degenerate");
        if (s.plus == 0 || s.minus == 0)
            throw std::domain_error("same_2elem_genus: lattice is definite");
    }
    return two_elem_invariants(a) == two_elem_invariants(b);
}

std::string signature_str(const Signature& s) {
    return "(" + std::to_string(s.plus) + "," + std::to_string(s.minus) + ")";
}

}  // namespace vgitk3::lattice
