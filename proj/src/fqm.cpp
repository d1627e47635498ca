#include "vgitk3/fqm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vgitk3 {

Rational mod_rational(const Rational& x, const Rational& m) {
    Rational y = x / m;
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    Rational r = x - Rational(f) * m;
    r.canonicalize();
    return r;
}

FiniteQuadraticModule::FiniteQuadraticModule(std::vector<std::int64_t> orders, RatMatrix gram,
                                             std::vector<std::string> labels)
    : orders_(std::move(orders)), gram_(std::move(gram)), labels_(std::move(labels)) {
    if (gram_.rows() != orders_.size() || gram_.cols() != orders_.size())
        throw std::invalid_argument("FQM: Gram size does not match the number of generators");
    if (!gram_.symmetric())
        throw std::invalid_argument("FQM: Gram matrix not symmetric");
    if (!labels_.empty() && labels_.size() != orders_.size())
        throw std::invalid_argument("FQM: label count does not match the number of generators");
    for (auto d : orders_)
        if (d < 2)
            throw std::invalid_argument("FQM: generator orders must exceed 1");
    // each generator must be well defined: d_i g_i pairs integrally and q(d_i g_i) = 0
    for (std::size_t i = 0; i < orders_.size(); ++i)
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            Rational v = gram_(i, j) * Rational(orders_[i]);
            if (v.get_den() != 1)
                throw std::invalid_argument("FQM: generator order incompatible with the bilinear form");
        }
}

std::uint64_t FiniteQuadraticModule::size() const {
    std::uint64_t s = 1;
    for (auto d : orders_) {
        if (s > (std::uint64_t(1) << 40) / static_cast<std::uint64_t>(d))
            throw std::overflow_error("FQM: group too large to enumerate");
        s *= static_cast<std::uint64_t>(d);
    }
    return s;
}

FiniteQuadraticModule::Element FiniteQuadraticModule::generator(std::size_t i) const {
    Element e = zero();
    e.at(i) = 1;
    return e;
}

FiniteQuadraticModule::Element FiniteQuadraticModule::reduce(Element x) const {
    if (x.size() != orders_.size())
        throw std::invalid_argument("FQM: element length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] %= orders_[i];
        if (x[i] < 0)
            x[i] += orders_[i];
    }
    return x;
}

FiniteQuadraticModule::Element FiniteQuadraticModule::add(const Element& x, const Element& y) const {
    if (x.size() != y.size())
        throw std::invalid_argument("FQM: element length mismatch");
    Element r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = x[i] + y[i];
    return reduce(r);
}

FiniteQuadraticModule::Element FiniteQuadraticModule::neg(const Element& x) const { return scale(x, -1); }

FiniteQuadraticModule::Element FiniteQuadraticModule::scale(const Element& x, std::int64_t n) const {
    Element r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = (x[i] % orders_[i]) * (n % orders_[i]);
    return reduce(r);
}

std::int64_t FiniteQuadraticModule::element_order(const Element& x) const {
    std::int64_t o = 1;
    Element r = reduce(x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::int64_t oi = orders_[i] / std::gcd(orders_[i], r[i]);
        o = std::lcm(o, oi);
    }
    return o;
}

Rational FiniteQuadraticModule::q(const Element& x) const {
    Element r = reduce(x);
    Rational s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!r[i])
            continue;
        s += Rational(r[i] * r[i]) * gram_(i, i);
        for (std::size_t j = i + 1; j < r.size(); ++j)
            if (r[j])
                s += Rational(2 * r[i] * r[j]) * gram_(i, j);
    }
    return mod_rational(s, 2);
}

Rational FiniteQuadraticModule::b(const Element& x, const Element& y) const {
    Element a = reduce(x), c = reduce(y);
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            if (a[i] && c[j])
                s += Rational(a[i] * c[j]) * gram_(i, j);
    return mod_rational(s, 1);
}

std::uint64_t FiniteQuadraticModule::index(const Element& x) const {
    Element r = reduce(x);
    std::uint64_t idx = 0, mul = 1;
    for (std::size_t i = 0; i < r.size(); ++i) {
        idx += static_cast<std::uint64_t>(r[i]) * mul;
        mul *= static_cast<std::uint64_t>(orders_[i]);
    }
    return idx;
}

FiniteQuadraticModule::Element FiniteQuadraticModule::element(std::uint64_t idx) const {
    Element r(orders_.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(orders_[i]));
        idx /= static_cast<std::uint64_t>(orders_[i]);
    }
    return r;
}

std::vector<FiniteQuadraticModule::Element> FiniteQuadraticModule::elements() const {
    std::uint64_t n = size();
    if (n > (std::uint64_t(1) << 24))
        throw std::overflow_error("FQM: group too large to list");
    std::vector<Element> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        out.push_back(element(i));
    return out;
}

std::string FiniteQuadraticModule::element_str(const Element& x) const {
    Element r = reduce(x);
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!r[i])
            continue;
        if (any)
            os << "+";
        if (r[i] != 1)
            os << r[i] << "*";
        os << (labels_.empty() ? "g" + std::to_string(i + 1) : labels_[i]);
        any = true;
    }
    if (!any)
        os << "0";
    return os.str();
}

FiniteQuadraticModule::Element FiniteQuadraticModule::class_of(const RatVector& dual) const {
    if (!prov_)
        throw std::invalid_argument("FQM: module has no lattice provenance");
    const auto& p = *prov_;
    if (dual.size() != p.gram.rows())
        throw std::invalid_argument("FQM: dual vector has the wrong length");
    RatVector y = to_rational(p.gram) * dual;
    IntVector yi;
    try {
        yi = to_integer(y);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("FQM: vector is not in the dual lattice");
    }
    IntVector c = p.reducer * yi;
    Element e(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        Integer m = c[i] % Integer(orders_[i]);
        if (m < 0)
            m += orders_[i];
        e[i] = m.get_si();
    }
    return e;
}

namespace {

// Inverse of a square matrix over F_p; throws if singular.
std::vector<std::vector<std::int64_t>> inverse_mod_p(std::vector<std::vector<std::int64_t>> a, std::int64_t p) {
    std::size_t n = a.size();
    std::vector<std::vector<std::int64_t>> inv(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        inv[i][i] = 1;
    auto md = [p](std::int64_t x) { return ((x % p) + p) % p; };
    auto inv_elt = [&](std::int64_t x) {
        for (std::int64_t y = 1; y < p; ++y)
            if (md(x * y) == 1)
                return y;
        throw std::invalid_argument("no inverse mod p");
    };
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && md(a[piv][c]) == 0)
            ++piv;
        if (piv == n)
            throw std::invalid_argument("FQM: new generators are not a basis");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        std::int64_t f = inv_elt(a[c][c]);
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] = md(a[c][j] * f);
            inv[c][j] = md(inv[c][j] * f);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || md(a[i][c]) == 0)
                continue;
            std::int64_t g = a[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] = md(a[i][j] - g * a[c][j]);
                inv[i][j] = md(inv[i][j] - g * inv[c][j]);
            }
        }
    }
    return inv;
}

}  // namespace

FiniteQuadraticModule FiniteQuadraticModule::relabel(const std::vector<RatVector>& new_lifts,
                                                     std::vector<std::string> new_labels) const {
    if (!prov_)
        throw std::invalid_argument("FQM relabel: module has no lattice provenance");
    if (new_lifts.size() != orders_.size())
        throw std::invalid_argument("FQM relabel: wrong number of generators");
    if (orders_.empty())
        return *this;
    std::int64_t p = orders_.front();
    for (auto d : orders_)
        if (d != p)
            throw std::domain_error("FQM relabel: only elementary abelian modules are supported");
    for (std::int64_t f = 2; f * f <= p; ++f)
        if (p % f == 0)
            throw std::domain_error("FQM relabel: only elementary abelian modules are supported");
    std::size_t k = orders_.size();
    std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k));
    for (std::size_t j = 0; j < k; ++j) {
        Element c = class_of(new_lifts[j]);
        for (std::size_t i = 0; i < k; ++i)
            m[i][j] = c[i];
    }
    auto minv = inverse_mod_p(m, p);
    const auto& pv = *prov_;
    std::size_t r = pv.gram.rows();
    IntMatrix reducer(k, r);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < r; ++c) {
            Integer s = 0;
            for (std::size_t l = 0; l < k; ++l)
                s += Integer(minv[i][l]) * pv.reducer(l, c);
            reducer(i, c) = s;
        }
    RatMatrix lifts = RatMatrix::from_columns(new_lifts, r);
    RatMatrix g = lifts.transpose() * to_rational(pv.gram) * lifts;
    FiniteQuadraticModule out(orders_, g, std::move(new_labels));
    out.set_provenance({pv.gram, lifts, reducer});
    return out;
}

FiniteQuadraticModule FiniteQuadraticModule::negated() const {
    RatMatrix g = gram_;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            g(i, j) = -g(i, j);
    FiniteQuadraticModule out(orders_, g, labels_);
    if (prov_) {
        IntMatrix lg = prov_->gram, red = prov_->reducer;
        for (std::size_t i = 0; i < lg.rows(); ++i)
            for (std::size_t j = 0; j < lg.cols(); ++j)
                lg(i, j) = -lg(i, j);
        for (std::size_t i = 0; i < red.rows(); ++i)
            for (std::size_t j = 0; j < red.cols(); ++j)
                red(i, j) = -red(i, j);
        out.set_provenance({lg, prov_->lifts, red});
    }
    return out;
}

QSignature q_signature_mod8(const FQM& a) {
    std::uint64_t n = a.size();
    if (n > (std::uint64_t(1) << 24))
        throw std::overflow_error("q_signature_mod8: group too large");
    bool exact = true;
    std::vector<Rational> qs;
    qs.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        qs.push_back(a.q(a.element(i)));
        if (Rational(qs.back() * 2).get_den() != 1)
            exact = false;
    }
    if (exact) {
        // e^{pi i q} with 2q integral is a power of i
        Integer re = 0, im = 0;
        for (auto& q : qs) {
            long k = Rational(q * 2).get_num().get_si() % 4;
            if (k == 0)
                re += 1;
            else if (k == 1)
                im += 1;
            else if (k == 2)
                re -= 1;
            else
                im -= 1;
        }
        if (re * re + im * im != Integer(static_cast<unsigned long>(n)))
            throw std::runtime_error("q_signature_mod8: Gauss sum magnitude mismatch");
        const int dirs[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
        for (int s = 0; s < 8; ++s) {
            Integer cross = re * dirs[s][1] - im * dirs[s][0];
            Integer along = re * dirs[s][0] + im * dirs[s][1];
            if (cross == 0 && along > 0)
                return {s, true};
        }
        throw std::runtime_error("q_signature_mod8: Gauss sum is not an eighth root of unity multiple");
    }
    long double re = 0, im = 0;
    const long double pi = std::acos(-1.0L);
    for (auto& q : qs) {
        long double x = pi * q.get_d();
        re += std::cos(x);
        im += std::sin(x);
    }
    long double mag2 = re * re + im * im;
    if (std::fabs(mag2 - static_cast<long double>(n)) > 1e-9L * static_cast<long double>(n))
        throw std::runtime_error("q_signature_mod8: Gauss sum magnitude mismatch");
    long double ang = std::atan2(im, re) / (pi / 4);
    long double r = std::round(ang);
    if (std::fabs(ang - r) > 1e-9L)
        throw std::runtime_error("q_signature_mod8: Gauss sum phase is not a multiple of pi/4");
    int s = static_cast<int>(r) % 8;
    if (s < 0)
        s += 8;
    return {s, false};
}

std::vector<FQM::Element> isotropic_elements(const FQM& a) {
    std::vector<FQM::Element> out;
    for (auto& x : a.elements())
        if (a.q(x) == 0)
            out.push_back(x);
    return out;
}

std::vector<std::uint64_t> generated_subgroup(const FQM& a, const std::vector<FQM::Element>& gens) {
    std::set<std::uint64_t> seen{a.index(a.zero())};
    std::deque<FQM::Element> todo{a.zero()};
    while (!todo.empty()) {
        FQM::Element x = todo.front();
        todo.pop_front();
        for (const auto& g : gens) {
            FQM::Element y = a.add(x, g);
            if (seen.insert(a.index(y)).second)
                todo.push_back(y);
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<std::vector<std::uint64_t>> isotropic_subgroups(const FQM& a) {
    if (a.size() > (std::uint64_t(1) << 12))
        throw std::overflow_error("isotropic_subgroups: group too large for exhaustive search");
    std::vector<std::uint64_t> iso;
    for (auto& x : isotropic_elements(a))
        iso.push_back(a.index(x));
    std::set<std::uint64_t> iso_set(iso.begin(), iso.end());
    std::set<std::vector<std::uint64_t>> found;
    std::deque<std::vector<std::uint64_t>> todo;
    std::vector<std::uint64_t> triv{a.index(a.zero())};
    found.insert(triv);
    todo.push_back(triv);
    while (!todo.empty()) {
        auto h = todo.front();
        todo.pop_front();
        std::set<std::uint64_t> hs(h.begin(), h.end());
        for (auto x : iso) {
            if (hs.count(x))
                continue;
            std::vector<FQM::Element> gens;
            for (auto e : h)
                gens.push_back(a.element(e));
            gens.push_back(a.element(x));
            auto g = generated_subgroup(a, gens);
            bool ok = std::all_of(g.begin(), g.end(), [&](std::uint64_t e) { return iso_set.count(e) > 0; });
            if (ok && found.insert(g).second)
                todo.push_back(g);
        }
    }
    std::vector<std::vector<std::uint64_t>> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
    return out;
}

FQM::Element FQMIsometry::apply(const FQM& a, const FQM::Element& x) const {
    if (images.size() != a.ngens())
        throw std::invalid_argument("isometry: wrong number of generator images");
    FQM::Element r = a.zero();
    FQM::Element c = a.reduce(x);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i])
            r = a.add(r, a.scale(images[i], c[i]));
    return r;
}

void verify_isometry(const FQM& a, const FQMIsometry& g) {
    if (g.images.size() != a.ngens())
        throw std::invalid_argument("isometry: wrong number of generator images");
    for (std::size_t i = 0; i < a.ngens(); ++i)
        if (a.scale(g.images[i], a.orders()[i]) != a.zero())
            throw std::invalid_argument("isometry: generator image has incompatible order");
    auto els = a.elements();
    std::vector<FQM::Element> img;
    std::set<std::uint64_t> seen;
    for (auto& x : els) {
        FQM::Element y = g.apply(a, x);
        if (a.q(y) != a.q(x))
            throw std::invalid_argument("isometry: q not preserved at " + a.element_str(x));
        seen.insert(a.index(y));
        img.push_back(y);
    }
    if (seen.size() != els.size())
        throw std::invalid_argument("isometry: map is not bijective");
    if (els.size() <= 4096)
        for (std::size_t i = 0; i < els.size(); ++i)
            for (std::size_t j = i; j < els.size(); ++j)
                if (a.b(img[i], img[j]) != a.b(els[i], els[j]))
                    throw std::invalid_argument("isometry: b not preserved");
}

Permutation to_permutation(const FQM& a, const FQMIsometry& g) {
    std::uint64_t n = a.size();
    Permutation p(n);
    for (std::uint64_t i = 0; i < n; ++i)
        p[i] = static_cast<std::uint32_t>(a.index(g.apply(a, a.element(i))));
    return p;
}

std::size_t PermGroup::index_of(const Permutation& p) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), p);
    if (it == elements.end() || *it != p)
        throw std::invalid_argument("permutation not in group");
    return static_cast<std::size_t>(it - elements.begin());
}

std::vector<std::vector<std::uint32_t>> PermGroup::multiplication_table() const {
    std::vector<std::vector<std::uint32_t>> t(elements.size(), std::vector<std::uint32_t>(elements.size()));
    Permutation c(degree);
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = 0; j < elements.size(); ++j) {
            for (std::size_t x = 0; x < degree; ++x)
                c[x] = elements[i][elements[j][x]];
            t[i][j] = static_cast<std::uint32_t>(index_of(c));
        }
    return t;
}

PermGroup group_closure(const FQM& a, const std::vector<FQMIsometry>& gens) {
    std::vector<Permutation> gp;
    for (const auto& g : gens) {
        verify_isometry(a, g);
        gp.push_back(to_permutation(a, g));
    }
    std::uint64_t n = a.size();
    Permutation id(n);
    std::iota(id.begin(), id.end(), 0u);
    std::set<Permutation> seen{id};
    std::deque<Permutation> todo{id};
    while (!todo.empty()) {
        Permutation e = todo.front();
        todo.pop_front();
        for (const auto& g : gp) {
            Permutation c(n);
            for (std::uint64_t x = 0; x < n; ++x)
                c[x] = g[e[x]];
            if (seen.insert(c).second)
                todo.push_back(c);
        }
    }
    PermGroup G;
    G.degree = n;
    G.elements.assign(seen.begin(), seen.end());
    return G;
}

bool injectivity_check(std::size_t abstract_order, const FQM& a, const std::vector<FQMIsometry>& gens) {
    return group_closure(a, gens).order() == abstract_order;
}

std::vector<std::vector<std::uint64_t>> orbits(const PermGroup& g, const std::vector<std::uint64_t>& subset) {
    std::set<std::uint64_t> s(subset.begin(), subset.end());
    for (auto x : s) {
        if (x >= g.degree)
            throw std::invalid_argument("orbits: element index out of range");
        for (const auto& p : g.elements)
            if (!s.count(p[x]))
                throw std::invalid_argument("orbits: subset is not invariant under the group");
    }
    std::set<std::uint64_t> done;
    std::vector<std::vector<std::uint64_t>> out;
    for (auto x : s) {
        if (done.count(x))
            continue;
        std::set<std::uint64_t> orb;
        for (const auto& p : g.elements)
            orb.insert(p[x]);
        done.insert(orb.begin(), orb.end());
        out.emplace_back(orb.begin(), orb.end());
    }
    return out;
}

}  // namespace vgitk3
