#include "vgitk3/vinberg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vgitk3::vinberg {

HyperbolicLattice::HyperbolicLattice(Lattice l) : l_(std::move(l)) {
    l_.validate();
    if (!l_.even())
        throw std::invalid_argument("hyperbolic lattice: not even");
    Signature s = signature(l_.gram);
    if (s.plus != 1 || s.zero != 0 || s.minus < 1)
        throw std::invalid_argument("hyperbolic lattice: signature is not (1,n)");
}

namespace {

// Q(y) = sum_i d_i (y_i + sum_{j>i} mu_ij y_j)^2
struct Decomposition {
    std::size_t n = 0;
    std::vector<std::vector<Rational>> q;
};

Decomposition decompose(const IntMatrix& gram) {
    std::size_t n = gram.rows();
    Decomposition d;
    d.n = n;
    d.q.assign(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d.q[i][j] = gram(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        if (d.q[i][i] <= 0)
            throw std::invalid_argument("enumeration: form is not positive definite");
        for (std::size_t j = i + 1; j < n; ++j) {
            d.q[j][i] = d.q[i][j];
            d.q[i][j] /= d.q[i][i];
        }
        for (std::size_t l = i + 1; l < n; ++l)
            for (std::size_t k = l; k < n; ++k)
                d.q[l][k] -= d.q[l][i] * d.q[i][k];
    }
    return d;
}

bool rational_sqrt(const Rational& x, Rational& out) {
    if (x < 0)
        return false;
    if (mpz_perfect_square_p(x.get_num_mpz_t()) == 0 || mpz_perfect_square_p(x.get_den_mpz_t()) == 0)
        return false;
    Integer a, b;
    mpz_sqrt(a.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), x.get_den_mpz_t());
    out = ratio(a, b);
    return true;
}

// All integer y with Q(y - c) = r exactly.
void enumerate_shell(const Decomposition& d, const RatVector& c, const Rational& r,
                     const std::function<void(const std::vector<long>&)>& emit, std::uint64_t& nodes) {
    std::size_t n = d.n;
    if (n == 0) {
        if (r == 0)
            emit({});
        return;
    }
    std::vector<long> y(n, 0);
    std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t i, const Rational& t) {
        ++nodes;
        Rational ci = c[i];
        for (std::size_t j = i + 1; j < n; ++j)
            ci -= d.q[i][j] * (Rational(y[j]) - c[j]);
        Rational s2 = t / d.q[i][i];
        if (i == 0) {
            Rational s;
            if (!rational_sqrt(s2, s))
                return;
            for (int sign : {-1, 1}) {
                Rational v = ci + Rational(sign) * s;
                if (v.get_den() != 1)
                    continue;
                y[0] = v.get_num().get_si();
                emit(y);
                if (s == 0)
                    break;
            }
            return;
        }
        double sd = std::sqrt(std::max(0.0, s2.get_d()));
        double cd = ci.get_d();
        long lo = static_cast<long>(std::floor(cd - sd)) - 1;
        long hi = static_cast<long>(std::ceil(cd + sd)) + 1;
        for (long v = lo; v <= hi; ++v) {
            Rational diff = Rational(v) - ci;
            Rational used = d.q[i][i] * diff * diff;
            if (used > t)
                continue;
            y[i] = v;
            rec(i - 1, t - used);
        }
        y[i] = 0;
    };
    rec(n - 1, r);
}

bool lex_positive(const IntVector& v) {
    for (const auto& x : v)
        if (x != 0)
            return x > 0;
    return false;
}

IntVector negate(IntVector v) {
    for (auto& x : v)
        x = -x;
    return v;
}

}  // namespace

std::vector<IntVector> short_vectors(const Lattice& lneg, const Integer& norm, bool up_to_sign) {
    lneg.validate();
    std::size_t r = lneg.rank();
    IntMatrix q(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            q(i, j) = -lneg.gram(i, j);
    Signature s = signature(q);
    if (s.plus != r)
        throw std::invalid_argument("short_vectors: lattice is not negative definite");
    if (norm >= 0)
        throw std::invalid_argument("short_vectors: norm must be negative");
    std::vector<IntVector> out;
    if (r == 0)
        return out;
    IntMatrix t = lll_transform(q);
    IntMatrix qr = t.transpose() * q * t;
    Decomposition d = decompose(qr);
    std::uint64_t nodes = 0;
    enumerate_shell(d, RatVector(r, Rational(0)), Rational(-norm), [&](const std::vector<long>& y) {
        IntVector yi(y.begin(), y.end());
        IntVector v = t * yi;
        if (!up_to_sign || lex_positive(v))
            out.push_back(v);
    }, nodes);
    std::sort(out.begin(), out.end());
    return out;
}

RootEnumerator::RootEnumerator(const HyperbolicLattice& n, const IntVector& h) : g_(n.gram()), h_(h) {
    if (h.size() != n.rank())
        throw std::invalid_argument("roots: h has the wrong length");
    if (bilinear(g_, h, h) <= 0)
        throw std::invalid_argument("roots: h must have positive square");
    gh_ = g_ * h;
    auto ker = integer_kernel(IntMatrix::from_rows({gh_}));
    IntMatrix k = IntMatrix::from_rows(ker);
    IntMatrix q0 = k * g_ * k.transpose();
    for (std::size_t i = 0; i < q0.rows(); ++i)
        for (std::size_t j = 0; j < q0.cols(); ++j)
            q0(i, j) = -q0(i, j);
    IntMatrix t = lll_transform(q0);
    k_ = t.transpose() * k;
    q_ = k_ * g_ * k_.transpose();
    for (std::size_t i = 0; i < q_.rows(); ++i)
        for (std::size_t j = 0; j < q_.cols(); ++j)
            q_(i, j) = -q_(i, j);
    qinv_ = rational_inverse(q_);
}

std::vector<IntVector> RootEnumerator::at_height(const Integer& m, const Integer& norm) const {
    nodes_ = 0;
    auto x0 = solve_row(gh_, m);
    if (!x0)
        return {};
    IntVector b = k_ * (g_ * *x0);
    RatVector center = qinv_ * to_rational(b);
    Rational r = Rational(bilinear(g_, *x0, *x0) - norm) + dot(to_rational(b), center);
    if (r < 0)
        return {};
    std::vector<IntVector> out;
    Decomposition d = decompose(q_);
    std::uint64_t nodes = 0;
    enumerate_shell(d, center, r, [&](const std::vector<long>& y) {
        IntVector v = *x0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i])
                for (std::size_t j = 0; j < v.size(); ++j)
                    v[j] += k_(i, j) * y[i];
        out.push_back(v);
    }, nodes);
    nodes_ = nodes;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IntVector> roots_at_height(const HyperbolicLattice& n, const IntVector& h, const Integer& m) {
    return RootEnumerator(n, h).at_height(m);
}

Integer CoxeterDiagram::weight(std::size_t i, std::size_t j) const {
    if (i == j)
        return -2;
    auto it = edges.find({std::min(i, j), std::max(i, j)});
    return it == edges.end() ? Integer(0) : it->second;
}

CoxeterDiagram CoxeterDiagram::from_gram(const IntMatrix& gram) {
    CoxeterDiagram d;
    std::size_t n = gram.rows();
    for (std::size_t i = 0; i < n; ++i) {
        IntVector e(n, Integer(0));
        e[i] = 1;
        d.nodes.push_back({e, Integer(0), i});
        for (std::size_t j = i + 1; j < n; ++j)
            if (gram(i, j) != 0)
                d.edges[{i, j}] = gram(i, j);
    }
    return d;
}

std::string CoxeterDiagram::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        os << "node " << i << " [";
        for (std::size_t j = 0; j < nodes[i].vector.size(); ++j)
            os << (j ? " " : "") << nodes[i].vector[j].get_str();
        os << "] " << nodes[i].height.get_str() << "\n";
    }
    for (const auto& [e, w] : edges)
        os << "edge " << e.first << " " << e.second << " " << w.get_str() << "\n";
    return os.str();
}

namespace {

IntMatrix sub_gram(const CoxeterDiagram& d, const std::vector<std::size_t>& s) {
    IntMatrix g(s.size(), s.size());
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b)
            g(a, b) = d.weight(s[a], s[b]);
    return g;
}

enum class Kind { elliptic, parabolic, other };

Kind classify_connected(const CoxeterDiagram& d, const std::vector<std::size_t>& s) {
    Signature sig = signature(sub_gram(d, s));
    if (sig.plus != 0)
        return Kind::other;
    if (sig.zero == 0)
        return Kind::elliptic;
    if (sig.zero == 1)
        return Kind::parabolic;
    return Kind::other;
}

AffineComponent identify(const CoxeterDiagram& d, std::vector<std::size_t> s) {
    std::sort(s.begin(), s.end());
    AffineComponent c;
    c.nodes = s;
    std::size_t k = s.size();
    c.rank = k - 1;
    std::vector<std::size_t> deg(k, 0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            if (a != b && d.weight(s[a], s[b]) != 0)
                ++deg[a];
    std::size_t branch = 0, maxdeg = 0;
    for (auto x : deg) {
        if (x >= 3)
            ++branch;
        maxdeg = std::max(maxdeg, x);
    }
    if (k == 2 || (branch == 0 && std::all_of(deg.begin(), deg.end(), [](std::size_t x) { return x == 2; }))) {
        c.type = AffineType::A;
    } else if (maxdeg == 4 || branch == 2) {
        c.type = AffineType::D;
    } else if (branch == 1) {
        // arm lengths from the branch node decide between D~ and E~
        std::size_t center = static_cast<std::size_t>(std::find_if(deg.begin(), deg.end(), [](std::size_t x) { return x >= 3; }) - deg.begin());
        std::vector<std::size_t> arms;
        for (std::size_t nb = 0; nb < k; ++nb) {
            if (nb == center || d.weight(s[center], s[nb]) == 0)
                continue;
            std::size_t len = 1, prev = center, cur = nb;
            while (true) {
                std::size_t next = k;
                for (std::size_t x = 0; x < k; ++x)
                    if (x != prev && x != cur && d.weight(s[cur], s[x]) != 0)
                        next = x;
                if (next == k)
                    break;
                prev = cur;
                cur = next;
                ++len;
            }
            arms.push_back(len);
        }
        std::sort(arms.begin(), arms.end());
        if (arms == std::vector<std::size_t>{2, 2, 2} || arms == std::vector<std::size_t>{1, 3, 3} ||
            arms == std::vector<std::size_t>{1, 2, 5})
            c.type = AffineType::E;
        else
            throw std::logic_error("parabolic component with unrecognized shape");
    } else {
        throw std::logic_error("parabolic component with unrecognized shape");
    }
    auto ker = integer_kernel(sub_gram(d, s));
    if (ker.size() != 1)
        throw std::logic_error("parabolic component without a one-dimensional kernel");
    IntVector m = ker[0];
    if (m[0] < 0)
        m = negate(m);
    c.marks = m;
    return c;
}

}  // namespace

std::string AffineComponent::finite_name() const {
    std::string letter = type == AffineType::A ? "A" : type == AffineType::D ? "D" : "E";
    return letter + "_" + std::to_string(rank);
}

std::vector<AffineComponent> connected_parabolics(const CoxeterDiagram& d) {
    std::size_t n = d.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [e, w] : d.edges)
        if (w != 0) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
    std::vector<AffineComponent> out;
    std::set<std::vector<std::size_t>> seen;
    // ESU enumeration of connected induced subgraphs with minimum vertex v; only
    // elliptic sets are extended since every proper subdiagram of a parabolic one is elliptic.
    std::function<void(std::vector<std::size_t>&, std::vector<std::size_t>, std::size_t)> extend =
        [&](std::vector<std::size_t>& sub, std::vector<std::size_t> ext, std::size_t v) {
            Kind k = classify_connected(d, sub);
            if (k == Kind::parabolic) {
                std::vector<std::size_t> s = sub;
                std::sort(s.begin(), s.end());
                if (seen.insert(s).second)
                    out.push_back(identify(d, s));
                return;
            }
            if (k == Kind::other)
                return;
            while (!ext.empty()) {
                std::size_t w = ext.back();
                ext.pop_back();
                std::vector<std::size_t> ext2 = ext;
                for (std::size_t u : adj[w]) {
                    if (u <= v)
                        continue;
                    if (std::find(sub.begin(), sub.end(), u) != sub.end())
                        continue;
                    if (std::find(ext2.begin(), ext2.end(), u) != ext2.end())
                        continue;
                    bool touches = false;
                    for (std::size_t x : sub)
                        if (x != w && d.weight(x, u) != 0)
                            touches = true;
                    if (u == w || touches)
                        continue;
                    ext2.push_back(u);
                }
                sub.push_back(w);
                extend(sub, ext2, v);
                sub.pop_back();
            }
        };
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::size_t> sub{v};
        std::vector<std::size_t> ext;
        for (std::size_t u : adj[v])
            if (u > v)
                ext.push_back(u);
        extend(sub, ext, v);
    }
    std::sort(out.begin(), out.end(), [](const AffineComponent& a, const AffineComponent& b) { return a.nodes < b.nodes; });
    return out;
}

std::string label_of(std::vector<std::pair<AffineType, std::size_t>> parts) {
    std::sort(parts.begin(), parts.end());
    std::string out;
    const std::string sep = "\xE2\x8A\xA5";
    std::size_t i = 0;
    while (i < parts.size()) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i])
            ++j;
        std::string letter = parts[i].first == AffineType::A ? "A" : parts[i].first == AffineType::D ? "D" : "E";
        std::string name = letter + "_" + std::to_string(parts[i].second);
        if (parts[i].first == AffineType::A && parts[i].second == 1 && j - i > 1) {
            out += (out.empty() ? "" : sep) + name + "^" + std::to_string(j - i);
        } else {
            for (std::size_t k = i; k < j; ++k)
                out += (out.empty() ? "" : sep) + name;
        }
        i = j;
    }
    return out;
}

std::vector<ParabolicClass> detect_parabolic(const CoxeterDiagram& d, std::size_t total_rank) {
    auto comps = connected_parabolics(d);
    std::size_t m = comps.size();
    std::vector<std::vector<bool>> ok(m, std::vector<bool>(m, true));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b)
                continue;
            for (auto x : comps[a].nodes)
                for (auto y : comps[b].nodes)
                    if (x == y || d.weight(x, y) != 0)
                        ok[a][b] = false;
        }
    std::vector<ParabolicClass> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t rank) {
        if (rank == total_rank) {
            ParabolicClass pc;
            std::vector<std::pair<AffineType, std::size_t>> parts;
            for (auto i : pick) {
                pc.components.push_back(comps[i]);
                parts.push_back({comps[i].type, comps[i].rank});
            }
            pc.total_rank = rank;
            pc.label = label_of(parts);
            out.push_back(pc);
            return;
        }
        for (std::size_t i = start; i < m; ++i) {
            if (rank + comps[i].rank > total_rank)
                continue;
            bool good = true;
            for (auto p : pick)
                if (!ok[p][i])
                    good = false;
            if (!good)
                continue;
            pick.push_back(i);
            rec(i + 1, rank + comps[i].rank);
            pick.pop_back();
        }
    };
    if (total_rank > 0)
        rec(0, 0);
    return out;
}

bool stop_criterion(const CoxeterDiagram& d, std::size_t n) {
    auto comps = connected_parabolics(d);
    if (comps.empty())
        return true;
    if (n < 1)
        return false;
    auto classes = detect_parabolic(d, n - 1);
    for (const auto& c : comps) {
        bool found = false;
        for (const auto& pc : classes)
            for (const auto& x : pc.components)
                if (x.nodes == c.nodes)
                    found = true;
        if (!found)
            return false;
    }
    return true;
}

namespace {

// Vinberg's finite-volume test: every elliptic subdiagram of rank n-1 extends in exactly
// two ways to an elliptic subdiagram of rank n or a parabolic subdiagram of rank n-1.
bool finite_volume(const CoxeterDiagram& d, std::size_t n) {
    std::size_t k = d.size();
    if (n < 2)
        return true;
    auto classes = detect_parabolic(d, n - 1);
    if (classes.empty())
        return false;
    std::vector<std::set<std::size_t>> pnodes;
    for (const auto& pc : classes) {
        std::set<std::size_t> s;
        for (const auto& c : pc.components)
            s.insert(c.nodes.begin(), c.nodes.end());
        pnodes.push_back(s);
    }
    bool good = true;
    std::vector<std::size_t> sub;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!good)
            return;
        if (!sub.empty() && signature(sub_gram(d, sub)).minus != sub.size())
            return;
        if (sub.size() == n - 1) {
            std::size_t ways = 0;
            for (std::size_t x = 0; x < k; ++x) {
                if (std::find(sub.begin(), sub.end(), x) != sub.end())
                    continue;
                auto s2 = sub;
                s2.push_back(x);
                if (signature(sub_gram(d, s2)).minus == n)
                    ++ways;
            }
            for (const auto& p : pnodes) {
                bool inside = std::all_of(sub.begin(), sub.end(), [&](std::size_t x) { return p.count(x) > 0; });
                if (inside)
                    ++ways;
            }
            if (ways != 2)
                good = false;
            return;
        }
        for (std::size_t x = start; x < k; ++x) {
            sub.push_back(x);
            rec(x + 1);
            sub.pop_back();
        }
    };
    rec(0);
    return good;
}

}  // namespace

VinbergResult vinberg_run(const HyperbolicLattice& n, const IntVector& h, const Integer& max_height) {
    if (content(h) != 1)
        throw std::invalid_argument("vinberg: h is not primitive");
    if (bilinear(n.gram(), h, h) <= 0)
        throw std::invalid_argument("vinberg: h must have positive square");
    RootEnumerator en(n, h);
    VinbergResult res;
    auto& nodes = res.diagram.nodes;
    auto accept = [&](const IntVector& r, const Integer& m) {
        std::size_t idx = nodes.size();
        for (std::size_t i = 0; i < idx; ++i) {
            Integer w = bilinear(n.gram(), nodes[i].vector, r);
            if (w != 0)
                res.diagram.edges[{i, idx}] = w;
        }
        nodes.push_back({r, m, idx});
    };
    // height 0: simple roots of the finite root system in h^perp, positivity by lex order
    auto r0 = en.at_height(0);
    std::set<IntVector> pos;
    for (const auto& r : r0)
        if (lex_positive(r))
            pos.insert(r);
    std::vector<IntVector> simple;
    for (const auto& a : pos) {
        bool decomposable = false;
        for (const auto& b : pos) {
            IntVector diff(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                diff[i] = a[i] - b[i];
            if (pos.count(diff)) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable)
            simple.push_back(a);
    }
    for (const auto& s : simple)
        accept(s, 0);
    res.log.push_back({0, r0.size(), simple.size(), en.last_nodes()});
    res.last_height = 0;
    for (Integer m = 1; m <= max_height; ++m) {
        auto cands = en.at_height(m);
        HeightLog hl{m, cands.size(), 0, en.last_nodes()};
        for (const auto& c : cands) {
            bool ok = true;
            for (const auto& a : nodes)
                if (bilinear(n.gram(), a.vector, c) < 0) {
                    ok = false;
                    break;
                }
            if (ok) {
                accept(c, m);
                ++hl.accepted;
            }
        }
        res.log.push_back(hl);
        res.last_height = m;
        if (hl.accepted > 0 && stop_criterion(res.diagram, n.n()) && finite_volume(res.diagram, n.n())) {
            res.stopped = true;
            break;
        }
    }
    return res;
}

IntVector null_vector(const CoxeterDiagram& d, const AffineComponent& c) {
    std::size_t r = d.nodes.at(c.nodes.at(0)).vector.size();
    IntVector z(r, Integer(0));
    for (std::size_t i = 0; i < c.nodes.size(); ++i)
        for (std::size_t j = 0; j < r; ++j)
            z[j] += c.marks[i] * d.nodes[c.nodes[i]].vector[j];
    return primitive(z);
}

Classification classify_isotropic(const HyperbolicLattice& n, const IntVector& h, const Integer& max_height) {
    Classification out;
    out.run = vinberg_run(n, h, max_height);
    out.stopped = out.run.stopped;
    if (!out.stopped)
        throw std::runtime_error("vinberg: run did not stop within height " + max_height.get_str());
    out.classes = detect_parabolic(out.run.diagram, n.n() - 1);
    std::set<std::string> labels;
    for (auto& pc : out.classes) {
        pc.isotropic = null_vector(out.run.diagram, pc.components.at(0));
        labels.insert(pc.label);
    }
    out.labels.assign(labels.begin(), labels.end());
    return out;
}

}  // namespace vgitk3::vinberg
