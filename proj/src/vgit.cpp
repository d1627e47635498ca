#include "vgitk3/vgit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vgitk3::vgit {

Support Support::of(const Polynomial& p) {
    Support s;
    s.degree = p.homogeneous_degree();
    for (auto& e : p.support())
        s.monomials.insert(e);
    return s;
}

void Tuple::validate() const {
    if (n < 1)
        throw std::invalid_argument("tuple: n must be at least 1");
    auto check = [&](const Support& s, const char* what) {
        if (s.monomials.empty())
            throw std::invalid_argument(std::string("tuple: empty support for ") + what);
        if (s.degree < 1)
            throw std::invalid_argument(std::string("tuple: nonpositive degree for ") + what);
        for (const auto& m : s.monomials) {
            if (m.size() != static_cast<std::size_t>(n + 2))
                throw std::invalid_argument(std::string("tuple: exponent length mismatch in ") + what);
            std::int64_t sum = 0;
            for (auto x : m) {
                if (x < 0)
                    throw std::invalid_argument(std::string("tuple: negative exponent in ") + what);
                sum += x;
            }
            if (sum != s.degree)
                throw std::invalid_argument(std::string("tuple: monomial of wrong degree in ") + what);
        }
    };
    check(hypersurface, "hypersurface");
    for (const auto& h : hyperplanes) {
        check(h, "hyperplane");
        if (h.degree != 1)
            throw std::invalid_argument("tuple: hyperplane support must have degree 1");
    }
}

Tuple tuple_from_polynomials(int n, const Polynomial& f, const std::vector<Polynomial>& lines) {
    Tuple t;
    t.n = n;
    if (f.nvars() != static_cast<std::size_t>(n + 2))
        throw std::invalid_argument("hypersurface has the wrong number of variables");
    if (f.is_zero())
        throw std::invalid_argument("hypersurface equation is zero");
    t.hypersurface = Support::of(f);
    for (const auto& l : lines) {
        if (l.is_zero())
            throw std::invalid_argument("hyperplane equation is zero");
        if (l.nvars() != static_cast<std::size_t>(n + 2))
            throw std::invalid_argument("hyperplane has the wrong number of variables");
        t.hyperplanes.push_back(Support::of(l));
    }
    t.validate();
    return t;
}

std::int64_t pairing(const Exponent& m, const OneParam& lam) {
    if (m.size() != lam.size())
        throw std::invalid_argument("pairing: dimension mismatch");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        s += m[i] * lam[i];
    return s;
}

std::int64_t mu(const Support& g, const OneParam& lam) {
    if (g.monomials.empty())
        throw std::invalid_argument("mu: empty support");
    std::int64_t best = 0;
    bool first = true;
    for (const auto& m : g.monomials) {
        std::int64_t v = pairing(m, lam);
        if (first || v < best)
            best = v;
        first = false;
    }
    return best;
}

Rational mu_t(const Tuple& tup, const Weights& t, const OneParam& lam) {
    if (t.size() != tup.hyperplanes.size())
        throw std::invalid_argument("mu_t: weight vector length does not match hyperplane count");
    Rational v = Rational(Integer(static_cast<long>(mu(tup.hypersurface, lam))));
    for (std::size_t i = 0; i < t.size(); ++i)
        v += t[i] * Rational(Integer(static_cast<long>(mu(tup.hyperplanes[i], lam))));
    return v;
}

bool is_normalized(const OneParam& lam) {
    std::int64_t sum = 0;
    bool nonzero = false;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        sum += lam[i];
        if (lam[i] != 0)
            nonzero = true;
        if (i + 1 < lam.size() && lam[i] < lam[i + 1])
            return false;
    }
    return sum == 0 && nonzero;
}

namespace {

std::int64_t gcd_all(const std::vector<std::int64_t>& v) {
    std::int64_t g = 0;
    for (auto x : v)
        g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

void enumerate_monomials(int nvars, std::int64_t deg, std::vector<Exponent>& out) {
    Exponent cur(nvars, 0);
    std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t left) {
        if (i == nvars - 1) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (std::int64_t a = left; a >= 0; --a) {
            cur[i] = a;
            rec(i + 1, left - a);
        }
    };
    rec(0, deg);
}

std::int64_t to_i64(const Integer& z) {
    if (!z.fits_slong_p())
        throw std::overflow_error("value does not fit in 64 bits");
    return z.get_si();
}

}  // namespace

std::vector<OneParam> eq_set(int n, int d) {
    int m = n + 2;
    std::set<OneParam> reps;
    OneParam cur(m, 0);
    std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t sum) {
        if (i == m - 1) {
            std::int64_t last = -sum;
            if (last < -d || last > d)
                return;
            cur[i] = last;
            std::int64_t g = gcd_all(cur);
            if (g == 0)
                return;
            OneParam p(cur);
            for (auto& x : p)
                x /= g;
            auto lead = std::find_if(p.begin(), p.end(), [](std::int64_t x) { return x != 0; });
            if (*lead < 0)
                for (auto& x : p)
                    x = -x;
            reps.insert(p);
            return;
        }
        for (std::int64_t a = -d; a <= d; ++a) {
            cur[i] = a;
            rec(i + 1, sum + a);
        }
    };
    rec(0, 0);
    return {reps.begin(), reps.end()};
}

namespace {

std::optional<OneParam> solve_gamma(int n, const std::vector<const OneParam*>& eqs) {
    std::size_t m = n + 2;
    RatMatrix a(m, m);
    RatVector b(m);
    a(0, 0) = 1;
    b[0] = 1;
    for (std::size_t j = 0; j < m; ++j)
        a(1, j) = 1;
    for (std::size_t r = 0; r < eqs.size(); ++r)
        for (std::size_t j = 0; j < m; ++j)
            a(2 + r, j) = Rational(Integer(static_cast<long>((*eqs[r])[j])));
    if (determinant(a) == 0)
        return std::nullopt;
    RatVector g = rational_inverse(a) * b;
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (g[i] < g[i + 1])
            return std::nullopt;
    Integer l = lcm_of_denominators(g);
    OneParam out(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational s = g[i] * l;
        out[i] = to_i64(s.get_num());
    }
    return out;
}

}  // namespace

std::vector<OneParam> fundamental_set(int n, int d) {
    if (n < 1 || d < 1)
        throw std::invalid_argument("fundamental_set: need n >= 1 and d >= 1");
    if (n > 2)
        throw std::domain_error("fundamental_set: only n <= 2 is supported");
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<OneParam>> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({n, d});
        if (it != cache.end())
            return it->second;
    }
    auto eqs = eq_set(n, d);
    std::set<OneParam> members;
    std::vector<const OneParam*> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (chosen.size() == static_cast<std::size_t>(n)) {
            if (auto g = solve_gamma(n, chosen))
                members.insert(*g);
            return;
        }
        for (std::size_t i = start; i < eqs.size(); ++i) {
            chosen.push_back(&eqs[i]);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    std::vector<OneParam> out(members.begin(), members.end());
    std::lock_guard<std::mutex> lock(mtx);
    cache[{n, d}] = out;
    return out;
}

std::vector<OneParam> weyl_orbit_set(int n, int d) {
    std::set<OneParam> all;
    for (auto lam : fundamental_set(n, d)) {
        std::sort(lam.begin(), lam.end());
        do {
            all.insert(lam);
        } while (std::next_permutation(lam.begin(), lam.end()));
    }
    return {all.begin(), all.end()};
}

Worst torus_worst(const Tuple& tup, const Weights& t) {
    tup.validate();
    Worst w;
    bool first = true;
    for (const auto& lam : weyl_orbit_set(tup.n, tup.d())) {
        Rational v = mu_t(tup, t, lam);
        if (first || v > w.value) {
            w.value = v;
            w.lam = lam;
            first = false;
        }
    }
    return w;
}

bool torus_semistable_centroid(const Tuple& tup, const Weights& t) {
    tup.validate();
    if (t.size() != tup.hyperplanes.size())
        throw std::invalid_argument("centroid: weight vector length does not match hyperplane count");
    std::size_t m = tup.nvars();
    std::vector<RatVector> pts;
    for (const auto& e : tup.hypersurface.monomials) {
        RatVector p(m);
        for (std::size_t i = 0; i < m; ++i)
            p[i] = Rational(Integer(static_cast<long>(e[i])));
        pts.push_back(p);
    }
    for (std::size_t h = 0; h < tup.hyperplanes.size(); ++h) {
        std::vector<RatVector> next;
        for (const auto& p : pts)
            for (const auto& e : tup.hyperplanes[h].monomials) {
                RatVector q(p);
                for (std::size_t i = 0; i < m; ++i)
                    q[i] += t[h] * Rational(Integer(static_cast<long>(e[i])));
                next.push_back(q);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        pts = std::move(next);
    }
    Rational total = Rational(tup.d());
    for (const auto& x : t)
        total += x;
    RatVector center(m, total / Rational(static_cast<long>(m)));
    return hull_contains(pts, center);
}

Rational HalfPlane::eval(const Weights& t) const {
    if (t.size() != c.size())
        throw std::invalid_argument("half-plane: dimension mismatch");
    Rational v = c0;
    for (std::size_t i = 0; i < c.size(); ++i)
        v += c[i] * t[i];
    return v;
}

bool StabRegion::contains(const Weights& t) const {
    for (const auto& h : inequalities)
        if (h.eval(t) < 0)
            return false;
    return true;
}

bool StabRegion::interior_contains(const Weights& t) const {
    for (const auto& h : inequalities)
        if (h.eval(t) <= 0)
            return false;
    return true;
}

std::vector<Weights> StabRegion::vertices() const {
    std::set<Weights> found;
    for (std::size_t i = 0; i < inequalities.size(); ++i)
        for (std::size_t j = i + 1; j < inequalities.size(); ++j) {
            const auto& a = inequalities[i];
            const auto& b = inequalities[j];
            if (a.c.size() != 2 || b.c.size() != 2)
                throw std::domain_error("vertex enumeration is planar only");
            Rational det = a.c[0] * b.c[1] - a.c[1] * b.c[0];
            if (det == 0)
                continue;
            Weights p{(-a.c0 * b.c[1] + b.c0 * a.c[1]) / det, (-a.c[0] * b.c0 + b.c[0] * a.c0) / det};
            if (contains(p))
                found.insert(p);
        }
    std::vector<Weights> v(found.begin(), found.end());
    if (v.size() > 2) {
        Weights o = v.front();
        std::sort(v.begin() + 1, v.end(), [&](const Weights& p, const Weights& q) {
            Rational cr = (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
            return cr > 0;
        });
    }
    return v;
}

StabRegion stab_region(int d) {
    if (d < 1)
        throw std::invalid_argument("stab_region: d must be positive");
    Rational dd(d);
    StabRegion r;
    r.inequalities.push_back({dd, {Rational(-2), Rational(1)}});
    r.inequalities.push_back({dd, {Rational(1), Rational(-2)}});
    r.inequalities.push_back({Rational(0), {Rational(1), Rational(0)}});
    r.inequalities.push_back({Rational(0), {Rational(0), Rational(1)}});
    return r;
}

Wall normalize_wall(std::vector<std::int64_t> coeffs) {
    std::int64_t g = gcd_all(coeffs);
    if (g == 0)
        throw std::invalid_argument("normalize_wall: zero form");
    for (auto& x : coeffs)
        x /= g;
    auto lead = std::find_if(coeffs.begin(), coeffs.end(), [](std::int64_t x) { return x != 0; });
    if (*lead < 0)
        for (auto& x : coeffs)
            x = -x;
    return {coeffs};
}

std::string wall_str(const Wall& w) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        std::int64_t c = w.coeffs[i];
        if (c == 0)
            continue;
        std::int64_t a = c < 0 ? -c : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        if (i == 0)
            os << a;
        else {
            if (a != 1)
                os << a << "*";
            os << "t" << i;
        }
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

std::vector<Wall> candidate_walls(int n, int d, int k, WallFilter filter) {
    if (k < 0)
        throw std::invalid_argument("candidate_walls: negative k");
    if (filter == WallFilter::stab_interior && !(n == 1 && k == 2))
        throw std::domain_error("candidate_walls: Stab filtering is available for n = 1, k = 2 only");
    std::vector<Exponent> monos;
    enumerate_monomials(n + 2, d, monos);
    auto lams = fundamental_set(n, d);
    std::set<Wall> walls;
    std::vector<int> idx(k, 0);
    for (const auto& lam : lams) {
        for (const auto& m : monos) {
            std::int64_t c0 = pairing(m, lam);
            std::fill(idx.begin(), idx.end(), 0);
            for (;;) {
                std::vector<std::int64_t> c{c0};
                bool depends = false;
                for (int j = 0; j < k; ++j) {
                    c.push_back(lam[idx[j]]);
                    if (lam[idx[j]] != 0)
                        depends = true;
                }
                if (depends)
                    walls.insert(normalize_wall(c));
                int j = 0;
                while (j < k && ++idx[j] == n + 2)
                    idx[j++] = 0;
                if (j == k)
                    break;
            }
        }
    }
    std::vector<Wall> out;
    if (filter == WallFilter::none)
        return {walls.begin(), walls.end()};
    auto verts = stab_region(d).vertices();
    for (const auto& w : walls) {
        bool pos = false, neg = false;
        for (const auto& v : verts) {
            Rational val = Rational(w.coeffs[0]) + Rational(w.coeffs[1]) * v[0] + Rational(w.coeffs[2]) * v[1];
            if (val > 0)
                pos = true;
            if (val < 0)
                neg = true;
        }
        if (pos && neg)
            out.push_back(w);
    }
    return out;
}

HalfPlane bound_2gen(std::int64_t w1, std::int64_t w2, std::int64_t wdeg, int d, Bound2GenCase c) {
    if (w2 <= 0 || wdeg <= 0)
        throw std::invalid_argument("bound_2gen: weights must be positive");
    if (w1 < w2)
        throw std::invalid_argument("bound_2gen: need w1 >= w2");
    Rational s(w1 + w2);
    Rational c0 = Rational(d) - Rational(3 * wdeg) / s;
    if (c == Bound2GenCase::exterior)
        return {c0, {Rational(1), Rational(1)}};
    return {c0, {-Rational(2 * w2 - w1) / s, Rational(1)}};
}

OneParam bound_2gen_witness(std::int64_t w1, std::int64_t w2) {
    if (w1 < w2 || w2 <= 0)
        throw std::invalid_argument("bound_2gen_witness: need w1 >= w2 > 0");
    return {2 * w1 - w2, 2 * w2 - w1, -w1 - w2};
}

Support sumset(const Support& a, const Support& b) {
    Support r;
    r.degree = a.degree + b.degree;
    for (const auto& x : a.monomials)
        for (const auto& y : b.monomials) {
            if (x.size() != y.size())
                throw std::invalid_argument("sumset: dimension mismatch");
            Exponent z(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                z[i] = x[i] + y[i];
            r.monomials.insert(z);
        }
    return r;
}

Support power_support(const Support& a, const Integer& m) {
    if (m < 0)
        throw std::invalid_argument("power_support: negative exponent");
    if (a.monomials.empty())
        throw std::invalid_argument("power_support: empty support");
    std::size_t nv = a.monomials.begin()->size();
    Support result;
    result.degree = 0;
    result.monomials.insert(Exponent(nv, 0));
    Support base = a;
    std::int64_t e = to_i64(m);
    while (e) {
        if (e & 1)
            result = sumset(result, base);
        e >>= 1;
        if (e)
            base = sumset(base, base);
    }
    return result;
}

Degeneration degenerate(const Tuple& tup, const Weights& t, const std::set<int>& I) {
    tup.validate();
    if (t.size() != tup.hyperplanes.size())
        throw std::invalid_argument("degenerate: weight vector length does not match hyperplane count");
    Integer s0 = 1;
    for (int i : I) {
        if (i < 0 || i >= tup.k())
            throw std::invalid_argument("degenerate: hyperplane index out of range");
        if (t[i] == 0)
            throw std::invalid_argument("degenerate: zero weight in the absorbed set");
        if (t[i] < 0)
            throw std::invalid_argument("degenerate: negative weight");
        mpz_lcm(s0.get_mpz_t(), s0.get_mpz_t(), t[i].get_den_mpz_t());
    }
    Degeneration out;
    out.s0 = s0;
    out.tuple.n = tup.n;
    Support h = power_support(tup.hypersurface, s0);
    for (int i : I) {
        Rational e = Rational(s0) * t[i];
        h = sumset(h, power_support(tup.hyperplanes[i], e.get_num()));
    }
    out.tuple.hypersurface = h;
    for (int j = 0; j < tup.k(); ++j)
        if (!I.count(j)) {
            out.tuple.hyperplanes.push_back(tup.hyperplanes[j]);
            out.t.push_back(Rational(s0) * t[j]);
        }
    return out;
}

Integer moduli_dim(int n, int d, int k) {
    if (d < 3)
        throw std::invalid_argument("moduli_dim: requires d >= 3");
    if (n < 1 || k < 0)
        throw std::invalid_argument("moduli_dim: requires n >= 1, k >= 0");
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n + d + 1), static_cast<unsigned long>(d));
    return b - n * n + (k - 4) * n + k - 4;
}

Support transform_support(const Support& s, const RatMatrix& flag) {
    if (s.monomials.empty())
        throw std::invalid_argument("transform_support: empty support");
    std::size_t m = s.monomials.begin()->size();
    if (flag.rows() != m || flag.cols() != m)
        throw std::invalid_argument("transform_support: flag has the wrong size");
    if (determinant(flag) == 0)
        throw SingularMatrixError("transform_support: singular coordinate change");
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < m; ++i)
        images.push_back(Polynomial::linear(flag.row(i)));
    Support out;
    out.degree = s.degree;
    for (const auto& e : s.monomials) {
        Polynomial mono(m);
        mono.add_term(e, 1);
        for (auto& x : mono.substitute(images).support())
            out.monomials.insert(x);
    }
    return out;
}

Tuple transform_tuple(const Tuple& tup, const RatMatrix& flag) {
    Tuple r;
    r.n = tup.n;
    r.hypersurface = transform_support(tup.hypersurface, flag);
    for (const auto& h : tup.hyperplanes)
        r.hyperplanes.push_back(transform_support(h, flag));
    return r;
}

std::optional<Certificate> unstable_certificate(const Tuple& tup, const Weights& t,
                                                const std::vector<RatMatrix>& flags, CertificateMode mode) {
    tup.validate();
    auto lams = weyl_orbit_set(tup.n, tup.d());
    for (std::size_t f = 0; f < flags.size(); ++f) {
        Tuple moved = transform_tuple(tup, flags[f]);
        Certificate cert;
        cert.flag_index = f;
        bool have = false;
        for (const auto& lam : lams) {
            Rational v = mu_t(moved, t, lam);
            bool bad = mode == CertificateMode::unstable ? v > 0 : v >= 0;
            if (bad)
                cert.destabilizers.push_back(lam);
            if (!have || v > cert.value) {
                cert.value = v;
                cert.lam = lam;
                have = true;
            }
        }
        if (!cert.destabilizers.empty())
            return cert;
    }
    return std::nullopt;
}

std::string exponent_str(const Exponent& e) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i])
            continue;
        if (any)
            os << "*";
        os << "x" << i;
        if (e[i] > 1)
            os << "^" << e[i];
        any = true;
    }
    if (!any)
        os << "1";
    return os.str();
}

}  // namespace vgitk3::vgit
