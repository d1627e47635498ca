#include "vgitk3/exact.hpp"

#include <algorithm>
#include <cctype>

namespace vgitk3 {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer round_nearest(const Rational& q) {
    Rational h = q + Rational(1, 2);
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
    return r;
}

}  // namespace

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = Rational(m(i, j));
    return r;
}

RatVector to_rational(const IntVector& v) {
    RatVector r;
    r.reserve(v.size());
    for (const auto& x : v)
        r.emplace_back(x);
    return r;
}

IntMatrix to_integer(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1)
                throw std::invalid_argument("non-integral entry " + m(i, j).get_str());
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

IntVector to_integer(const RatVector& v) {
    IntVector r;
    r.reserve(v.size());
    for (const auto& x : v) {
        if (x.get_den() != 1)
            throw std::invalid_argument("non-integral entry " + x.get_str());
        r.push_back(x.get_num());
    }
    return r;
}

Rational dot(const RatVector& a, const RatVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Integer dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: length mismatch");
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Rational bilinear(const RatMatrix& g, const RatVector& x, const RatVector& y) {
    return dot(x, g * y);
}

Integer bilinear(const IntMatrix& g, const IntVector& x, const IntVector& y) {
    return dot(x, g * y);
}

Integer content(const IntVector& v) {
    Integer g = 0;
    for (const auto& x : v)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntVector primitive(const IntVector& v) {
    Integer g = content(v);
    if (g == 0)
        throw std::invalid_argument("primitive: zero vector");
    IntVector r(v);
    for (auto& x : r)
        x /= g;
    return r;
}

Integer lcm_of_denominators(const RatVector& v) {
    Integer l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

Signature signature(const RatMatrix& g) {
    if (!g.symmetric())
        throw std::invalid_argument("signature: matrix not symmetric");
    RatMatrix a = g;
    std::size_t n = a.rows();
    Signature s;
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t p = n;
        for (std::size_t i = 0; i < n && p == n; ++i)
            if (!done[i] && a(i, i) != 0)
                p = i;
        if (p == n) {
            // all remaining diagonal entries vanish; look for an off-diagonal pair
            std::size_t pi = n, pj = n;
            for (std::size_t i = 0; i < n && pi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!done[i] && !done[j] && a(i, j) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) {
                for (std::size_t i = 0; i < n; ++i)
                    if (!done[i])
                        ++s.zero;
                return s;
            }
            // row/col pi += row/col pj
            for (std::size_t k = 0; k < n; ++k)
                a(pi, k) += a(pj, k);
            for (std::size_t k = 0; k < n; ++k)
                a(k, pi) += a(k, pj);
            p = pi;
        }
        Rational piv = a(p, p);
        if (piv > 0)
            ++s.plus;
        else
            ++s.minus;
        done[p] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || a(i, p) == 0)
                continue;
            Rational f = a(i, p) / piv;
            for (std::size_t k = 0; k < n; ++k)
                a(i, k) -= f * a(p, k);
            for (std::size_t k = 0; k < n; ++k)
                a(k, i) = a(i, k);
        }
    }
    return s;
}

Signature signature(const IntMatrix& g) { return signature(to_rational(g)); }

Integer determinant(const IntMatrix& m) {
    if (!m.square())
        throw std::invalid_argument("determinant: matrix not square");
    std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

Rational determinant(const RatMatrix& m) {
    if (!m.square())
        throw std::invalid_argument("determinant: matrix not square");
    RatMatrix a = m;
    std::size_t n = a.rows();
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != k) {
            a.swap_rows(k, p);
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0)
                continue;
            Rational f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

std::size_t rank(const RatMatrix& m) {
    RatMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0)
            ++p;
        if (p == a.rows())
            continue;
        a.swap_rows(r, p);
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a(i, c) == 0)
                continue;
            Rational f = a(i, c) / a(r, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

RatMatrix rational_inverse(const RatMatrix& m) {
    if (!m.square())
        throw std::invalid_argument("rational_inverse: matrix not square");
    std::size_t n = m.rows();
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0)
            ++p;
        if (p == n)
            throw SingularMatrixError("rational_inverse: singular matrix");
        a.swap_rows(k, p);
        inv.swap_rows(k, p);
        Rational piv = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0)
                continue;
            Rational f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

RatMatrix rational_inverse(const IntMatrix& m) { return rational_inverse(to_rational(m)); }

IntMatrix unimodular_inverse(const IntMatrix& m) {
    IntMatrix r = to_integer(rational_inverse(m));
    return r;
}

std::vector<Integer> SmithForm::diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
        d.push_back(D(i, i));
    return d;
}

SmithForm snf(const IntMatrix& a) {
    std::size_t m = a.rows(), n = a.cols();
    IntMatrix D = a;
    IntMatrix U = IntMatrix::identity(m);
    IntMatrix V = IntMatrix::identity(n);

    auto row_sub = [&](std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t j = 0; j < n; ++j)
            D(dst, j) -= q * D(src, j);
        for (std::size_t j = 0; j < m; ++j)
            U(dst, j) -= q * U(src, j);
    };
    auto col_sub = [&](std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t i = 0; i < m; ++i)
            D(i, dst) -= q * D(i, src);
        for (std::size_t i = 0; i < n; ++i)
            V(i, dst) -= q * V(i, src);
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        bool empty = false;
        for (;;) {
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < abs(D(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m) {
                empty = true;
                break;
            }
            D.swap_rows(t, pi);
            U.swap_rows(t, pi);
            D.swap_cols(t, pj);
            V.swap_cols(t, pj);

            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i)
                if (D(i, t) != 0) {
                    row_sub(i, t, floor_div(D(i, t), D(t, t)));
                    if (D(i, t) != 0)
                        dirty = true;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (D(t, j) != 0) {
                    col_sub(j, t, floor_div(D(t, j), D(t, t)));
                    if (D(t, j) != 0)
                        dirty = true;
                }
            if (dirty)
                continue;

            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m)
                break;
            row_sub(t, bad, Integer(-1));
        }
        if (empty)
            break;
        if (D(t, t) < 0) {
            for (std::size_t j = 0; j < n; ++j)
                D(t, j) = -D(t, j);
            for (std::size_t j = 0; j < m; ++j)
                U(t, j) = -U(t, j);
        }
    }
    return {U, D, V};
}

HermiteForm hnf_rows(const IntMatrix& a) {
    std::size_t m = a.rows(), n = a.cols();
    IntMatrix H = a;
    IntMatrix U = IntMatrix::identity(m);
    auto row_sub = [&](std::size_t dst, std::size_t src, const Integer& q) {
        if (q == 0)
            return;
        for (std::size_t j = 0; j < n; ++j)
            H(dst, j) -= q * H(src, j);
        for (std::size_t j = 0; j < m; ++j)
            U(dst, j) -= q * U(src, j);
    };
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (;;) {
            std::size_t p = m;
            for (std::size_t i = r; i < m; ++i)
                if (H(i, c) != 0 && (p == m || abs(H(i, c)) < abs(H(p, c))))
                    p = i;
            if (p == m)
                break;
            H.swap_rows(r, p);
            U.swap_rows(r, p);
            bool clean = true;
            for (std::size_t i = r + 1; i < m; ++i)
                if (H(i, c) != 0) {
                    row_sub(i, r, floor_div(H(i, c), H(r, c)));
                    if (H(i, c) != 0)
                        clean = false;
                }
            if (clean)
                break;
        }
        if (H(r, c) == 0)
            continue;
        if (H(r, c) < 0) {
            for (std::size_t j = 0; j < n; ++j)
                H(r, j) = -H(r, j);
            for (std::size_t j = 0; j < m; ++j)
                U(r, j) = -U(r, j);
        }
        for (std::size_t i = 0; i < r; ++i)
            row_sub(i, r, floor_div(H(i, c), H(r, c)));
        ++r;
    }
    return {H, U, r};
}

IntMatrix lattice_basis_rows(const IntMatrix& a) {
    HermiteForm h = hnf_rows(a);
    IntMatrix b(h.rank, a.cols());
    for (std::size_t i = 0; i < h.rank; ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            b(i, j) = h.H(i, j);
    return b;
}

std::vector<IntVector> integer_kernel(const IntMatrix& a) {
    std::size_t n = a.cols();
    HermiteForm h = hnf_rows(a.transpose());
    std::vector<IntVector> gens;
    for (std::size_t i = h.rank; i < n; ++i)
        gens.push_back(h.U.row(i));
    if (gens.empty())
        return {};
    IntMatrix b = lattice_basis_rows(IntMatrix::from_rows(gens));
    std::vector<IntVector> out;
    for (std::size_t i = 0; i < b.rows(); ++i)
        out.push_back(b.row(i));
    return out;
}

IntMatrix complete_to_basis(const IntVector& v) {
    if (content(v) != 1)
        throw std::invalid_argument("complete_to_basis: vector not primitive");
    IntMatrix c(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        c(i, 0) = v[i];
    HermiteForm h = hnf_rows(c);
    return unimodular_inverse(h.U);
}

std::optional<IntVector> solve_row(const IntVector& a, const Integer& m) {
    IntMatrix c(a.size(), 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        c(i, 0) = a[i];
    HermiteForm h = hnf_rows(c);
    if (h.rank == 0) {
        if (m != 0)
            return std::nullopt;
        return IntVector(a.size(), Integer(0));
    }
    const Integer& g = h.H(0, 0);
    if (m % g != 0)
        return std::nullopt;
    IntVector x = h.U.row(0);
    Integer f = m / g;
    for (auto& e : x)
        e *= f;
    return x;
}

IntMatrix lll_transform(const IntMatrix& gram) {
    std::size_t n = gram.rows();
    IntMatrix T = IntMatrix::identity(n);
    if (n <= 1)
        return T;
    const Rational delta(3, 4);
    IntMatrix G = gram;
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    std::vector<Rational> B(n);

    auto gram_schmidt = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                Rational s = Rational(G(i, j));
                for (std::size_t l = 0; l < j; ++l)
                    s -= mu[j][l] * mu[i][l] * B[l];
                mu[i][j] = s / B[j];
            }
            Rational b = Rational(G(i, i));
            for (std::size_t l = 0; l < i; ++l)
                b -= mu[i][l] * mu[i][l] * B[l];
            if (b <= 0)
                throw std::invalid_argument("lll_transform: Gram matrix not positive definite");
            B[i] = b;
        }
    };
    auto refresh = [&]() {
        G = T.transpose() * gram * T;
        gram_schmidt();
    };
    refresh();
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            Integer q = round_nearest(mu[k][jj]);
            if (q != 0) {
                for (std::size_t i = 0; i < n; ++i)
                    T(i, k) -= q * T(i, jj);
                refresh();
            }
        }
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            T.swap_cols(k, k - 1);
            refresh();
            k = std::max<std::size_t>(k - 1, 1);
        } else {
            ++k;
        }
    }
    return T;
}

bool hull_contains(const std::vector<RatVector>& points, const RatVector& q) {
    if (points.empty())
        throw std::invalid_argument("hull_contains: empty point set");
    std::size_t dim = q.size();
    for (const auto& p : points)
        if (p.size() != dim)
            throw std::invalid_argument("hull_contains: dimension mismatch");
    std::size_t m = points.size();
    std::size_t rows = dim + 1;
    std::size_t cols = m + rows;  // structural variables then artificials
    // tableau rows 0..rows-1 are constraints, row `rows` is the phase-1 objective
    std::vector<std::vector<Rational>> t(rows + 1, std::vector<Rational>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            t[i][j] = i < dim ? points[j][i] : Rational(1);
        t[i][cols] = i < dim ? q[i] : Rational(1);
        if (t[i][cols] < 0)
            for (std::size_t j = 0; j <= cols; ++j)
                t[i][j] = -t[i][j];
        t[i][m + i] = 1;
    }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            t[rows][j] -= t[i][j];
    for (std::size_t i = 0; i < rows; ++i)
        t[rows][cols] -= t[i][cols];
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i)
        basis[i] = m + i;

    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (t[rows][j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols)
            break;
        std::size_t leave = rows;
        Rational best;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][enter] <= 0)
                continue;
            Rational ratio = t[i][cols] / t[i][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == rows)
            break;  // unbounded direction; cannot happen for phase 1
        Rational piv = t[leave][enter];
        for (auto& x : t[leave])
            x /= piv;
        for (std::size_t i = 0; i <= rows; ++i) {
            if (i == leave || t[i][enter] == 0)
                continue;
            Rational f = t[i][enter];
            for (std::size_t j = 0; j <= cols; ++j)
                t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    return t[rows][cols] == 0;
}

std::string to_string(const Rational& q) {
    Rational c(q);
    c.canonicalize();
    return c.get_str();
}

Rational ratio(const Integer& num, const Integer& den) {
    if (den == 0)
        throw std::domain_error("ratio: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& s) {
    std::string body = s;
    body.erase(std::remove_if(body.begin(), body.end(), [](unsigned char c) { return std::isspace(c); }),
               body.end());
    if (body.empty())
        throw std::invalid_argument("empty rational literal");
    std::size_t start = (body[0] == '-' || body[0] == '+') ? 1 : 0;
    std::size_t slash = body.find('/');
    auto digits = [&](std::size_t a, std::size_t b) {
        if (a >= b)
            return false;
        for (std::size_t i = a; i < b; ++i)
            if (!std::isdigit(static_cast<unsigned char>(body[i])))
                return false;
        return true;
    };
    bool ok = slash == std::string::npos ? digits(start, body.size())
                                         : digits(start, slash) && digits(slash + 1, body.size());
    if (!ok)
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (body[0] == '+')
        body.erase(0, 1);
    Rational q(body, 10);
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

}  // namespace vgitk3
