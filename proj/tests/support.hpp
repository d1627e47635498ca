#pragma once

#include "vgitk3/exact.hpp"

#include <functional>
#include <optional>
#include <random>

namespace testsupport {

using vgitk3::IntMatrix;
using vgitk3::Integer;
using vgitk3::RatMatrix;
using vgitk3::RatVector;
using vgitk3::Rational;

inline Rational Q(long a, long b) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(0x5eed1234ULL);
    return g;
}

inline long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng());
}

inline IntMatrix random_int_matrix(std::size_t r, std::size_t c, long lo, long hi) {
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = uniform(lo, hi);
    return m;
}

inline IntMatrix random_symmetric(std::size_t n, long lo, long hi) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            m(i, j) = m(j, i) = uniform(lo, hi);
    return m;
}

// Solve A x = b exactly for a full column rank system; nullopt when inconsistent.
inline std::optional<RatVector> solve_full_column_rank(RatMatrix a, RatVector b) {
    std::size_t m = a.rows(), n = a.cols();
    std::size_t r = 0;
    std::vector<std::size_t> pivcol;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && a(p, c) == 0)
            ++p;
        if (p == m)
            return std::nullopt;
        a.swap_rows(r, p);
        std::swap(b[r], b[p]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || a(i, c) == 0)
                continue;
            Rational f = a(i, c) / a(r, c);
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) -= f * a(r, j);
            b[i] -= f * b[r];
        }
        pivcol.push_back(c);
        ++r;
    }
    if (r < n)
        return std::nullopt;
    for (std::size_t i = r; i < m; ++i)
        if (b[i] != 0)
            return std::nullopt;
    RatVector x(n);
    for (std::size_t i = 0; i < r; ++i)
        x[pivcol[i]] = b[i] / a(i, pivcol[i]);
    return x;
}

// Caratheodory oracle for convex hull membership: q is in the hull iff it is a
// convex combination of at most dim+1 affinely independent points.
inline bool caratheodory_contains(const std::vector<RatVector>& pts, const RatVector& q) {
    std::size_t dim = q.size();
    std::size_t m = pts.size();
    std::vector<std::size_t> idx;
    bool found = false;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (found)
            return;
        if (!idx.empty()) {
            RatMatrix a(dim + 1, idx.size());
            for (std::size_t j = 0; j < idx.size(); ++j) {
                for (std::size_t i = 0; i < dim; ++i)
                    a(i, j) = pts[idx[j]][i];
                a(dim, j) = 1;
            }
            RatVector b(q);
            b.push_back(1);
            if (vgitk3::rank(a) == idx.size()) {
                auto x = solve_full_column_rank(a, b);
                if (x) {
                    bool ok = true;
                    for (auto& v : *x)
                        if (v < 0)
                            ok = false;
                    if (ok) {
                        found = true;
                        return;
                    }
                }
            } else {
                return;
            }
        }
        if (idx.size() == dim + 1)
            return;
        for (std::size_t j = start; j < m; ++j) {
            idx.push_back(j);
            rec(j + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return found;
}

}  // namespace testsupport
