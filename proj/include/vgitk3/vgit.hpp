#pragma once

#include "vgitk3/exact.hpp"
#include "vgitk3/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vgitk3::vgit {

using Weights = std::vector<Rational>;
// One-parameter subgroup Diag(s^{r_0}, ..., s^{r_{n+1}}).
using OneParam = std::vector<std::int64_t>;

struct Support {
    std::int64_t degree = 0;
    std::set<Exponent> monomials;

    static Support of(const Polynomial& p);
    bool operator==(const Support&) const = default;
};

// Hypersurface of degree d in P^{n+1} and k hyperplanes, all given by supports.
struct Tuple {
    int n = 1;
    Support hypersurface;
    std::vector<Support> hyperplanes;

    int d() const { return static_cast<int>(hypersurface.degree); }
    int k() const { return static_cast<int>(hyperplanes.size()); }
    int nvars() const { return n + 2; }
    // Throws std::invalid_argument if any invariant is violated.
    void validate() const;
    bool operator==(const Tuple&) const = default;
};

Tuple tuple_from_polynomials(int n, const Polynomial& f, const std::vector<Polynomial>& lines);

std::int64_t pairing(const Exponent& m, const OneParam& lam);
std::int64_t mu(const Support& g, const OneParam& lam);
Rational mu_t(const Tuple& tup, const Weights& t, const OneParam& lam);

bool is_normalized(const OneParam& lam);

// Eq(n,d): nonzero delta with |delta_i| <= d and sum zero, one representative per line.
std::vector<OneParam> eq_set(int n, int d);

// S_{n,d}, sorted; implemented for n <= 2.
std::vector<OneParam> fundamental_set(int n, int d);

// All coordinate permutations of the members of S_{n,d}, sorted and deduplicated.
std::vector<OneParam> weyl_orbit_set(int n, int d);

struct Worst {
    OneParam lam;
    Rational value;
};

// Maximum of mu_t over the coordinate permutations of S_{n,d}. Ties resolve to the
// lexicographically smallest lambda.
Worst torus_worst(const Tuple& tup, const Weights& t);

bool torus_semistable_centroid(const Tuple& tup, const Weights& t);

// c0 + c . t >= 0
struct HalfPlane {
    Rational c0;
    std::vector<Rational> c;
    Rational eval(const Weights& t) const;
    bool operator==(const HalfPlane&) const = default;
};

struct StabRegion {
    std::vector<HalfPlane> inequalities;
    bool contains(const Weights& t) const;
    bool interior_contains(const Weights& t) const;
    // Vertices of a planar region in counterclockwise order starting at the lexicographic minimum.
    std::vector<Weights> vertices() const;
};

StabRegion stab_region(int d);

// c0 + c1 t1 + ... with coprime integer coefficients, first nonzero coefficient positive.
struct Wall {
    std::vector<std::int64_t> coeffs;  // c0, c1, ..., ck
    auto operator<=>(const Wall&) const = default;
};
Wall normalize_wall(std::vector<std::int64_t> coeffs);
std::string wall_str(const Wall& w);

enum class WallFilter { none, stab_interior };
std::vector<Wall> candidate_walls(int n, int d, int k, WallFilter filter = WallFilter::none);

enum class Bound2GenCase { exterior, on_l1 };
HalfPlane bound_2gen(std::int64_t w1, std::int64_t w2, std::int64_t wdeg, int d, Bound2GenCase c);
OneParam bound_2gen_witness(std::int64_t w1, std::int64_t w2);

struct Degeneration {
    Tuple tuple;
    Weights t;
    Integer s0;
};
// I holds 0-based hyperplane indices.
Degeneration degenerate(const Tuple& tup, const Weights& t, const std::set<int>& I);

Integer moduli_dim(int n, int d, int k);

// x_i -> sum_j M(i,j) x_j applied to supports, coefficients taken generic.
Support transform_support(const Support& s, const RatMatrix& flag);
Tuple transform_tuple(const Tuple& tup, const RatMatrix& flag);

enum class CertificateMode { non_stable, unstable };
struct Certificate {
    std::size_t flag_index = 0;
    OneParam lam;
    Rational value;
    std::vector<OneParam> destabilizers;
};
// Searching only the supplied flags: a missing certificate does not prove semistability.
std::optional<Certificate> unstable_certificate(const Tuple& tup, const Weights& t,
                                                const std::vector<RatMatrix>& flags,
                                                CertificateMode mode = CertificateMode::unstable);

// Minkowski sum of supports, and the m-fold sum.
Support sumset(const Support& a, const Support& b);
Support power_support(const Support& a, const Integer& m);

std::string exponent_str(const Exponent& e);

}  // namespace vgitk3::vgit
