#pragma once

#include "vgitk3/exact.hpp"
#include "vgitk3/fqm.hpp"

#include <string>
#include <vector>

namespace vgitk3::lattice {

struct Lattice {
    std::string name;
    IntMatrix gram;
    std::vector<std::string> labels;

    std::size_t rank() const { return gram.rows(); }
    bool even() const;
    // Throws std::invalid_argument unless the Gram matrix is square and symmetric
    // and the labels (if any) match the rank.
    void validate() const;
    bool operator==(const Lattice&) const = default;
};

enum class RootKind { A, D, E, U };

// Negative definite Cartan lattices A_n, D_m, E_r and the hyperbolic plane U, times scale.
Lattice make_named(RootKind kind, int n, std::int64_t scale = 1);

// Parses sums like "U+U(2)+A1^2+D6", also accepting "⊥", "_" and spaces.
Lattice parse_named(const std::string& expr);

Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice direct_sum(const std::vector<Lattice>& parts);

struct Invariants {
    std::size_t rank = 0;
    Integer det;
    bool even = false;
    Signature sig;
};
Invariants invariants(const Lattice& l);

// Generators are V e_i / d_i from U G V = D; each carries provenance so that
// class_of works on dual vectors. Throws std::domain_error for degenerate or odd input.
FQM discriminant_group(const Lattice& l);

Integer divisor(const Lattice& l, const IntVector& v);

// Class of v / div(v) in A (which must come from discriminant_group(l) or a relabel).
FQM::Element vbar(const Lattice& l, const FQM& a, const IntVector& v);

// Saturated complement of the given vectors with the restricted Gram; the basis rows are
// returned through `basis` when non-null.
Lattice orthogonal_complement(const Lattice& l, const std::vector<IntVector>& vs,
                              IntMatrix* basis = nullptr);

// v^perp / Zv on an HNF-derived complement basis. Requires v primitive and isotropic.
Lattice quotient_vperp(const Lattice& l, const IntVector& v);

struct TwoElemInvariants {
    std::size_t r = 0;
    Signature sig;
    std::size_t ell = 0;
    int delta = 0;
    bool operator==(const TwoElemInvariants&) const = default;
};
TwoElemInvariants two_elem_invariants(const Lattice& l);

// Compares (r, sig, ell, delta); rejects definite, odd or non-2-elementary input.
bool same_2elem_genus(const Lattice& a, const Lattice& b);

std::string signature_str(const Signature& s);

}  // namespace vgitk3::lattice
