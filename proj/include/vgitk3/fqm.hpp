#pragma once

#include "vgitk3/exact.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vgitk3 {

// Finite abelian group  (+)_i Z/d_i  with a quadratic form q: A -> Q/2Z.
// The form is described by the rational values b_ij = (g_i, g_j) of lifts of the
// generators; q(x) = sum c_i c_j b_ij mod 2.
class FiniteQuadraticModule {
public:
    using Element = std::vector<std::int64_t>;

    FiniteQuadraticModule() = default;
    FiniteQuadraticModule(std::vector<std::int64_t> orders, RatMatrix gram, std::vector<std::string> labels = {});

    std::size_t ngens() const { return orders_.size(); }
    const std::vector<std::int64_t>& orders() const { return orders_; }
    const RatMatrix& gram() const { return gram_; }
    const std::vector<std::string>& labels() const { return labels_; }
    // Group order; throws std::overflow_error beyond 2^40.
    std::uint64_t size() const;

    Element zero() const { return Element(orders_.size(), 0); }
    Element generator(std::size_t i) const;
    Element reduce(Element x) const;
    Element add(const Element& x, const Element& y) const;
    Element neg(const Element& x) const;
    Element scale(const Element& x, std::int64_t n) const;
    std::int64_t element_order(const Element& x) const;

    // q(x) in [0,2) and b(x,y) in [0,1).
    Rational q(const Element& x) const;
    Rational b(const Element& x, const Element& y) const;

    std::uint64_t index(const Element& x) const;
    Element element(std::uint64_t idx) const;
    std::vector<Element> elements() const;

    std::string element_str(const Element& x) const;

    // Lattice provenance: lifts (columns, lattice coordinates) and the reduction map
    // c = reducer * (G x) mod orders for a dual vector x.
    struct Provenance {
        IntMatrix gram;      // Gram matrix of the lattice
        RatMatrix lifts;     // r x k
        IntMatrix reducer;   // k x r
    };
    const std::optional<Provenance>& provenance() const { return prov_; }
    void set_provenance(Provenance p) { prov_ = std::move(p); }
    // Class of a dual vector given in lattice coordinates.
    Element class_of(const RatVector& dual) const;

    // Replace the generators by the classes of the given dual vectors, which must
    // form a basis. Only elementary abelian p-groups are supported.
    FiniteQuadraticModule relabel(const std::vector<RatVector>& new_lifts,
                                  std::vector<std::string> new_labels) const;

    // Same group, form negated.
    FiniteQuadraticModule negated() const;

private:
    std::vector<std::int64_t> orders_;
    RatMatrix gram_;
    std::vector<std::string> labels_;
    std::optional<Provenance> prov_;
};

using FQM = FiniteQuadraticModule;

// Reduce a rational into [0, m).
Rational mod_rational(const Rational& x, const Rational& m);

struct QSignature {
    int value = 0;     // residue mod 8
    bool exact = true; // false when the floating fallback was used
};
QSignature q_signature_mod8(const FQM& a);

std::vector<FQM::Element> isotropic_elements(const FQM& a);

// Subgroups on which q vanishes; each is returned as the sorted list of element indices.
std::vector<std::vector<std::uint64_t>> isotropic_subgroups(const FQM& a);

// Subgroup generated by the given elements, as sorted indices.
std::vector<std::uint64_t> generated_subgroup(const FQM& a, const std::vector<FQM::Element>& gens);

// An automorphism given by generator images.
struct FQMIsometry {
    std::vector<FQM::Element> images;
    FQM::Element apply(const FQM& a, const FQM::Element& x) const;
};

// Throws std::invalid_argument when the map does not preserve q and b or is not bijective.
void verify_isometry(const FQM& a, const FQMIsometry& g);

using Permutation = std::vector<std::uint32_t>;
Permutation to_permutation(const FQM& a, const FQMIsometry& g);

struct PermGroup {
    std::size_t degree = 0;
    // sorted lexicographically; the identity comes first
    std::vector<Permutation> elements;
    std::size_t order() const { return elements.size(); }
    std::size_t index_of(const Permutation& p) const;
    // table[i][j] = index of elements[i] after elements[j] (apply j, then i)
    std::vector<std::vector<std::uint32_t>> multiplication_table() const;
};

PermGroup group_closure(const FQM& a, const std::vector<FQMIsometry>& gens);
bool injectivity_check(std::size_t abstract_order, const FQM& a, const std::vector<FQMIsometry>& gens);

// Orbit partition of a subset of element indices; orbits sorted by their minimal
// element, which is the representative. Throws if the subset is not invariant.
std::vector<std::vector<std::uint64_t>> orbits(const PermGroup& g, const std::vector<std::uint64_t>& subset);

}  // namespace vgitk3
