#pragma once

#include "vgitk3/exact.hpp"
#include "vgitk3/lattice.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace vgitk3::vinberg {

using lattice::Lattice;

// Even lattice of signature (1, n); checked on construction.
class HyperbolicLattice {
public:
    explicit HyperbolicLattice(Lattice l);
    const Lattice& lattice() const { return l_; }
    const IntMatrix& gram() const { return l_.gram; }
    std::size_t rank() const { return l_.rank(); }
    // n in signature (1, n)
    std::size_t n() const { return l_.rank() - 1; }

private:
    Lattice l_;
};

// All v with v^T G v = norm for a negative definite G. With `up_to_sign` only the
// lexicographically positive member of each pair +-v is returned. Sorted.
std::vector<IntVector> short_vectors(const Lattice& lneg, const Integer& norm, bool up_to_sign = false);

// Enumerates vectors of a fixed norm and a fixed pairing with h.
class RootEnumerator {
public:
    RootEnumerator(const HyperbolicLattice& n, const IntVector& h);
    // All delta with (delta, delta) = norm and (h, delta) = m, sorted lexicographically.
    std::vector<IntVector> at_height(const Integer& m, const Integer& norm = -2) const;
    // Lattice nodes visited by the last call (diagnostic).
    std::uint64_t last_nodes() const { return nodes_; }

private:
    IntMatrix g_;
    IntVector h_;
    IntVector gh_;
    IntMatrix k_;  // rows: LLL-reduced basis of h^perp
    RatMatrix qinv_;
    IntMatrix q_;  // -K G K^T, positive definite
    mutable std::uint64_t nodes_ = 0;
};

std::vector<IntVector> roots_at_height(const HyperbolicLattice& n, const IntVector& h, const Integer& m);

struct AcceptedRoot {
    IntVector vector;
    Integer height;
    std::size_t stage = 0;  // order of acceptance
};

struct CoxeterDiagram {
    std::vector<AcceptedRoot> nodes;
    // (i, j) with i < j -> pairing, only nonzero pairings stored
    std::map<std::pair<std::size_t, std::size_t>, Integer> edges;

    std::size_t size() const { return nodes.size(); }
    Integer weight(std::size_t i, std::size_t j) const;
    static CoxeterDiagram from_gram(const IntMatrix& gram);
    // node/edge text export
    std::string str() const;
};

struct HeightLog {
    Integer height;
    std::size_t candidates = 0;
    std::size_t accepted = 0;
    std::uint64_t nodes = 0;
};

struct VinbergResult {
    CoxeterDiagram diagram;
    bool stopped = false;
    Integer last_height;
    std::vector<HeightLog> log;
};

VinbergResult vinberg_run(const HyperbolicLattice& n, const IntVector& h, const Integer& max_height);

enum class AffineType { A, D, E };

struct AffineComponent {
    AffineType type = AffineType::A;
    std::size_t rank = 0;               // rank of the finite part
    std::vector<std::size_t> nodes;     // sorted
    std::vector<Integer> marks;         // null vector of the component, aligned with nodes

    std::string finite_name() const;    // e.g. "D_4"
    bool operator==(const AffineComponent&) const = default;
};

// Connected parabolic subdiagrams (affine Dynkin diagrams) contained in the diagram.
std::vector<AffineComponent> connected_parabolics(const CoxeterDiagram& d);

struct ParabolicClass {
    std::vector<AffineComponent> components;
    std::size_t total_rank = 0;
    std::string label;  // e.g. "A_1^4⊥D_4"
    IntVector isotropic; // filled by classify_isotropic
};

std::string label_of(std::vector<std::pair<AffineType, std::size_t>> parts);

// Parabolic subdiagrams of the given total rank assembled from pairwise disjoint,
// unlinked connected parabolic components.
std::vector<ParabolicClass> detect_parabolic(const CoxeterDiagram& d, std::size_t total_rank);

// Every connected parabolic subdiagram is a component of some parabolic subdiagram of rank n-1.
bool stop_criterion(const CoxeterDiagram& d, std::size_t n);

struct Classification {
    bool stopped = false;
    std::vector<ParabolicClass> classes;  // raw per-diagram list
    std::vector<std::string> labels;      // deduplicated, sorted
    VinbergResult run;
};

// Throws std::runtime_error if the run does not stop within max_height.
Classification classify_isotropic(const HyperbolicLattice& n, const IntVector& h, const Integer& max_height);

// Primitive isotropic vector sum(marks_i * delta_i) of a component.
IntVector null_vector(const CoxeterDiagram& d, const AffineComponent& c);

}  // namespace vgitk3::vinberg
