#pragma once

#include "vgitk3/fqm.hpp"
#include "vgitk3/lattice.hpp"

#include <string>
#include <vector>

namespace vgitk3::discforms {

using lattice::Lattice;

struct Overlattice {
    Lattice lattice;
    IntMatrix basis_denominator;  // D * (new basis rows) in old coordinates
    Integer denominator;
    Integer index;
};

// Lattice generated by L and the given dual vectors (old coordinates). The lifts must
// span an isotropic subgroup of A_L; otherwise std::invalid_argument.
Overlattice overlattice(const Lattice& l, const std::vector<RatVector>& lifts);

// Discriminant group of l relabeled by the dual basis vectors e_i^* for the given indices.
FQM labeled_discriminant(const Lattice& l, const std::vector<std::size_t>& dual_indices,
                         const std::vector<std::string>& labels);

// Labels expected on the casebook module, in order.
const std::vector<std::string>& am_labels();

// Named elements of the labeled module: "0", "gamma*", "alpha1*".."alpha3*",
// "beta1*".."beta3*", "xi*" and sums joined by '+'.
FQM::Element am_element(const FQM& am, const std::string& name);

enum class ActionKind { alpha_transposition, alpha_with4, beta_transposition, beta_with4, swap };
struct PermActionSpec {
    ActionKind kind = ActionKind::swap;
    int i = 0;  // 1-based
    int j = 0;
};
std::string action_str(const PermActionSpec& s);

FQMIsometry build_action(const FQM& am, const PermActionSpec& spec);

// Transposition generators of Sigma_alpha x Sigma_beta, optionally with the swap.
std::vector<PermActionSpec> standard_generators(bool with_swap);

// Cyclic subgroup generated by vbar(v), as sorted element indices.
std::vector<std::uint64_t> H_v(const Lattice& l, const FQM& a, const IntVector& v);

// Indices of elements orthogonal (b = 0) to every element of h.
std::vector<std::uint64_t> orthogonal_in(const FQM& a, const std::vector<std::uint64_t>& h);

}  // namespace vgitk3::discforms
