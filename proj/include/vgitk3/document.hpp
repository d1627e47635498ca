#pragma once

#include "vgitk3/discforms.hpp"
#include "vgitk3/lattice.hpp"
#include "vgitk3/vgit.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

// Versioned JSON documents. Keys are written sorted; rationals as "p/q" strings;
// integers as JSON numbers when they fit in 53 bits and as decimal strings otherwise.
namespace vgitk3::document {

inline constexpr int FORMAT = 1;

struct TupleDoc {
    vgit::Tuple tuple;
    std::optional<vgit::Weights> t;
    bool operator==(const TupleDoc&) const = default;
};

struct LatticeDoc {
    lattice::Lattice lattice;
    bool operator==(const LatticeDoc&) const = default;
};

struct FqmActionDoc {
    lattice::Lattice lattice;
    std::vector<std::size_t> dual_indices;  // generators of the labeled module
    std::vector<std::string> labels;
    std::vector<discforms::PermActionSpec> generators;
    bool operator==(const FqmActionDoc&) const;
};

struct VinbergJobDoc {
    lattice::Lattice lattice;
    IntVector h;
    Integer max_height = 30;
    bool operator==(const VinbergJobDoc&) const = default;
};

using Document = std::variant<TupleDoc, LatticeDoc, FqmActionDoc, VinbergJobDoc>;

std::string kind_of(const Document& d);

// Throws std::invalid_argument on malformed input.
Document parse(const std::string& text);
std::string serialize(const Document& d);

// "(alpha1 alpha2)", "(beta3 beta4)", "swap"
discforms::PermActionSpec parse_action(const std::string& s);

// The casebook module of M with the twelve transpositions (and the swap).
FqmActionDoc casebook_action(const lattice::Lattice& m, bool with_swap);

}  // namespace vgitk3::document
