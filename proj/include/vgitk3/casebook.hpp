#pragma once

#include "vgitk3/exact.hpp"
#include "vgitk3/lattice.hpp"
#include "vgitk3/vgit.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace vgitk3::casebook {

// A stored object. Every integer lives in `ints` so that a mutation test can reach it.
struct Fixture {
    std::string name;
    std::string anchor;
    std::vector<std::int64_t> ints;
    std::vector<std::string> texts;
};

class Casebook {
public:
    static Casebook standard();

    // Marks the fixture as used; throws std::out_of_range for unknown names.
    const Fixture& get(const std::string& name) const;
    Fixture& edit(const std::string& name);
    std::vector<std::string> names() const;
    const std::vector<Fixture>& fixtures() const { return fixtures_; }

    void reset_usage() const { used_.clear(); }
    const std::set<std::string>& used() const { return used_; }

private:
    std::vector<Fixture> fixtures_;
    mutable std::set<std::string> used_;
};

struct Line {
    int check = 0;
    bool pass = false;
    std::string anchor;
    std::string detail;
    std::string str() const;  // "PASS [k] anchor: detail"
};

struct Report {
    std::vector<Line> lines;
    std::vector<std::string> notes;
    std::map<int, std::set<std::string>> consumed;  // check -> fixture names
    bool all_pass() const;
    std::string str() const;
};

struct RunOptions {
    std::int64_t max_height = 30;
    std::vector<int> only;  // empty = all checks
};

// Labels per Vinberg job are cached across runs keyed by (lattice expression, h).
Report run(const Casebook& cb, const RunOptions& opt = {});

// Check numbers 1..13 with a short title each.
const std::vector<std::pair<int, std::string>>& check_titles();

// Sample values of the free parameter a in the boundary tuples.
std::vector<Rational> a_samples();

// Boundary tuple of the named fixture at a given a, from its expanded coefficient terms.
vgit::Tuple bd11_tuple(const Fixture& f, const Rational& a);
// The same tuple parsed from the factored text.
vgit::Tuple bd11_tuple_from_text(const Fixture& f, const Rational& a);
// Polynomial `first` (0 = C, 1 = L1, 2 = L2) of the stored terms; count 0 gives C L1 L2.
Polynomial bd11_polynomial(const std::vector<std::int64_t>& terms, std::size_t first, std::size_t count,
                           const Rational& a);
std::vector<std::string> bd11_names();

// Max of mu_t over S_{1,4} only (normalized lambda), and over its coordinate permutations.
Rational worst_over_S(const vgit::Tuple& tup, const vgit::Weights& t);

// The lattices M and T = U + M of the casebook.
lattice::Lattice lattice_M(const Casebook& cb);
lattice::Lattice lattice_T(const Casebook& cb);

// Every lattice the casebook constructs, named.
std::vector<lattice::Lattice> constructed_lattices(const Casebook& cb);

struct MutationOutcome {
    std::string fixture;
    std::size_t position = 0;
    bool detected = false;
    std::string line;  // the FAIL line that names the anchor, if any
};

// Adds 1 to each stored integer in turn and reruns the checks that consume that fixture.
std::vector<MutationOutcome> mutation_test(const Casebook& cb, const RunOptions& opt = {},
                                           const std::function<void(const MutationOutcome&)>& progress = {});

}  // namespace vgitk3::casebook
