#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vgitk3/casebook.hpp"

#include <chrono>
#include <iostream>

using namespace vgitk3;
using namespace vgitk3::casebook;

namespace {

bool is_ii3(const Line& l) {
    return l.anchor == "boundary tuple II(3)" || l.anchor == "boundary tuples are strictly semistable at t = (1,1)";
}

}  // namespace

TEST_CASE("casebook run touches every fixture and is deterministic") {
    Casebook cb = Casebook::standard();
    cb.reset_usage();
    Report r = run(cb);
    for (const auto& n : cb.names())
        CHECK_MESSAGE(cb.used().count(n) == 1, n);
    std::set<int> checks;
    for (const auto& l : r.lines)
        checks.insert(l.check);
    CHECK(checks.size() == 13);
    CHECK(run(cb).str() == r.str());
    for (const auto& l : r.lines)
        if (!is_ii3(l))
            CHECK_MESSAGE(l.pass, l.str());
}

TEST_CASE("the printed II(3) representative is torus-stable in its coordinates") {
    Casebook cb = Casebook::standard();
    const Fixture& f = cb.get("bd11_II(3)");
    vgit::Weights t{Rational(1), Rational(1)};
    for (const auto& a : a_samples()) {
        auto tup = bd11_tuple(f, a);
        CHECK(worst_over_S(tup, t) == -1);
        CHECK(vgit::torus_worst(tup, t).value == -1);
    }
}

TEST_CASE("boundary tuples: stored terms agree with the factored text") {
    Casebook cb = Casebook::standard();
    for (const auto& n : bd11_names())
        for (const auto& a : a_samples())
            CHECK(bd11_tuple(cb.get(n), a) == bd11_tuple_from_text(cb.get(n), a));
    // at a = -1 the coefficient of x0 x1^2 x2 in II(1) vanishes
    auto t = bd11_tuple(cb.get("bd11_II(1)"), Rational(-1));
    CHECK(t.hypersurface.monomials.size() == 2);
}

TEST_CASE("targeted corruption names the anchor") {
    Casebook cb = Casebook::standard();
    Casebook bad = cb;
    bad.edit("gm").ints[9] += 1;  // (gamma, xi) entry, breaks symmetry
    Report r = run(bad, {30, {1}});
    bool named = false;
    for (const auto& l : r.lines)
        if (!l.pass && l.anchor == cb.get("gm").anchor)
            named = true;
    CHECK(named);
    Casebook bad2 = cb;
    bad2.edit("gm_inv2").ints[99] += 1;
    Report r2 = run(bad2, {30, {1}});
    CHECK(!r2.all_pass());
    CHECK(r2.lines.at(1).anchor == cb.get("gm_inv2").anchor);
    CHECK(!r2.lines.at(1).pass);
}

TEST_CASE("every single-integer mutation is detected") {
    Casebook cb = Casebook::standard();
    auto t0 = std::chrono::steady_clock::now();
    auto res = mutation_test(cb);
    std::size_t missed = 0;
    for (const auto& m : res)
        if (!m.detected) {
            ++missed;
            MESSAGE("undetected: " << m.fixture << "[" << m.position << "]");
        }
    CHECK(missed == 0);
    MESSAGE(res.size() << " mutations in "
                       << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s");
}
