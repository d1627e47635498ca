// Command-line front end. Exit codes: 0 ok, 1 check failed, 2 invalid input, 64 usage.
#include "vgitk3/casebook.hpp"
#include "vgitk3/discforms.hpp"
#include "vgitk3/document.hpp"
#include "vgitk3/fqm.hpp"
#include "vgitk3/lattice.hpp"
#include "vgitk3/vgit.hpp"
#include "vgitk3/vinberg.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace vgitk3;
using nlohmann::json;

namespace {

constexpr int EXIT_CHECK = 1;
constexpr int EXIT_INPUT = 2;
constexpr int EXIT_USAGE = 64;

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Format { text, csv, json };

Format g_format = Format::text;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

IntVector int_list(const std::string& s) {
    IntVector v;
    for (const auto& part : split(s, ',')) {
        std::string p = trim(part);
        if (p.empty() || p.find_first_not_of("+-0123456789") != std::string::npos)
            throw InputError("not an integer: '" + p + "'");
        if (p[0] == '+')
            p.erase(0, 1);
        try {
            v.push_back(Integer(p));
        } catch (const std::exception&) {
            throw InputError("not an integer: '" + p + "'");
        }
    }
    return v;
}

std::vector<Rational> rat_list(const std::string& s) {
    std::vector<Rational> v;
    for (const auto& part : split(s, ',')) {
        try {
            v.push_back(parse_rational(trim(part)));
        } catch (const std::exception& e) {
            throw InputError(std::string("bad rational: ") + e.what());
        }
    }
    return v;
}

std::int64_t small(const Integer& x) {
    if (!x.fits_slong_p())
        throw InputError("integer out of range: " + x.get_str());
    return x.get_si();
}

std::string vec_str(const IntVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

std::string vec_str(const vgit::OneParam& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

std::string vec_str(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + to_string(v[i]);
    return s + ")";
}

std::string csv_join(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::string x = xs[i];
        if (x.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : x)
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            x = q + "\"";
        }
        s += (i ? "," : "") + x;
    }
    return s;
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json int_json(const Integer& x) {
    if (x.fits_slong_p() && abs(x) < (Integer(1) << 53))
        return x.get_si();
    return x.get_str();
}

json vec_json(const IntVector& v) {
    json a = json::array();
    for (const auto& x : v)
        a.push_back(int_json(x));
    return a;
}

json rat_vec_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

std::int64_t env_int(const char* name, std::int64_t dflt) {
    const char* s = std::getenv(name);
    if (!s || !*s)
        return dflt;
    IntVector v = int_list(s);
    if (v.size() != 1 || v[0] < 0)
        throw InputError(std::string(name) + " must be a nonnegative integer");
    return small(v[0]);
}

// ---- shared inputs ----

struct TupleInput {
    std::string file;
    std::string poly;
    int n = 1;
    std::vector<std::string> params;
    std::string t;

    void add(CLI::App* c, bool with_t = true) {
        c->add_option("--tuple", file, "tuple document (JSON, '-' for stdin)");
        c->add_option("--poly", poly, "polynomials 'F;L1;L2;...' in x0, x1, ...");
        c->add_option("--n", n, "dimension n of P^{n+1} for --poly")->check(CLI::Range(1, 2));
        c->add_option("--param", params, "parameter value name=p/q for --poly");
        if (with_t)
            c->add_option("--t", t, "weights t1,t2,... (overrides the document)");
    }

    document::TupleDoc get() const {
        if (file.empty() == poly.empty())
            throw InputError("give exactly one of --tuple and --poly");
        document::TupleDoc d;
        if (!file.empty()) {
            auto doc = document::parse(read_file(file));
            if (!std::holds_alternative<document::TupleDoc>(doc))
                throw InputError("expected a tuple document, got " + document::kind_of(doc));
            d = std::get<document::TupleDoc>(doc);
        } else {
            std::map<std::string, Rational> ps;
            for (const auto& p : params) {
                auto eq = p.find('=');
                if (eq == std::string::npos)
                    throw InputError("--param expects name=value");
                ps[trim(p.substr(0, eq))] = rat_list(p.substr(eq + 1)).at(0);
            }
            auto parts = split(poly, ';');
            std::size_t nv = static_cast<std::size_t>(n) + 2;
            Polynomial f = parse_polynomial(parts[0], nv, ps);
            std::vector<Polynomial> ls;
            for (std::size_t i = 1; i < parts.size(); ++i)
                ls.push_back(parse_polynomial(parts[i], nv, ps));
            d.tuple = vgit::tuple_from_polynomials(n, f, ls);
        }
        if (!t.empty())
            d.t = rat_list(t);
        if (d.t && d.t->size() != d.tuple.hyperplanes.size())
            throw InputError("t must have one weight per hyperplane");
        return d;
    }

    vgit::Weights weights(const document::TupleDoc& d) const {
        if (!d.t)
            throw InputError("weights t are required (--t or a 't' field)");
        return *d.t;
    }
};

struct LatticeInput {
    std::string file;
    std::string expr;
    std::string casebook;

    void add(CLI::App* c) {
        c->add_option("--lattice", file, "lattice document (JSON, '-' for stdin)");
        c->add_option("--expr", expr, "named lattice such as U+A1^4+D4");
        c->add_option("--casebook", casebook, "casebook lattice M or T")->check(CLI::IsMember({"M", "T"}));
    }

    lattice::Lattice get() const {
        int given = !file.empty() + !expr.empty() + !casebook.empty();
        if (given != 1)
            throw InputError("give exactly one of --lattice, --expr and --casebook");
        if (!file.empty()) {
            auto doc = document::parse(read_file(file));
            if (auto* l = std::get_if<document::LatticeDoc>(&doc))
                return l->lattice;
            throw InputError("expected a lattice document, got " + document::kind_of(doc));
        }
        if (!expr.empty()) {
            lattice::Lattice l = lattice::parse_named(expr);
            l.name = expr;
            return l;
        }
        auto cb = casebook::Casebook::standard();
        return casebook == "M" ? casebook::lattice_M(cb) : casebook::lattice_T(cb);
    }
};

// ---- commands ----

void cmd_fundamental_set(int n, int d, bool weyl) {
    auto s = weyl ? vgit::weyl_orbit_set(n, d) : vgit::fundamental_set(n, d);
    if (g_format == Format::json) {
        emit_json(json{{"n", n}, {"d", d}, {"weyl", weyl}, {"count", s.size()}, {"lambdas", s}});
        return;
    }
    if (g_format == Format::csv) {
        std::vector<std::string> head;
        for (int i = 0; i < n + 2; ++i)
            head.push_back("r" + std::to_string(i));
        std::cout << csv_join(head) << "\n";
        for (const auto& l : s) {
            std::vector<std::string> row;
            for (auto x : l)
                row.push_back(std::to_string(x));
            std::cout << csv_join(row) << "\n";
        }
        return;
    }
    std::cout << (weyl ? "W.S" : "S") << "_{" << n << "," << d << "}: " << s.size() << " one-parameter subgroups\n";
    for (const auto& l : s)
        std::cout << vec_str(l) << "\n";
}

std::string halfplane_str(const vgit::HalfPlane& h) {
    std::string s = h.c0 == 0 ? "" : to_string(h.c0);
    for (std::size_t i = 0; i < h.c.size(); ++i) {
        if (h.c[i] == 0)
            continue;
        Rational a = abs(h.c[i]);
        std::string term = (a == 1 ? "" : to_string(a) + "*") + "t" + std::to_string(i + 1);
        if (s.empty())
            s = (h.c[i] < 0 ? "-" : "") + term;
        else
            s += (h.c[i] < 0 ? " - " : " + ") + term;
    }
    return (s.empty() ? "0" : s) + " >= 0";
}

void cmd_stab_region(int d, const std::string& t) {
    auto r = vgit::stab_region(d);
    auto verts = r.vertices();
    std::optional<vgit::Weights> w;
    if (!t.empty()) {
        w = rat_list(t);
        if (w->size() != 2)
            throw InputError("--t needs two weights");
    }
    if (g_format == Format::json) {
        json ineq = json::array(), vs = json::array();
        for (const auto& h : r.inequalities)
            ineq.push_back(json{{"c0", to_string(h.c0)}, {"c", rat_vec_json(h.c)}});
        for (const auto& v : verts)
            vs.push_back(rat_vec_json(v));
        json j{{"d", d}, {"inequalities", ineq}, {"vertices", vs}};
        if (w)
            j["contains"] = json{{"t", rat_vec_json(*w)}, {"member", r.contains(*w)},
                                 {"interior", r.interior_contains(*w)}};
        emit_json(j);
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "kind,c0,c1,c2,t1,t2\n";
        for (const auto& h : r.inequalities)
            std::cout << csv_join({"inequality", to_string(h.c0), to_string(h.c[0]), to_string(h.c[1]), "", ""}) << "\n";
        for (const auto& v : verts)
            std::cout << csv_join({"vertex", "", "", "", to_string(v[0]), to_string(v[1])}) << "\n";
        return;
    }
    std::cout << "Stab(1," << d << ",2):\n";
    for (const auto& h : r.inequalities)
        std::cout << "  " << halfplane_str(h) << "\n";
    std::cout << "vertices:";
    for (const auto& v : verts)
        std::cout << " " << vec_str(v);
    std::cout << "\n";
    if (w)
        std::cout << vec_str(*w) << (r.contains(*w) ? " is in" : " is not in") << " the region"
                  << (r.interior_contains(*w) ? " (interior)" : "") << "\n";
}

void cmd_walls(int n, int d, int k, bool interior) {
    auto ws = vgit::candidate_walls(n, d, k, interior ? vgit::WallFilter::stab_interior : vgit::WallFilter::none);
    if (g_format == Format::json) {
        json a = json::array();
        for (const auto& w : ws)
            a.push_back(w.coeffs);
        emit_json(json{{"n", n}, {"d", d}, {"k", k}, {"interior_only", interior}, {"count", ws.size()}, {"walls", a}});
        return;
    }
    if (g_format == Format::csv) {
        std::vector<std::string> head;
        for (int i = 0; i <= k; ++i)
            head.push_back("c" + std::to_string(i));
        std::cout << csv_join(head) << "\n";
        for (const auto& w : ws) {
            std::vector<std::string> row;
            for (auto x : w.coeffs)
                row.push_back(std::to_string(x));
            std::cout << csv_join(row) << "\n";
        }
        return;
    }
    std::cout << ws.size() << " candidate walls" << (interior ? " meeting the interior of Stab" : "") << "\n";
    for (const auto& w : ws)
        std::cout << vgit::wall_str(w) << " = 0\n";
}

void cmd_mu(const TupleInput& in, const std::string& lam_text) {
    auto d = in.get();
    auto t = in.weights(d);
    vgit::OneParam lam;
    for (const auto& x : int_list(lam_text))
        lam.push_back(small(x));
    if (lam.size() != static_cast<std::size_t>(d.tuple.nvars()))
        throw InputError("lambda must have n+2 entries");
    std::int64_t s = 0;
    for (auto x : lam)
        s += x;
    if (s != 0)
        throw InputError("lambda entries must sum to zero");
    Rational v = vgit::mu_t(d.tuple, t, lam);
    if (g_format == Format::json)
        emit_json(json{{"lambda", lam}, {"t", rat_vec_json(t)}, {"mu", to_string(v)}});
    else if (g_format == Format::csv)
        std::cout << "mu\n" << to_string(v) << "\n";
    else
        std::cout << "mu_t" << vec_str(lam) << " = " << to_string(v) << "\n";
}

void cmd_stability(const TupleInput& in) {
    auto d = in.get();
    auto t = in.weights(d);
    auto w = vgit::torus_worst(d.tuple, t);
    bool centroid = vgit::torus_semistable_centroid(d.tuple, t);
    std::string verdict = w.value > 0 ? "unstable" : w.value == 0 ? "strictly-semistable" : "stable";
    if (g_format == Format::json) {
        emit_json(json{{"t", rat_vec_json(t)}, {"lambda", w.lam}, {"max_mu", to_string(w.value)},
                       {"verdict", verdict}, {"centroid_semistable", centroid}, {"scope", "torus"}});
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "lambda,max_mu,verdict,centroid_semistable\n"
                  << csv_join({vec_str(w.lam), to_string(w.value), verdict, centroid ? "true" : "false"}) << "\n";
        return;
    }
    std::cout << "max mu_t over W.S_{" << d.tuple.n << "," << d.tuple.d() << "} = " << to_string(w.value) << " at "
              << vec_str(w.lam) << "\n";
    std::cout << "verdict (diagonal torus, given coordinates): " << verdict << "\n";
    std::cout << "centroid criterion: " << (centroid ? "semistable" : "unstable") << "\n";
}

void cmd_bounds_2gen(long w1, long w2, long wdeg, int d, const std::string& which, const std::string& t) {
    auto kind = which == "on-l1" ? vgit::Bound2GenCase::on_l1 : vgit::Bound2GenCase::exterior;
    auto h = vgit::bound_2gen(w1, w2, wdeg, d, kind);
    auto lam = vgit::bound_2gen_witness(w1, w2);
    std::optional<Rational> val;
    if (!t.empty()) {
        auto w = rat_list(t);
        if (w.size() != 2)
            throw InputError("--t needs two weights");
        val = h.eval(w);
    }
    if (g_format == Format::json) {
        json j{{"c0", to_string(h.c0)}, {"c", rat_vec_json(h.c)}, {"witness", lam}, {"case", which}};
        if (val)
            j["value_at_t"] = to_string(*val), j["violated"] = *val < 0;
        emit_json(j);
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "c0,c1,c2,w0,w1,w2\n"
                  << csv_join({to_string(h.c0), to_string(h.c[0]), to_string(h.c[1]), std::to_string(lam[0]),
                               std::to_string(lam[1]), std::to_string(lam[2])})
                  << "\n";
        return;
    }
    std::cout << "semistability requires " << halfplane_str(h) << "\n";
    std::cout << "destabilizing witness " << vec_str(lam) << "\n";
    if (val)
        std::cout << "at t: " << to_string(*val) << (*val < 0 ? " (violated)" : " (satisfied)") << "\n";
}

void cmd_dim(int n, int d, int k) {
    Integer m = vgit::moduli_dim(n, d, k);
    if (g_format == Format::json)
        emit_json(json{{"n", n}, {"d", d}, {"k", k}, {"dim", int_json(m)}});
    else if (g_format == Format::csv)
        std::cout << "n,d,k,dim\n" << n << "," << d << "," << k << "," << m.get_str() << "\n";
    else
        std::cout << m.get_str() << "\n";
}

void cmd_lattice_invariants(const LatticeInput& in) {
    auto l = in.get();
    auto inv = lattice::invariants(l);
    std::optional<lattice::TwoElemInvariants> two;
    if (inv.even && inv.det != 0) {
        try {
            two = lattice::two_elem_invariants(l);
        } catch (const std::invalid_argument&) {
        } catch (const std::domain_error&) {
        }
    }
    if (g_format == Format::json) {
        json j{{"name", l.name}, {"rank", inv.rank}, {"det", int_json(inv.det)}, {"even", inv.even},
               {"signature", {inv.sig.plus, inv.sig.minus, inv.sig.zero}}, {"two_elementary", two.has_value()}};
        if (two)
            j["ell"] = two->ell, j["delta"] = two->delta;
        emit_json(j);
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "name,rank,det,sig_plus,sig_minus,sig_zero,even,two_elementary,ell,delta\n"
                  << csv_join({l.name, std::to_string(inv.rank), inv.det.get_str(), std::to_string(inv.sig.plus),
                               std::to_string(inv.sig.minus), std::to_string(inv.sig.zero), inv.even ? "true" : "false",
                               two ? "true" : "false", two ? std::to_string(two->ell) : "",
                               two ? std::to_string(two->delta) : ""})
                  << "\n";
        return;
    }
    std::cout << "lattice " << (l.name.empty() ? "(unnamed)" : l.name) << "\n";
    std::cout << "rank " << inv.rank << ", det " << inv.det.get_str() << ", signature "
              << lattice::signature_str(inv.sig) << ", " << (inv.even ? "even" : "odd") << "\n";
    if (two)
        std::cout << "2-elementary: ell = " << two->ell << ", delta = " << two->delta << "\n";
    else
        std::cout << "not 2-elementary\n";
}

void cmd_discriminant(const LatticeInput& in, bool list) {
    auto l = in.get();
    FQM a = lattice::discriminant_group(l);
    auto qs = q_signature_mod8(a);
    std::uint64_t size = a.size();
    if (g_format == Format::json) {
        json j{{"orders", a.orders()}, {"size", size}, {"q_signature_mod8", qs.value}, {"exact", qs.exact}};
        if (list) {
            json els = json::array();
            for (std::uint64_t i = 0; i < size; ++i) {
                auto x = a.element(i);
                els.push_back(json{{"index", i}, {"element", x}, {"q", to_string(a.q(x))}});
            }
            j["elements"] = els;
        }
        emit_json(j);
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "index,element,q\n";
        for (std::uint64_t i = 0; i < size; ++i) {
            auto x = a.element(i);
            std::cout << csv_join({std::to_string(i), a.element_str(x), to_string(a.q(x))}) << "\n";
        }
        return;
    }
    std::cout << "A_L =";
    if (a.orders().empty())
        std::cout << " 0";
    for (std::size_t i = 0; i < a.orders().size(); ++i)
        std::cout << (i ? " + " : " ") << "Z/" << a.orders()[i];
    std::cout << ", order " << size << "\n";
    std::cout << "q-signature mod 8 = " << qs.value << (qs.exact ? "" : " (floating fallback)") << "\n";
    if (list)
        for (std::uint64_t i = 0; i < size; ++i) {
            auto x = a.element(i);
            std::cout << "  " << a.element_str(x) << "  q = " << to_string(a.q(x)) << "\n";
        }
}

// Labeled module and generators from a fqm-action document, or the casebook defaults.
struct ActionInput {
    std::string file;
    bool swap = false;

    void add(CLI::App* c) {
        c->add_option("--action", file, "fqm-action document (JSON); default: the casebook module A_M");
        c->add_flag("--swap", swap, "with the default action, include the swap of the two sides");
    }

    document::FqmActionDoc get() const {
        if (file.empty())
            return document::casebook_action(casebook::lattice_M(casebook::Casebook::standard()), swap);
        auto doc = document::parse(read_file(file));
        if (auto* a = std::get_if<document::FqmActionDoc>(&doc))
            return *a;
        throw InputError("expected an fqm-action document, got " + document::kind_of(doc));
    }
};

void cmd_isotropic(const LatticeInput& lin, const ActionInput& ain, bool labeled) {
    FQM a = labeled ? [&] {
        auto d = ain.get();
        return discforms::labeled_discriminant(d.lattice, d.dual_indices, d.labels);
    }()
                    : lattice::discriminant_group(lin.get());
    auto els = isotropic_elements(a);
    auto subs = isotropic_subgroups(a);
    if (g_format == Format::json) {
        json e = json::array();
        for (const auto& x : els)
            e.push_back(a.element_str(x));
        emit_json(json{{"count", els.size()}, {"elements", e}, {"isotropic_subgroups", subs.size()}});
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "index,element\n";
        for (const auto& x : els)
            std::cout << csv_join({std::to_string(a.index(x)), a.element_str(x)}) << "\n";
        return;
    }
    std::cout << "isotropic elements: " << els.size() << "\n";
    for (const auto& x : els)
        std::cout << "  " << a.element_str(x) << "\n";
    std::cout << "isotropic subgroups: " << subs.size() << "\n";
}

void cmd_orbits(const ActionInput& ain) {
    auto d = ain.get();
    FQM a = discforms::labeled_discriminant(d.lattice, d.dual_indices, d.labels);
    std::vector<FQMIsometry> gens;
    for (const auto& s : d.generators)
        gens.push_back(discforms::build_action(a, s));
    auto g = group_closure(a, gens);
    std::vector<std::uint64_t> idx;
    for (const auto& x : isotropic_elements(a))
        idx.push_back(a.index(x));
    std::sort(idx.begin(), idx.end());
    auto orbs = orbits(g, idx);
    auto name = [&](std::uint64_t i) { return a.element_str(a.element(i)); };
    if (g_format == Format::json) {
        json os = json::array();
        for (const auto& o : orbs) {
            json m = json::array();
            for (auto i : o)
                m.push_back(name(i));
            os.push_back(json{{"representative", name(o.front())}, {"size", o.size()}, {"members", m}});
        }
        emit_json(json{{"group_order", g.order()}, {"orbit_count", orbs.size()}, {"orbits", os}});
        return;
    }
    if (g_format == Format::csv) {
        std::cout << "orbit,size,representative,members\n";
        for (std::size_t k = 0; k < orbs.size(); ++k) {
            std::string members;
            for (auto i : orbs[k])
                members += (members.empty() ? "" : " ") + name(i);
            std::cout << csv_join({std::to_string(k), std::to_string(orbs[k].size()), name(orbs[k].front()), members})
                      << "\n";
        }
        return;
    }
    std::cout << "group order " << g.order() << ", " << orbs.size() << " orbits on isotropic elements\n";
    for (const auto& o : orbs)
        std::cout << "  [" << o.size() << "] " << name(o.front()) << "\n";
}

void print_lattice(const lattice::Lattice& l) {
    if (g_format == Format::json) {
        std::cout << document::serialize(document::LatticeDoc{l});
        return;
    }
    if (g_format == Format::csv) {
        std::vector<std::string> head;
        for (std::size_t j = 0; j < l.rank(); ++j)
            head.push_back("g" + std::to_string(j));
        std::cout << csv_join(head) << "\n";
        for (std::size_t i = 0; i < l.rank(); ++i) {
            std::vector<std::string> row;
            for (std::size_t j = 0; j < l.rank(); ++j)
                row.push_back(l.gram(i, j).get_str());
            std::cout << csv_join(row) << "\n";
        }
        return;
    }
    auto inv = lattice::invariants(l);
    std::cout << "rank " << inv.rank << ", det " << inv.det.get_str() << ", signature "
              << lattice::signature_str(inv.sig) << "\n";
    for (std::size_t i = 0; i < l.rank(); ++i)
        std::cout << "  " << vec_str(l.gram.row(i)) << "\n";
}

std::vector<IntVector> vectors_of(const std::string& text, std::size_t rank) {
    std::vector<IntVector> vs;
    for (const auto& part : split(text, ';')) {
        IntVector v = int_list(part);
        if (v.size() != rank)
            throw InputError("vector " + trim(part) + " does not have " + std::to_string(rank) + " coordinates");
        vs.push_back(v);
    }
    return vs;
}

void cmd_complement(const LatticeInput& in, const std::string& vecs) {
    auto l = in.get();
    auto c = lattice::orthogonal_complement(l, vectors_of(vecs, l.rank()));
    c.name = l.name.empty() ? "complement" : "complement in " + l.name;
    print_lattice(c);
}

void cmd_quotient(const LatticeInput& in, const std::string& vec) {
    auto l = in.get();
    auto vs = vectors_of(vec, l.rank());
    if (vs.size() != 1)
        throw InputError("--vector takes one vector");
    auto q = lattice::quotient_vperp(l, vs[0]);
    q.name = "v-perp/Zv for v = " + vec_str(vs[0]);
    print_lattice(q);
}

int cmd_vinberg(const std::string& job_file, const LatticeInput& lin, const std::string& h_text,
                std::optional<std::int64_t> max_height) {
    document::VinbergJobDoc job;
    if (!job_file.empty()) {
        auto doc = document::parse(read_file(job_file));
        if (!std::holds_alternative<document::VinbergJobDoc>(doc))
            throw InputError("expected a vinberg-job document, got " + document::kind_of(doc));
        job = std::get<document::VinbergJobDoc>(doc);
    } else {
        job.lattice = lin.get();
        if (h_text.empty())
            throw InputError("--h is required without --job");
        job.h = int_list(h_text);
        job.max_height = env_int("MAX_HEIGHT", 30);
    }
    if (max_height)
        job.max_height = *max_height;
    std::int64_t threads = env_int("THREADS", 1);
    vinberg::HyperbolicLattice hl(job.lattice);
    if (job.h.size() != hl.rank())
        throw InputError("h must have one coordinate per basis vector");
    auto run = vinberg::vinberg_run(hl, job.h, job.max_height);
    std::vector<vinberg::ParabolicClass> classes;
    std::set<std::string> labels;
    if (run.stopped) {
        classes = vinberg::detect_parabolic(run.diagram, hl.n() - 1);
        for (auto& c : classes) {
            c.isotropic = vinberg::null_vector(run.diagram, c.components.front());
            labels.insert(c.label);
        }
    }
    if (g_format == Format::json) {
        json roots = json::array(), log = json::array(), cls = json::array(), edges = json::array();
        for (const auto& r : run.diagram.nodes)
            roots.push_back(json{{"stage", r.stage}, {"height", int_json(r.height)}, {"vector", vec_json(r.vector)}});
        for (const auto& [ij, w] : run.diagram.edges)
            edges.push_back(json{{"i", ij.first}, {"j", ij.second}, {"pairing", int_json(w)}});
        for (const auto& e : run.log)
            log.push_back(json{{"height", int_json(e.height)}, {"candidates", e.candidates},
                               {"accepted", e.accepted}, {"nodes", e.nodes}});
        for (const auto& c : classes)
            cls.push_back(json{{"label", c.label}, {"isotropic", vec_json(c.isotropic)}});
        emit_json(json{{"lattice", job.lattice.name}, {"h", vec_json(job.h)}, {"max_height", int_json(job.max_height)},
                       {"threads", threads}, {"stopped", run.stopped}, {"last_height", int_json(run.last_height)},
                       {"roots", roots}, {"edges", edges}, {"log", log}, {"classes", cls}, {"labels", labels}});
    } else if (g_format == Format::csv) {
        std::cout << "stage,height,vector\n";
        for (const auto& r : run.diagram.nodes)
            std::cout << csv_join({std::to_string(r.stage), r.height.get_str(), vec_str(r.vector)}) << "\n";
    } else {
        std::cout << "lattice " << job.lattice.name << ", h = " << vec_str(job.h) << ", max height "
                  << job.max_height.get_str() << ", threads " << threads << "\n";
        for (const auto& e : run.log)
            std::cout << "height " << e.height.get_str() << ": " << e.candidates << " candidates, " << e.accepted
                      << " accepted, " << e.nodes << " nodes\n";
        std::cout << run.diagram.str();
        if (run.stopped) {
            std::cout << "stopped at height " << run.last_height.get_str() << "; " << classes.size()
                      << " maximal parabolic subdiagrams\n";
            for (const auto& c : classes)
                std::cout << "  " << c.label << "  isotropic " << vec_str(c.isotropic) << "\n";
            std::cout << "labels:";
            for (const auto& l : labels)
                std::cout << " " << l;
            std::cout << "\n";
        } else {
            std::cout << "did not stop within height " << job.max_height.get_str() << "\n";
        }
    }
    return run.stopped ? 0 : EXIT_CHECK;
}

int cmd_casebook_run(const std::vector<int>& only, bool mutations) {
    auto cb = casebook::Casebook::standard();
    casebook::RunOptions opt;
    opt.max_height = env_int("MAX_HEIGHT", 30);
    opt.only = only;
    for (int k : only)
        if (k < 1 || k > static_cast<int>(casebook::check_titles().size()))
            throw InputError("no check " + std::to_string(k));
    auto rep = casebook::run(cb, opt);
    bool ok = rep.all_pass();
    std::vector<casebook::MutationOutcome> muts;
    if (mutations)
        muts = casebook::mutation_test(cb, opt);
    std::size_t undetected = 0;
    for (const auto& m : muts)
        undetected += !m.detected;
    if (g_format == Format::json) {
        json lines = json::array();
        for (const auto& l : rep.lines)
            lines.push_back(json{{"check", l.check}, {"pass", l.pass}, {"anchor", l.anchor}, {"detail", l.detail}});
        json j{{"lines", lines}, {"notes", rep.notes}, {"all_pass", ok}};
        if (mutations) {
            json missed = json::array();
            for (const auto& m : muts)
                if (!m.detected)
                    missed.push_back(json{{"fixture", m.fixture}, {"position", m.position}});
            j["mutations"] = json{{"total", muts.size()}, {"undetected", missed}};
        }
        emit_json(j);
    } else if (g_format == Format::csv) {
        std::cout << "check,status,anchor,detail\n";
        for (const auto& l : rep.lines)
            std::cout << csv_join({std::to_string(l.check), l.pass ? "PASS" : "FAIL", l.anchor, l.detail}) << "\n";
    } else {
        std::cout << rep.str();
        if (mutations) {
            std::cout << "mutations: " << muts.size() << ", detected " << muts.size() - undetected << "\n";
            for (const auto& m : muts)
                if (!m.detected)
                    std::cout << "UNDETECTED " << m.fixture << "[" << m.position << "]\n";
        }
    }
    return ok && undetected == 0 ? 0 : EXIT_CHECK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vgitk3: GIT stability, lattice and discriminant-form tools"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));

    int n = 1, d = 4, k = 2;
    bool weyl = false, interior = false, list = false, labeled = false, mutations = false;
    std::string t, lam, which = "exterior", vecs, job;
    long w1 = 0, w2 = 0, wdeg = 0;
    std::vector<int> only;
    std::optional<std::int64_t> max_height;
    TupleInput tin;
    LatticeInput lin;
    ActionInput ain;
    int rc = 0;
    std::function<void()> action;

    auto* fs = app.add_subcommand("fundamental-set", "the fundamental set S_{n,d}");
    fs->add_option("--n", n)->check(CLI::Range(1, 2));
    fs->add_option("--d", d)->required()->check(CLI::Range(1, 12));
    fs->add_flag("--weyl", weyl, "all coordinate permutations");
    fs->callback([&] { action = [&] { cmd_fundamental_set(n, d, weyl); }; });

    auto* sr = app.add_subcommand("stab-region", "the region Stab(1,d,2)");
    sr->add_option("--d", d)->required()->check(CLI::Range(1, 1000));
    sr->add_option("--t", t, "test membership of t1,t2");
    sr->callback([&] { action = [&] { cmd_stab_region(d, t); }; });

    auto* wl = app.add_subcommand("walls", "candidate walls in t-space");
    wl->add_option("--n", n)->check(CLI::Range(1, 2));
    wl->add_option("--d", d)->required()->check(CLI::Range(1, 12));
    wl->add_option("--k", k)->required()->check(CLI::Range(1, 4));
    wl->add_flag("--interior", interior, "keep walls meeting the interior of Stab");
    wl->callback([&] { action = [&] { cmd_walls(n, d, k, interior); }; });

    auto* mu = app.add_subcommand("mu", "mu_t of a tuple at one 1-PS");
    tin.add(mu);
    mu->add_option("--lambda", lam, "weights r0,r1,... summing to zero")->required();
    mu->callback([&] { action = [&] { cmd_mu(tin, lam); }; });

    auto* st = app.add_subcommand("stability", "torus stability of a tuple");
    tin.add(st);
    st->callback([&] { action = [&] { cmd_stability(tin); }; });

    auto* bg = app.add_subcommand("bounds-2gen", "half-plane forced by a two-generator support");
    bg->add_option("--w1", w1)->required();
    bg->add_option("--w2", w2)->required();
    bg->add_option("--wdeg", wdeg)->required();
    bg->add_option("--d", d)->required()->check(CLI::Range(1, 1000));
    bg->add_option("--case", which)->check(CLI::IsMember({"exterior", "on-l1"}));
    bg->add_option("--t", t, "evaluate at t1,t2");
    bg->callback([&] { action = [&] { cmd_bounds_2gen(w1, w2, wdeg, d, which, t); }; });

    auto* dm = app.add_subcommand("dim", "dimension of the moduli of (hypersurface, k hyperplanes)");
    dm->add_option("--n", n)->required()->check(CLI::Range(1, 1000));
    dm->add_option("--d", d)->required()->check(CLI::Range(1, 1000));
    dm->add_option("--k", k)->required()->check(CLI::Range(0, 1000));
    dm->callback([&] { action = [&] { cmd_dim(n, d, k); }; });

    auto* li = app.add_subcommand("lattice-invariants", "rank, determinant, signature, 2-elementary invariants");
    lin.add(li);
    li->callback([&] { action = [&] { cmd_lattice_invariants(lin); }; });

    auto* ds = app.add_subcommand("discriminant", "discriminant group and form");
    LatticeInput lin2;
    lin2.add(ds);
    ds->add_flag("--elements", list, "list every element with its q value");
    ds->callback([&] { action = [&] { cmd_discriminant(lin2, list); }; });

    auto* is = app.add_subcommand("isotropic", "isotropic elements of the discriminant form");
    LatticeInput lin3;
    lin3.add(is);
    ActionInput ain_iso;
    is->add_option("--action", ain_iso.file, "fqm-action document: use its labeled module");
    is->add_flag("--labeled", labeled, "use the labeled casebook module A_M (or the --action module)");
    is->callback([&] {
        action = [&] { cmd_isotropic(lin3, ain_iso, labeled || !ain_iso.file.empty()); };
    });

    auto* ob = app.add_subcommand("orbits", "orbits of a permutation action on isotropic elements");
    ain.add(ob);
    ob->callback([&] { action = [&] { cmd_orbits(ain); }; });

    auto* cp = app.add_subcommand("complement", "orthogonal complement of vectors");
    LatticeInput lin4;
    lin4.add(cp);
    cp->add_option("--vectors", vecs, "vectors 'a,b,...;c,d,...'")->required();
    cp->callback([&] { action = [&] { cmd_complement(lin4, vecs); }; });

    auto* qt = app.add_subcommand("quotient", "v-perp/Zv for a primitive isotropic v");
    LatticeInput lin5;
    lin5.add(qt);
    qt->add_option("--vector", vecs, "the vector v")->required();
    qt->callback([&] { action = [&] { cmd_quotient(lin5, vecs); }; });

    auto* vb = app.add_subcommand("vinberg", "Vinberg's algorithm and maximal parabolic subdiagrams");
    vb->set_help_flag("--help", "Print this help message and exit");
    LatticeInput lin6;
    lin6.add(vb);
    vb->add_option("--job", job, "vinberg-job document (JSON)");
    vb->add_option("--h", t, "controlling vector h");
    vb->add_option("--max-height", max_height, "height bound (default: MAX_HEIGHT or 30)");
    vb->callback([&] { action = [&] { rc = cmd_vinberg(job, lin6, t, max_height); }; });

    auto* cr = app.add_subcommand("casebook-run", "run every casebook check");
    cr->add_option("--only", only, "restrict to these check numbers")->delimiter(',');
    cr->add_flag("--mutations", mutations, "also flip every stored integer and require a FAIL");
    cr->callback([&] { action = [&] { rc = cmd_casebook_run(only, mutations); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }
    g_format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text;

    try {
        action();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CHECK;
    }
    std::cout.flush();
    return rc;
}
