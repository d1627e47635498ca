#include "vgitk3/document.hpp"

#include "json.hpp"

#include <regex>
#include <stdexcept>

namespace vgitk3::document {

using nlohmann::json;

namespace {

const Integer JSON_SAFE = Integer(1) << 53;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("document: " + what); }

json int_json(const Integer& x) {
    if (abs(x) < JSON_SAFE)
        return json(x.get_si());
    return json(x.get_str());
}

Integer int_from(const json& j, const std::string& field) {
    if (j.is_number_integer())
        return Integer(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_unsigned())
        return Integer(std::to_string(j.get<std::uint64_t>()));
    if (j.is_string()) {
        static const std::regex re("[-+]?[0-9]+");
        std::string s = j.get<std::string>();
        if (!std::regex_match(s, re))
            bad(field + ": not an integer: " + s);
        if (s[0] == '+')
            s.erase(0, 1);
        return Integer(s);
    }
    bad(field + ": expected an integer");
}

std::int64_t small_from(const json& j, const std::string& field) {
    Integer x = int_from(j, field);
    if (!x.fits_slong_p())
        bad(field + ": out of range");
    return x.get_si();
}

json rat_json(const Rational& q) { return json(to_string(q)); }

Rational rat_from(const json& j, const std::string& field) {
    if (j.is_number_integer() || j.is_number_unsigned())
        return Rational(int_from(j, field));
    if (!j.is_string())
        bad(field + ": expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        bad(field + ": " + e.what());
    }
}

const json& need(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end())
        bad("missing field '" + key + "'");
    return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* a : keys)
            ok = ok || k == a;
        if (!ok)
            bad(where + ": unknown field '" + k + "'");
    }
}

json support_json(const vgit::Support& s) {
    json mons = json::array();
    for (const auto& m : s.monomials)
        mons.push_back(m);
    return json{{"degree", s.degree}, {"support", mons}};
}

vgit::Support support_from(const json& j, std::size_t nvars) {
    if (!j.is_object())
        bad("support: expected an object");
    only_keys(j, {"degree", "support"}, "support");
    vgit::Support s;
    s.degree = small_from(need(j, "degree"), "degree");
    const json& mons = need(j, "support");
    if (!mons.is_array())
        bad("support: expected an array of exponents");
    for (const auto& m : mons) {
        if (!m.is_array() || m.size() != nvars)
            bad("support: exponent of wrong length");
        Exponent e;
        for (const auto& x : m)
            e.push_back(small_from(x, "exponent"));
        if (!s.monomials.insert(e).second)
            bad("support: repeated exponent");
    }
    return s;
}

json lattice_json(const lattice::Lattice& l) {
    json g = json::array();
    for (std::size_t i = 0; i < l.gram.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < l.gram.cols(); ++j)
            row.push_back(int_json(l.gram(i, j)));
        g.push_back(row);
    }
    return json{{"name", l.name}, {"gram", g}, {"labels", l.labels}};
}

lattice::Lattice lattice_from(const json& j) {
    if (!j.is_object())
        bad("lattice: expected an object");
    lattice::Lattice l;
    if (j.contains("expr")) {
        only_keys(j, {"expr", "name", "labels", "format", "kind"}, "lattice");
        try {
            l = lattice::parse_named(need(j, "expr").get<std::string>());
        } catch (const std::exception& e) {
            bad(std::string("lattice expr: ") + e.what());
        }
        l.name = need(j, "expr").get<std::string>();
    } else {
        only_keys(j, {"name", "gram", "labels", "format", "kind"}, "lattice");
        const json& g = need(j, "gram");
        if (!g.is_array())
            bad("gram: expected an array of rows");
        std::vector<IntVector> rows;
        for (const auto& r : g) {
            if (!r.is_array())
                bad("gram: expected an array of rows");
            IntVector row;
            for (const auto& x : r)
                row.push_back(int_from(x, "gram"));
            rows.push_back(row);
        }
        try {
            l.gram = IntMatrix::from_rows(rows);
        } catch (const std::exception& e) {
            bad(std::string("gram: ") + e.what());
        }
    }
    if (j.contains("name"))
        l.name = j["name"].get<std::string>();
    if (j.contains("labels"))
        l.labels = j["labels"].get<std::vector<std::string>>();
    try {
        l.validate();
    } catch (const std::exception& e) {
        bad(std::string("lattice: ") + e.what());
    }
    return l;
}

json to_json(const TupleDoc& d) {
    json hs = json::array();
    for (const auto& s : d.tuple.hyperplanes)
        hs.push_back(support_json(s));
    json j{{"format", FORMAT}, {"kind", "tuple"}, {"n", d.tuple.n},
           {"hypersurface", support_json(d.tuple.hypersurface)}, {"hyperplanes", hs}};
    if (d.t) {
        json t = json::array();
        for (const auto& x : *d.t)
            t.push_back(rat_json(x));
        j["t"] = t;
    }
    return j;
}

TupleDoc tuple_from(const json& j) {
    only_keys(j, {"format", "kind", "n", "hypersurface", "hyperplanes", "polynomials", "params", "t"}, "tuple");
    TupleDoc d;
    int n = static_cast<int>(small_from(need(j, "n"), "n"));
    if (n < 1)
        bad("n must be positive");
    std::size_t nvars = static_cast<std::size_t>(n) + 2;
    if (j.contains("polynomials")) {
        if (j.contains("hypersurface") || j.contains("hyperplanes"))
            bad("give either supports or polynomials, not both");
        std::map<std::string, Rational> params;
        if (j.contains("params"))
            for (const auto& [k, v] : j["params"].items())
                params[k] = rat_from(v, "params");
        const json& p = j["polynomials"];
        only_keys(p, {"hypersurface", "hyperplanes"}, "polynomials");
        try {
            Polynomial f = parse_polynomial(need(p, "hypersurface").get<std::string>(), nvars, params);
            std::vector<Polynomial> ls;
            for (const auto& s : need(p, "hyperplanes"))
                ls.push_back(parse_polynomial(s.get<std::string>(), nvars, params));
            d.tuple = vgit::tuple_from_polynomials(n, f, ls);
        } catch (const std::invalid_argument& e) {
            bad(e.what());
        }
    } else {
        d.tuple.n = n;
        d.tuple.hypersurface = support_from(need(j, "hypersurface"), nvars);
        const json& hs = need(j, "hyperplanes");
        if (!hs.is_array())
            bad("hyperplanes: expected an array");
        for (const auto& h : hs)
            d.tuple.hyperplanes.push_back(support_from(h, nvars));
    }
    try {
        d.tuple.validate();
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
    if (j.contains("t")) {
        vgit::Weights t;
        for (const auto& x : j["t"])
            t.push_back(rat_from(x, "t"));
        if (t.size() != d.tuple.hyperplanes.size())
            bad("t must have one weight per hyperplane");
        d.t = t;
    }
    return d;
}

json to_json(const LatticeDoc& d) {
    json j = lattice_json(d.lattice);
    j["format"] = FORMAT;
    j["kind"] = "lattice";
    return j;
}

json to_json(const FqmActionDoc& d) {
    json gens = json::array();
    for (const auto& g : d.generators)
        gens.push_back(discforms::action_str(g));
    return json{{"format", FORMAT},      {"kind", "fqm-action"}, {"lattice", lattice_json(d.lattice)},
                {"dual_indices", d.dual_indices}, {"labels", d.labels}, {"generators", gens}};
}

FqmActionDoc action_from(const json& j) {
    only_keys(j, {"format", "kind", "lattice", "dual_indices", "labels", "generators"}, "fqm-action");
    FqmActionDoc d;
    d.lattice = lattice_from(need(j, "lattice"));
    for (const auto& x : need(j, "dual_indices")) {
        std::int64_t i = small_from(x, "dual_indices");
        if (i < 0 || static_cast<std::size_t>(i) >= d.lattice.rank())
            bad("dual index out of range");
        d.dual_indices.push_back(static_cast<std::size_t>(i));
    }
    d.labels = need(j, "labels").get<std::vector<std::string>>();
    if (d.labels.size() != d.dual_indices.size())
        bad("one label per dual index");
    for (const auto& g : need(j, "generators"))
        d.generators.push_back(parse_action(g.get<std::string>()));
    return d;
}

json to_json(const VinbergJobDoc& d) {
    json h = json::array();
    for (const auto& x : d.h)
        h.push_back(int_json(x));
    return json{{"format", FORMAT}, {"kind", "vinberg-job"}, {"lattice", lattice_json(d.lattice)},
                {"h", h}, {"max_height", int_json(d.max_height)}};
}

VinbergJobDoc job_from(const json& j) {
    only_keys(j, {"format", "kind", "lattice", "h", "max_height"}, "vinberg-job");
    VinbergJobDoc d;
    d.lattice = lattice_from(need(j, "lattice"));
    for (const auto& x : need(j, "h"))
        d.h.push_back(int_from(x, "h"));
    if (d.h.size() != d.lattice.rank())
        bad("h must have one coordinate per basis vector");
    if (j.contains("max_height"))
        d.max_height = int_from(j["max_height"], "max_height");
    if (d.max_height < 0)
        bad("max_height must be nonnegative");
    return d;
}

}  // namespace

bool FqmActionDoc::operator==(const FqmActionDoc& o) const {
    if (!(lattice == o.lattice && dual_indices == o.dual_indices && labels == o.labels &&
          generators.size() == o.generators.size()))
        return false;
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (discforms::action_str(generators[i]) != discforms::action_str(o.generators[i]))
            return false;
    return true;
}

std::string kind_of(const Document& d) {
    static const char* names[] = {"tuple", "lattice", "fqm-action", "vinberg-job"};
    return names[d.index()];
}

Document parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        bad("top level must be an object");
    const json& f = need(j, "format");
    if (!f.is_number_integer() || f.get<int>() != FORMAT)
        bad("unsupported format (expected 1)");
    const json& k = need(j, "kind");
    if (!k.is_string())
        bad("kind must be a string");
    std::string kind = k.get<std::string>();
    try {
        if (kind == "tuple")
            return tuple_from(j);
        if (kind == "lattice")
            return LatticeDoc{lattice_from(j)};
        if (kind == "fqm-action")
            return action_from(j);
        if (kind == "vinberg-job")
            return job_from(j);
    } catch (const json::exception& e) {
        bad(std::string("schema: ") + e.what());
    }
    bad("unknown kind '" + kind + "'");
}

std::string serialize(const Document& d) {
    json j = std::visit([](const auto& x) { return to_json(x); }, d);
    return j.dump(2) + "\n";
}

discforms::PermActionSpec parse_action(const std::string& s) {
    using discforms::ActionKind;
    if (s == "swap")
        return {ActionKind::swap, 0, 0};
    static const std::regex re(R"(\(\s*(alpha|beta)([1-4])\s+(alpha|beta)([1-4])\s*\))");
    std::smatch m;
    if (!std::regex_match(s, m, re) || m[1] != m[3])
        bad("action: expected \"(alphaI alphaJ)\", \"(betaI betaJ)\" or \"swap\": " + s);
    bool alpha = m[1] == "alpha";
    int i = std::stoi(m[2]), j = std::stoi(m[4]);
    if (i == j)
        bad("action: indices must differ");
    if (i > j)
        std::swap(i, j);
    if (j == 4)
        return {alpha ? ActionKind::alpha_with4 : ActionKind::beta_with4, i, 0};
    return {alpha ? ActionKind::alpha_transposition : ActionKind::beta_transposition, i, j};
}

FqmActionDoc casebook_action(const lattice::Lattice& m, bool with_swap) {
    FqmActionDoc d;
    d.lattice = m;
    d.dual_indices = {0, 2, 3, 6, 7, 9};
    d.labels = discforms::am_labels();
    d.generators = discforms::standard_generators(with_swap);
    return d;
}

}  // namespace vgitk3::document
