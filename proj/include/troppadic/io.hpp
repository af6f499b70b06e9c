#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "troppadic/bounds.hpp"
#include "troppadic/terms.hpp"

namespace troppadic::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json header(const std::string& type) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["type"] = type;
    return j;
}

inline std::string q_str(Rational q) {
    q.canonicalize();
    return q.get_str();
}
inline std::string v_str(const ValuationQ& v) { return v.is_infinite() ? "inf" : v.value().get_str(); }

inline Rational parse_rational(const Json& j, const std::string& what) {
    std::string s;
    if (j.is_number_integer()) s = std::to_string(j.get<long long>());
    else if (j.is_string()) s = j.get<std::string>();
    else throw InputError(what + ": expected a rational \"num/den\"");
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw InputError(what + ": malformed rational '" + s + "'");
    q.canonicalize();
    return q;
}

inline ValuationQ parse_valuation(const Json& j, const std::string& what) {
    if (j.is_string() && j.get<std::string>() == "inf") return ValuationQ::infinity();
    return ValuationQ(parse_rational(j, what));
}

inline long parse_long(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw InputError(what + ": expected an integer");
    return j.get<long>();
}

inline const Json& field(const Json& j, const std::string& key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw InputError(what + ": missing field '" + key + "'");
    return j.at(key);
}

inline Json vec_json(const QVector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(q_str(x));
    return a;
}

inline QVector parse_qvector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + ": expected an array");
    QVector v;
    for (const auto& x : j) v.push_back(parse_rational(x, what));
    return v;
}

inline Json exponent_json(const Exponent& e) {
    Json a = Json::array();
    for (int x : e) a.push_back(x);
    return a;
}

// Exact integers as decimal strings, everything else as {unit, val, prec};
// an indeterminate O(p^k) has no unit.
inline Json coeff_json(const PadicScaled& c) {
    if (c.is_zero()) return "0";
    if (c.is_indeterminate()) return Json{{"val", q_str(c.valuation_lower_bound().value())}};
    Rational v = c.valuation().value();
    if (!c.precision() && v.get_den() == 1 && v >= 0 && c.unit().get_den() == 1) {
        Integer z = c.unit().get_num() * ipow(c.prime(), to_long(Integer(v.get_num())));
        return z.get_str();
    }
    Json j{{"unit", q_str(c.unit())}, {"val", q_str(v)}};
    if (c.precision()) j["prec"] = q_str(*c.precision());
    return j;
}

inline PadicScaled parse_coeff(long p, const Json& j, const std::string& what) {
    if (j.is_string() || j.is_number_integer()) {
        std::string s = j.is_string() ? j.get<std::string>() : std::to_string(j.get<long long>());
        Integer z;
        if (s.empty() || z.set_str(s, 10) != 0) throw InputError(what + ": malformed integer coefficient '" + s + "'");
        return PadicScaled::from_integer(p, z);
    }
    if (!j.is_object()) throw InputError(what + ": coefficient must be a string or an object");
    Rational v = parse_rational(field(j, "val", what), what + ".val");
    if (!j.contains("unit")) return PadicScaled::indeterminate(p, v);
    Rational u = parse_rational(j.at("unit"), what + ".unit");
    std::optional<Rational> prec;
    if (j.contains("prec") && !j.at("prec").is_null()) prec = parse_rational(j.at("prec"), what + ".prec");
    return PadicScaled::from_unit(p, u, v, prec);
}

inline Json series_json(const RestrictedSeries& f, int nparams = 0) {
    Json j = header("series");
    j["prime"] = f.prime();
    j["nvars"] = f.nvars();
    if (nparams) j["nparams"] = nparams;
    Json dom = Json::array();
    for (const auto& r : f.domain()) dom.push_back(r ? Json(q_str(*r)) : Json(nullptr));
    j["domain"] = dom;
    Json terms = Json::array();
    for (const auto& [e, c] : f.terms()) terms.push_back(Json{{"exps", exponent_json(e)}, {"coeff", coeff_json(c)}});
    j["terms"] = terms;
    j["tail"] = Json{{"cutoff", f.cutoff()}, {"slope", q_str(f.tail().slope)}, {"offset", v_str(f.tail().offset)}};
    j["noise"] = v_str(f.noise());
    return j;
}

struct SeriesFile {
    RestrictedSeries series;
    int nparams = 0;
    ParamSeries param() const { return ParamSeries(series, nparams); }
};

inline SeriesFile parse_series(const Json& j) {
    const std::string w = "series";
    long p = parse_long(field(j, "prime", w), "prime");
    long n = parse_long(field(j, "nvars", w), "nvars");
    if (n < 0 || n > 64) throw InputError("nvars out of range");
    RestrictedSeries f(p, static_cast<int>(n));
    const Json& terms = field(j, "terms", w);
    if (!terms.is_array()) throw InputError("terms: expected an array");
    std::vector<std::pair<Exponent, PadicScaled>> ts;
    long maxdeg = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string tw = "terms[" + std::to_string(i) + "]";
        const Json& ex = field(terms[i], "exps", tw);
        if (!ex.is_array() || static_cast<long>(ex.size()) != n) throw InputError(tw + ".exps: expected " + std::to_string(n) + " integers");
        Exponent e;
        for (const auto& x : ex) {
            long k = parse_long(x, tw + ".exps");
            if (k < 0) throw InputError(tw + ".exps: negative exponent");
            e.push_back(static_cast<int>(k));
        }
        ts.emplace_back(e, parse_coeff(p, field(terms[i], "coeff", tw), tw + ".coeff"));
        maxdeg = std::max(maxdeg, degree(e));
    }
    TailBound t;
    t.cutoff = maxdeg;
    if (j.contains("tail") && !j.at("tail").is_null()) {
        const Json& tj = j.at("tail");
        t.cutoff = parse_long(field(tj, "cutoff", "tail"), "tail.cutoff");
        t.slope = parse_rational(field(tj, "slope", "tail"), "tail.slope");
        t.offset = parse_valuation(field(tj, "offset", "tail"), "tail.offset");
    }
    f.set_tail(t);
    for (const auto& [e, c] : ts) f.add_to_term(e, c);
    if (j.contains("domain")) {
        const Json& dj = j.at("domain");
        if (!dj.is_array() || static_cast<long>(dj.size()) != n) throw InputError("domain: expected one bound per variable");
        std::vector<DomainBound> d;
        for (const auto& x : dj) d.push_back(x.is_null() ? DomainBound{} : DomainBound{parse_rational(x, "domain")});
        f.set_domain(d);
    }
    if (j.contains("noise")) f.set_noise(parse_valuation(j.at("noise"), "noise"));
    SeriesFile out{f, 0};
    if (j.contains("nparams")) out.nparams = static_cast<int>(parse_long(j.at("nparams"), "nparams"));
    out.param();  // validates the parameter domains
    return out;
}

// Parses JSON text, reporting syntax errors with line and column.
inline Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        long line = 1, col = 1;
        for (std::size_t i = 0; i < pos; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json read_json(const std::string& path) { return parse_json_text(read_file(path), path); }

inline SeriesFile read_series(const std::string& path) {
    Json j = read_json(path);
    try {
        return parse_series(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

// Writes via a temporary file and rename so readers never see partial output.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + path + "'");
        out << text;
        if (!out) throw InputError("cannot write '" + path + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot write '" + path + "'");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json halfspace_json(const Halfspace& h) { return Json{{"a", vec_json(h.a)}, {"b", q_str(h.b)}}; }

inline Json polyhedron_json(const QPolyhedron& p) {
    Json j;
    j["ambient"] = p.ambient();
    j["dim"] = p.dim();
    Json v = Json::array(), r = Json::array(), l = Json::array(), f = Json::array(), e = Json::array();
    for (const auto& x : p.vertices()) v.push_back(vec_json(x));
    for (const auto& x : p.rays()) r.push_back(vec_json(x));
    for (const auto& x : p.lines()) l.push_back(vec_json(x));
    for (const auto& h : p.facets()) f.push_back(halfspace_json(h));
    for (const auto& h : p.equalities()) e.push_back(halfspace_json(h));
    j["vertices"] = v;
    j["rays"] = r;
    j["lines"] = l;
    j["inequalities"] = f;
    j["equations"] = e;
    return j;
}

inline Json polytope_report(const QPolyhedron& p) {
    Json j = header("polytope");
    for (auto& [k, v] : polyhedron_json(p).items()) j[k] = v;
    return j;
}

// {"dim": n, "points": [[...], ...]} or a bare array of points.
inline QPolyhedron parse_polytope(const Json& j, int dim_hint = -1) {
    const Json& pts = j.is_array() ? j : field(j, "points", "polytope");
    if (!pts.is_array()) throw InputError("polytope: points must be an array");
    long n = dim_hint;
    if (j.is_object() && j.contains("dim")) n = parse_long(j.at("dim"), "polytope.dim");
    std::vector<QVector> v;
    for (const auto& x : pts) v.push_back(parse_qvector(x, "polytope point"));
    if (n < 0) {
        if (v.empty()) throw InputError("polytope: empty point list without dim");
        n = static_cast<long>(v[0].size());
    }
    for (const auto& x : v)
        if (static_cast<long>(x.size()) != n) throw InputError("polytope: point dimension mismatch");
    if (v.empty()) throw InputError("polytope: no points");
    return convex_hull(static_cast<int>(n), v);
}

inline std::vector<QPolyhedron> parse_polytope_family(const Json& j) {
    const Json& ps = j.is_array() ? j : field(j, "polytopes", "polytope family");
    if (!ps.is_array() || ps.empty()) throw InputError("polytope family: expected a nonempty array");
    std::vector<QPolyhedron> out;
    for (const auto& p : ps) out.push_back(parse_polytope(p));
    for (const auto& p : out)
        if (p.ambient() != out[0].ambient()) throw InputError("polytope family: ambient dimension mismatch");
    return out;
}

inline Json vert_json(const std::vector<VertTerm>& v) {
    Json a = Json::array();
    for (const auto& t : v) a.push_back(Json{{"exps", exponent_json(t.exponent)}, {"valuation", q_str(t.valuation)}});
    return a;
}

inline Json cell_json(const TropCell& c, std::size_t label) {
    Json j;
    j["label"] = label;
    j["dim"] = c.cell.dim();
    j["witness"] = vec_json(c.witness);
    Json idx = Json::array();
    for (int i : c.indices) idx.push_back(i);
    j["term_indices"] = idx;
    j["vert"] = vert_json(c.vert);
    j["cell"] = polyhedron_json(c.cell);
    j["newton"] = polyhedron_json(c.newton);
    return j;
}

inline Json trop_report(const TropicalData& d) {
    Json j = header("trop");
    j["prime"] = d.series.prime();
    j["nvars"] = d.ambient();
    j["domain"] = polyhedron_json(d.domain);
    j["terms"] = vert_json(d.terms);
    Json cells = Json::array(), bcells = Json::array();
    for (std::size_t i = 0; i < d.cells.size(); ++i) cells.push_back(cell_json(d.cells[i], i + 1));
    for (std::size_t i = 0; i < d.boundary_cells.size(); ++i) bcells.push_back(cell_json(d.boundary_cells[i], i + 1));
    j["cells"] = cells;
    j["boundary_cells"] = bcells;
    j["newton_support"] = polyhedron_json(d.newton_support);
    return j;
}

inline Json integer_json(const Integer& z) { return z.get_str(); }

inline Json bound_report_json(const BoundReport& r, const WBoundOracle& oracle) {
    Json j = header("bound_report");
    j["prime"] = r.prime;
    j["n"] = r.n;
    j["seed"] = std::to_string(r.seed);
    j["normalization"] = r.normalization;
    Json series = Json::array();
    for (std::size_t i = 0; i < r.ids.size(); ++i)
        series.push_back(Json{{"id", r.ids[i]}, {"d", r.d[i]}, {"E", r.E[i]}});
    j["series"] = series;
    Json orc = Json::array();
    for (const auto& [id, e] : oracle.entries()) orc.push_back(Json{{"id", id}, {"d", e.d}, {"provenance", e.provenance}});
    j["weierstrass_bounds"] = orc;
    Json iso;
    iso["E"] = r.isolated.E;
    iso["D1"] = integer_json(r.isolated.D1);
    iso["D2"] = integer_json(r.isolated.D2);
    j["isolated"] = iso;
    j["T1"] = integer_json(r.T1);
    j["T2"] = integer_json(r.T2);
    j["T"] = integer_json(r.T);
    Json tr;
    tr["pointed_before"] = r.transforms.pointed_before;
    tr["pointed_after"] = r.transforms.pointed_after;
    tr["s"] = r.transforms.s;
    tr["t"] = r.transforms.t;
    tr["factors"] = r.transforms.factors;
    tr["shifted"] = r.transforms.shifted;
    Json z = Json::array();
    for (const auto& x : r.transforms.z) z.push_back(integer_json(x));
    tr["z"] = z;
    tr["redraws"] = r.transforms.redraws;
    j["transforms"] = tr;
    Json comps = Json::array();
    for (const auto& c : r.components) {
        Json cj;
        cj["bounded"] = c.component.bounded();
        cj["anchor"] = vec_json(c.component.anchor());
        Json pieces = Json::array();
        for (const auto& p : c.component.pieces) pieces.push_back(polyhedron_json(p));
        cj["pieces"] = pieces;
        cj["multiplicity"] = integer_json(c.result.multiplicity);
        Json pts = Json::array();
        for (std::size_t i = 0; i < c.result.points.size(); ++i)
            pts.push_back(Json{{"point", vec_json(c.result.points[i])}, {"mixed_volume", integer_json(c.result.local[i])}});
        cj["points"] = pts;
        cj["shifts"] = c.result.shifts;
        cj["retries"] = c.result.retries;
        comps.push_back(cj);
    }
    j["components"] = comps;
    j["S"] = integer_json(r.S);
    return j;
}

inline Json term_json(const Term& t) { return t.str(); }

inline Json defining_system_json(const DefiningSystem& s) {
    Json j;
    j["configuration"] = s.configuration;
    j["multiplicities"] = s.multiplicities;
    j["unknowns"] = s.unknowns;
    j["parameters"] = s.parameters;
    Json eq = Json::array(), nz = Json::array(), m = Json::array(), rhs = Json::array();
    for (const auto& e : s.equations) eq.push_back(term_json(e));
    for (const auto& e : s.nonzero) nz.push_back(term_json(e));
    for (const auto& row : s.matrix) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(term_json(e));
        m.push_back(r);
    }
    for (const auto& e : s.rhs) rhs.push_back(term_json(e));
    j["equations"] = eq;
    j["nonzero"] = nz;
    j["matrix"] = m;
    j["matrix_unknowns"] = s.matrix_unknowns;
    j["rhs"] = rhs;
    j["row_kinds"] = s.row_kinds;
    return j;
}

}  // namespace troppadic::io
