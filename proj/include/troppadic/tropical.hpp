#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "troppadic/polyhedra.hpp"
#include "troppadic/series.hpp"

namespace troppadic {

// A term of a vert set: exponent and certified coefficient valuation.
struct VertTerm {
    Exponent exponent;
    Rational valuation;
    friend bool operator==(const VertTerm&, const VertTerm&) = default;
};

// Colexicographic order on exponents (last coordinate most significant).
struct ColexLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    }
};

struct TropCell {
    QVector witness;              // relative-interior point of `cell`
    std::vector<int> indices;     // positions in TropicalData::terms
    std::vector<VertTerm> vert;   // vert set at the witness
    QPolyhedron cell;             // gamma clipped to the domain
    QPolyhedron full;             // gamma before clipping
    QPolyhedron newton;           // dual Newton cell conv(vert exponents)
};

struct TropicalData {
    RestrictedSeries series;
    QPolyhedron domain;
    std::vector<VertTerm> terms;  // certified stored support, colex order
    std::vector<TropCell> cells;  // Trop(f) cells meeting the domain in full dimension
    std::vector<TropCell> boundary_cells;  // cells whose clipping loses dimension
    QPolyhedron newton_support;   // conv of the exponents used by some cell

    int ambient() const { return series.nvars(); }
    PolyComplex complex() const {
        PolyComplex c;
        c.ambient = ambient();
        for (const auto& x : cells) c.cells.push_back(x.cell);
        return c;
    }
    bool contains(const QVector& nu) const {
        for (const auto& x : cells)
            if (x.cell.contains(nu)) return true;
        for (const auto& x : boundary_cells)
            if (x.cell.contains(nu)) return true;
        return false;
    }
};

// Valuation domain {nu : nu_i >= r_i} as a polyhedron.
inline QPolyhedron domain_polyhedron(const std::vector<DomainBound>& r) {
    int n = static_cast<int>(r.size());
    std::vector<Halfspace> in;
    for (int i = 0; i < n; ++i) {
        if (!r[i]) continue;
        QVector a(n, Rational(0));
        a[i] = -1;
        in.push_back({a, -*r[i]});
    }
    return QPolyhedron::from_h(n, in);
}

namespace detail {

struct SplitSupport {
    std::vector<VertTerm> certified;
    std::vector<std::pair<Exponent, Rational>> uncertified;  // exponent, valuation lower bound
    std::set<Exponent> certified_set;
};

inline SplitSupport split_support(const RestrictedSeries& f) {
    SplitSupport s;
    for (const auto& [e, c0] : f.terms()) {
        PadicScaled c = c0.capped(f.noise());
        if (c.is_indeterminate()) s.uncertified.emplace_back(e, c.valuation_lower_bound().value());
        else if (!c.is_zero()) {
            s.certified.push_back({e, c.valuation().value()});
            s.certified_set.insert(e);
        }
    }
    std::sort(s.certified.begin(), s.certified.end(),
              [](const VertTerm& a, const VertTerm& b) { return ColexLess()(a.exponent, b.exponent); });
    return s;
}

inline Rational dot_e(const Exponent& e, const QVector& x) {
    Rational s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * x[i];
    return s;
}

// For every nu >= r, some certified J <= K beats the bound w at K strictly.
inline bool dominated(const SplitSupport& s, const Exponent& k, const Rational& w, const QVector& r) {
    Rational target = w + dot_e(k, r);
    for (const auto& t : s.certified)
        if (divides(t.exponent, k) && t.valuation + dot_e(t.exponent, r) < target) return true;
    return false;
}

inline QVector domain_vector(const RestrictedSeries& f) {
    QVector r;
    for (const auto& b : f.domain()) r.push_back(b ? *b : Rational(0));
    return r;
}

inline bool domain_unbounded(const RestrictedSeries& f) {
    return std::any_of(f.domain().begin(), f.domain().end(), [](const DomainBound& b) { return !b.has_value(); });
}

// Certifies that only certified stored terms can attain the minimum of
// v(a_I) + <I, nu> anywhere on the domain; returns those terms.
inline SplitSupport certify_support(const RestrictedSeries& f) {
    SplitSupport s = split_support(f);
    if (s.certified.empty()) {
        if (f.is_exact_zero()) throw ZeroSeries();
        throw PrecisionExhausted("no coefficient with certified valuation");
    }
    bool clean = s.uncertified.empty() && f.noise().is_infinite() && f.is_polynomial();
    if (clean) return s;
    if (domain_unbounded(f)) throw PrecisionExhausted("uncertified coefficients on an unbounded domain");
    QVector r = domain_vector(f);
    for (const auto& [k, w] : s.uncertified)
        if (!dominated(s, k, w, r))
            throw PrecisionExhausted("uncertified coefficient at " + to_string(to_qvector(k)) + " may reach the minimum at nu = " + to_string(r));
    if (!f.noise().is_infinite()) {
        Rational w = f.noise().value();
        for_each_exponent(f.nvars(), 0, f.cutoff(), [&](const Exponent& k) {
            if (s.certified_set.count(k)) return;
            if (!dominated(s, k, w, r))
                throw PrecisionExhausted("noise at " + to_string(to_qvector(k)) + " may reach the minimum at nu = " + to_string(r));
        });
    }
    if (!f.is_polynomial()) {
        Rational minr = *std::min_element(r.begin(), r.end());
        if (f.tail().slope + minr <= 0) throw PrecisionExhausted("tail slope does not dominate the domain at nu = " + to_string(r));
        long k1 = f.cutoff() + 1;
        Rational w = f.tail().at(k1).value();
        for_each_exponent(f.nvars(), k1, k1, [&](const Exponent& k) {
            if (!dominated(s, k, w, r))
                throw PrecisionExhausted("tail at degree " + std::to_string(k1) + " may reach the minimum at nu = " + to_string(r));
        });
    }
    return s;
}

inline void check_in_domain(const RestrictedSeries& f, const QVector& nu) {
    if (static_cast<int>(nu.size()) != f.nvars()) throw InputError("nu has the wrong dimension");
    for (int i = 0; i < f.nvars(); ++i)
        if (f.domain()[i] && nu[i] < *f.domain()[i]) throw DomainViolation("nu lies outside the domain");
}

}  // namespace detail

// Exact argmin set of v(a_I) + <I, nu>, with uncertified terms excluded.
inline std::vector<VertTerm> vert_nu(const RestrictedSeries& f, const QVector& nu) {
    detail::check_in_domain(f, nu);
    detail::SplitSupport s = detail::split_support(f);
    if (s.certified.empty()) {
        if (f.is_exact_zero()) throw ZeroSeries();
        throw PrecisionExhausted("no coefficient with certified valuation");
    }
    Rational m = s.certified[0].valuation + detail::dot_e(s.certified[0].exponent, nu);
    for (const auto& t : s.certified) m = std::min(m, Rational(t.valuation + detail::dot_e(t.exponent, nu)));
    for (const auto& [k, w] : s.uncertified)
        if (w + detail::dot_e(k, nu) <= m)
            throw PrecisionExhausted("uncertified coefficient at " + to_string(to_qvector(k)) + " may reach the minimum");
    if (!f.noise().is_infinite()) {
        Rational w = f.noise().value();
        for_each_exponent(f.nvars(), 0, f.cutoff(), [&](const Exponent& k) {
            if (!s.certified_set.count(k) && w + detail::dot_e(k, nu) <= m)
                throw PrecisionExhausted("noise at " + to_string(to_qvector(k)) + " may reach the minimum");
        });
    }
    if (!f.is_polynomial()) {
        Rational minnu = *std::min_element(nu.begin(), nu.end());
        Rational rate = f.tail().slope + minnu;
        if (rate <= 0 || rate * (f.cutoff() + 1) + f.tail().offset.value() <= m)
            throw PrecisionExhausted("tail may reach the minimum at nu = " + to_string(nu));
    }
    std::vector<VertTerm> out;
    for (const auto& t : s.certified)
        if (t.valuation + detail::dot_e(t.exponent, nu) == m) out.push_back(t);
    return out;
}

// Sum of the terms of f in vert_nu(f).
inline RestrictedSeries initial_form(const RestrictedSeries& f, const QVector& nu) {
    std::vector<std::pair<Exponent, PadicScaled>> t;
    for (const auto& v : vert_nu(f, nu)) t.emplace_back(v.exponent, f.terms().at(v.exponent).capped(f.noise()));
    return RestrictedSeries::polynomial(f.prime(), f.nvars(), t);
}

inline bool is_monomial(const RestrictedSeries& f) { return f.terms().size() == 1 && f.is_polynomial(); }

// Trop(f) over the series' domain via the lower hull of the lifted support.
inline TropicalData trop_complex(const RestrictedSeries& f) {
    int n = f.nvars();
    detail::SplitSupport s = detail::certify_support(f);
    TropicalData data;
    data.series = f;
    data.domain = domain_polyhedron(f.domain());
    data.terms = s.certified;
    std::vector<LiftedPoint> lifted;
    for (const auto& t : s.certified) lifted.push_back({to_qvector(t.exponent), t.valuation});
    std::vector<Halfspace> dom = data.domain.facets();
    std::vector<QVector> used;
    if (lifted.size() >= 2) {
        for (const auto& face : lower_hull_faces(lifted)) {
            if (face.dim == 0) continue;
            QPolyhedron full = lower_face_cell(lifted, face.indices, n);
            QPolyhedron clipped = lower_face_cell(lifted, face.indices, n, dom);
            if (clipped.is_empty()) continue;
            TropCell c;
            c.indices = face.indices;
            c.full = full;
            c.cell = clipped;
            c.witness = clipped.relative_interior_point();
            std::vector<QVector> pts;
            for (int i : face.indices) {
                c.vert.push_back(s.certified[i]);
                pts.push_back(lifted[i].point);
            }
            c.newton = convex_hull(n, pts);
            if (clipped.dim() == full.dim()) {
                used.insert(used.end(), pts.begin(), pts.end());
                data.cells.push_back(std::move(c));
            } else {
                data.boundary_cells.push_back(std::move(c));
            }
        }
    }
    auto order = [](const TropCell& a, const TropCell& b) {
        if (a.cell.dim() != b.cell.dim()) return a.cell.dim() > b.cell.dim();
        return a.indices < b.indices;
    };
    std::sort(data.cells.begin(), data.cells.end(), order);
    std::sort(data.boundary_cells.begin(), data.boundary_cells.end(), order);
    data.newton_support = used.empty() ? QPolyhedron::empty(n) : convex_hull(n, used);
    return data;
}

inline TropicalData trop_complex(RestrictedSeries f, const std::vector<DomainBound>& domain) {
    f.set_domain(domain);
    return trop_complex(f);
}

// f~ with v(a~_I) = v(a_I) - <I, t*v>, so Trop(f~) = Trop(f) + t*v.
inline RestrictedSeries shift_trop(const RestrictedSeries& f, const Rational& t, const std::vector<long>& v) {
    if (static_cast<int>(v.size()) != f.nvars()) throw InputError("direction has the wrong dimension");
    QVector tv;
    for (long x : v) tv.push_back(t * x);
    return substitute_scale(f, tv);
}

// Violations of the duality between trop cells and Newton cells.
inline std::vector<std::string> duality_violations(const TropicalData& d) {
    std::vector<std::string> out;
    int n = d.ambient();
    auto name = [](std::size_t i) { return "cell " + std::to_string(i + 1); };
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
        const auto& c = d.cells[i];
        if (c.cell.dim() + c.newton.dim() != n) out.push_back(name(i) + ": dimensions do not sum to n");
        QMatrix a = c.cell.direction_space(), b = c.newton.direction_space();
        for (const auto& x : a)
            for (const auto& y : b)
                if (dot(x, y) != 0) out.push_back(name(i) + ": affine spans are not orthogonal");
        if (!(vert_nu(d.series, c.witness) == c.vert)) out.push_back(name(i) + ": vert set mismatch at the witness");
    }
    for (std::size_t i = 0; i < d.cells.size(); ++i)
        for (std::size_t j = 0; j < d.cells.size(); ++j) {
            bool primal = is_face_of(d.cells[i].cell, d.cells[j].cell);
            bool dual = is_face_of(d.cells[j].newton, d.cells[i].newton);
            if (primal != dual) out.push_back(name(i) + ", " + name(j) + ": face containment does not reverse");
        }
    return out;
}

// A connected component of the intersection of several trop complexes.
struct Component {
    std::vector<QPolyhedron> pieces;
    bool bounded() const {
        return std::all_of(pieces.begin(), pieces.end(), [](const QPolyhedron& p) { return p.is_bounded(); });
    }
    bool contains(const QVector& x) const {
        return std::any_of(pieces.begin(), pieces.end(), [&](const QPolyhedron& p) { return p.contains(x); });
    }
    QVector anchor() const {
        QVector best = pieces.front().relative_interior_point();
        for (const auto& p : pieces) {
            QVector x = p.relative_interior_point();
            if (compare(x, best) < 0) best = x;
        }
        return best;
    }
};

namespace detail {

// Cells of the support not contained in another cell of the list.
inline std::vector<QPolyhedron> maximal_cells(const TropicalData& d) {
    std::vector<QPolyhedron> all;
    for (const auto& c : d.cells) all.push_back(c.cell);
    for (const auto& c : d.boundary_cells) all.push_back(c.cell);
    std::vector<QPolyhedron> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool inside = false;
        for (std::size_t j = 0; j < all.size() && !inside; ++j)
            if (j != i && all[j].contains(all[i]) && (all[j].dim() > all[i].dim() || (all[j] == all[i] && j < i)))
                inside = true;
        if (!inside) out.push_back(all[i]);
    }
    return out;
}

}  // namespace detail

// Connected components of the intersection of the supports inside P.
inline std::vector<Component> connected_components(const std::vector<TropicalData>& complexes, const QPolyhedron& p) {
    if (complexes.empty()) return {};
    std::vector<QPolyhedron> pieces;
    std::vector<std::vector<QPolyhedron>> lists;
    for (const auto& d : complexes) lists.push_back(detail::maximal_cells(d));
    std::function<void(std::size_t, const QPolyhedron&)> rec = [&](std::size_t i, const QPolyhedron& acc) {
        if (acc.is_empty()) return;
        if (i == lists.size()) {
            for (const auto& q : pieces)
                if (q == acc) return;
            pieces.push_back(acc);
            return;
        }
        for (const auto& c : lists[i]) rec(i + 1, intersect(acc, c));
    };
    rec(0, p);
    std::vector<int> parent(pieces.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            if (!intersect(pieces[i], pieces[j]).is_empty()) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    std::map<int, Component> groups;
    for (std::size_t i = 0; i < pieces.size(); ++i) groups[find(static_cast<int>(i))].pieces.push_back(pieces[i]);
    std::vector<Component> out;
    for (auto& [k, c] : groups) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const Component& a, const Component& b) {
        return compare(a.anchor(), b.anchor()) < 0;
    });
    return out;
}

}  // namespace troppadic
