#pragma once

#include <atomic>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "troppadic/param.hpp"
#include "troppadic/tropical.hpp"

namespace troppadic {

// Weierstrass bounds d(f): user-registered or verified from the stored
// coefficients of a parameterized series.
class WBoundOracle {
public:
    struct Entry {
        long d = 0;
        std::string provenance;  // "registered" | "computed"
    };

    void register_bound(const std::string& id, long d) {
        if (d < 0) throw InputError("negative Weierstrass bound");
        table_[id] = {d, "registered"};
    }
    std::optional<Entry> lookup(const std::string& id) const {
        auto it = table_.find(id);
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }
    const std::map<std::string, Entry>& entries() const { return table_; }

    // Registered value if present, else computed; throws OracleMissing.
    long d(const ParamSeries& f, const std::string& id) {
        if (auto e = lookup(id)) return e->d;
        long d = compute(f, id);
        table_[id] = {d, "computed"};
        return d;
    }

    // Smallest d that is verified after all smaller values are refuted.
    static long compute(const ParamSeries& f, const std::string& id = "") {
        const RestrictedSeries& j = f.joint();
        long limit = j.cutoff() + 1;
        for (long d = 0; d <= limit; ++d) {
            if (verify(f, d)) return d;
            if (!refute(f, d)) break;
        }
        throw OracleMissing("Weierstrass bound for " + (id.empty() ? std::string("series") : id) +
                            " is neither verified nor refuted; register it");
    }

    // For all |I| >= d: a_I = b * a_J with ||b|| < 1 for some |J| < d whose
    // a_J is p^e times a unit.
    static bool verify(const ParamSeries& f, long d) {
        const RestrictedSeries& j = f.joint();
        std::optional<Rational> emin;
        std::vector<RestrictedSeries> high;
        for (const auto& x : f.x_support()) {
            RestrictedSeries a = f.coefficient_series(x);
            if (degree(x) < d) {
                if (auto e = scaled_unit_valuation(a))
                    if (!emin || *e < *emin) emin = *e;
            } else if (!a.is_exact_zero()) {
                high.push_back(a);
            }
        }
        bool noise_high = !j.noise().is_infinite() && d <= j.cutoff();
        bool tail = !j.is_polynomial();
        if (high.empty() && !noise_high && !tail) return true;
        if (!emin) return false;
        ValuationQ e(*emin);
        for (const auto& a : high)
            if (!(a.gauss_lower_bound() > e)) return false;
        if (noise_high && !(j.noise() > e)) return false;
        if (tail) {
            if (j.tail().slope < 0) return false;
            if (!(j.tail().at(std::max(j.cutoff() + 1, d)) > e)) return false;
        }
        return true;
    }

    // Some sample y and |I| >= d with v(a_I(y)) <= min_{|J|<d} v(a_J(y)).
    static bool refute(const ParamSeries& f, long d) {
        int m = f.nparams();
        long p = f.prime();
        std::vector<std::vector<PadicScaled>> samples;
        samples.push_back(std::vector<PadicScaled>(m, PadicScaled::zero(p)));
        if (m > 0) {
            samples.push_back(std::vector<PadicScaled>(m, PadicScaled::from_long(p, 1)));
            for (int k = 0; k < m; ++k) {
                std::vector<PadicScaled> y(m, PadicScaled::zero(p));
                y[k] = PadicScaled::from_long(p, 1);
                samples.push_back(y);
            }
        }
        const RestrictedSeries& j = f.joint();
        for (const auto& y : samples) {
            RestrictedSeries g = f.specialize(y);
            ValuationQ low = ValuationQ::infinity();
            if (!j.noise().is_infinite()) low = j.noise();
            std::vector<std::pair<long, PadicScaled>> high;
            for (const auto& [x, c0] : g.terms()) {
                PadicScaled c = c0.capped(g.noise());
                if (degree(x) < d) low = vmin(low, c.valuation_lower_bound());
                else if (c.is_normal()) high.emplace_back(degree(x), c);
            }
            for (const auto& [deg, c] : high)
                if (c.valuation() <= low) return true;
        }
        return false;
    }

private:
    std::map<std::string, Entry> table_;
};

// D(f) = d(f) + 1; an identically zero f gets D = 1 and is flagged.
struct WeierstrassBound {
    long D = 1;
    long d = 0;
    bool zero_flag = false;
};

inline WeierstrassBound weierstrass_bound_1_to_n(const ParamSeries& f, WBoundOracle& oracle, const std::string& id) {
    if (f.joint().is_exact_zero()) return {1, 0, true};
    long d = oracle.d(f, id);
    return {d + 1, d, false};
}

// Order in Z_n of the image of X^I under X_i -> Z_i - Z_n^(d^(n-i)).
inline long monomial_substitution_order(const Exponent& e, long d, long p = 2) {
    int n = static_cast<int>(e.size());
    long budget = 0, pw = 1;
    for (int i = n - 1; i >= 0; --i) {
        budget += e[i] * pw;
        if (i > 0) pw *= d;
    }
    budget = std::max<long>(budget, degree(e));
    auto f = RestrictedSeries::polynomial_z(p, n, {{e, 1}});
    return regular_order(substitute_monomial(f, d, budget));
}

namespace detail {

inline std::string slice_id(const std::string& id, int k, long s) {
    return id + "[x" + std::to_string(k + 1) + "^" + std::to_string(s) + "]";
}

inline long box_e_prime(const ParamSeries& f, WBoundOracle& oracle, const std::string& id, long df) {
    long e = df;
    for (int k = 0; k < f.nvars(); ++k)
        for (long s = 0; s <= df; ++s) {
            ParamSeries sl = f.slice(k, s);
            if (sl.nvars() == 0 || sl.joint().is_exact_zero()) continue;
            e = std::max(e, oracle.d(sl, slice_id(id, k, s)));
        }
    return e;
}

}  // namespace detail

// E(f) with New(f_y) inside the box [0, E]^n for every parameter y.
inline long box_E(const ParamSeries& f, WBoundOracle& oracle, const std::string& id) {
    if (f.joint().is_exact_zero()) return 0;
    long df = oracle.d(f, id);
    if (f.nvars() <= 1) return df;
    long e = detail::box_e_prime(f, oracle, id, df);
    if (f.nvars() == 2) return e;
    for (int k = 0; k < f.nvars(); ++k)
        for (long s = 0; s <= df; ++s) {
            ParamSeries sl = f.slice(k, s);
            if (sl.joint().is_exact_zero()) continue;
            e = std::max(e, box_E(sl, oracle, detail::slice_id(id, k, s)));
        }
    return e;
}

// Bound on the number of codimension-one cells of a trop complex whose Newton
// support lies in [0, E]^n.
inline Integer codim_one_cell_bound(long e, int n) {
    if (n == 1) return Integer(e + 1);
    if (n == 2) {
        // Edges of a convex lattice polygon use distinct primitive directions
        // whose l1 norms sum to at most the l1 perimeter 4E.
        std::vector<long> norms;
        for (long s = 1; s <= 4 * e + 1; ++s)
            for (long a = -s; a <= s; ++a) {
                long b = s - std::abs(a);
                if (std::gcd(std::abs(a), b) == 1) norms.insert(norms.end(), b == 0 ? 1 : 2, s);
            }
        std::sort(norms.begin(), norms.end());
        long sum = 0, k = 0;
        for (long x : norms) {
            if (sum + x > 4 * e) break;
            sum += x;
            ++k;
        }
        return Integer(k);
    }
    return ipow(e + 1, n);
}

struct IsolatedBounds {
    long E = 0;
    Integer D1, D2;
    std::vector<Integer> d;
};

inline IsolatedBounds isolated_bounds(const std::vector<long>& boxes, int n) {
    IsolatedBounds b;
    for (long e : boxes) b.E = std::max(b.E, e);
    b.D2 = ipow(b.E, n);
    b.D1 = 1;
    for (long e : boxes) {
        b.d.push_back(codim_one_cell_bound(e, n));
        b.D1 *= b.d.back();
    }
    return b;
}

inline IsolatedBounds isolated_bounds(const std::vector<ParamSeries>& system, WBoundOracle& oracle,
                                      const std::vector<std::string>& ids) {
    std::vector<long> boxes;
    for (std::size_t i = 0; i < system.size(); ++i) boxes.push_back(box_E(system[i], oracle, ids[i]));
    return isolated_bounds(boxes, system.empty() ? 0 : system[0].nvars());
}

// Exponents of certified nonzero coefficients a_I(Y).
inline std::set<Exponent> certified_support(const ParamSeries& f) {
    std::set<Exponent> out;
    for (const auto& x : f.x_support()) {
        RestrictedSeries a = f.coefficient_series(x);
        if (exact_gauss_valuation(a)) out.insert(x);
    }
    return out;
}

inline bool pointed_check(const std::vector<ParamSeries>& system) {
    if (system.empty()) return false;
    int n = system[0].nvars();
    std::set<Exponent> common = certified_support(system[0]);
    for (std::size_t i = 1; i < system.size(); ++i) {
        std::set<Exponent> s = certified_support(system[i]), keep;
        std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::inserter(keep, keep.begin()));
        common = keep;
    }
    if (common.empty()) return false;
    std::vector<QVector> pts;
    for (const auto& e : common) pts.push_back(to_qvector(e));
    return convex_hull(n, pts).dim() == n;
}

struct PointedTranscript {
    bool pointed_before = false;
    bool pointed_after = false;
    long s = 0;
    long t = 0;
    std::vector<std::string> factors;  // "f2 *= (1 + p^s x1)"
    bool shifted = false;
    std::vector<Integer> z;            // x_i -> x_i - p^t z_i
    int redraws = 0;
};

namespace detail {

inline bool variable_occurs(const ParamSeries& f, int i) {
    if (!f.joint().is_polynomial()) return true;
    for (const auto& x : f.x_support())
        if (x[i] > 0) return true;
    return false;
}

inline ParamSeries multiply_unit_factor(const ParamSeries& f, int i, long s) {
    const RestrictedSeries& j = f.joint();
    long p = j.prime();
    Exponent e(j.nvars(), 0);
    RestrictedSeries u = RestrictedSeries::polynomial(p, j.nvars(), {{e, PadicScaled::from_long(p, 1)}});
    e[i] = 1;
    RestrictedSeries lin = RestrictedSeries::polynomial(p, j.nvars(), {{e, PadicScaled::from_integer(p, Integer(ipow(p, s)))}});
    RestrictedSeries factor = u + lin;
    factor.set_domain(j.domain());
    RestrictedSeries prod = j * factor;
    prod.set_domain(j.domain());
    return ParamSeries(prod, f.nparams());
}

}  // namespace detail

// Repairs a non-pointed system: unit factors for missing variables, then a
// shift x_i -> x_i - p^t z_i with seeded random units z_i.
inline std::vector<ParamSeries> make_pointed(std::vector<ParamSeries> system, long precision, std::mt19937_64& rng,
                                             PointedTranscript& tr) {
    tr = PointedTranscript{};
    tr.pointed_before = pointed_check(system);
    if (system.empty() || tr.pointed_before) {
        tr.pointed_after = tr.pointed_before;
        return system;
    }
    int n = system[0].nvars();
    long p = system[0].prime();
    Rational minr = 0;
    bool any = false;
    for (const auto& f : system)
        for (const auto& r : f.x_domain())
            if (r && (!any || *r < minr)) {
                minr = *r;
                any = true;
            }
    tr.s = std::max<long>(1, to_long(ceil_q(Rational(1) - minr)));
    tr.t = std::max<long>(1, precision);
    for (std::size_t j = 0; j < system.size(); ++j)
        for (int i = 0; i < n; ++i)
            if (!detail::variable_occurs(system[j], i)) {
                system[j] = detail::multiply_unit_factor(system[j], i, tr.s);
                tr.factors.push_back("f" + std::to_string(j + 1) + " *= (1 + " + std::to_string(p) + "^" +
                                     std::to_string(tr.s) + " x" + std::to_string(i + 1) + ")");
            }
    if (pointed_check(system)) {
        tr.pointed_after = true;
        return system;
    }
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<Integer> z;
        for (int i = 0; i < n; ++i) {
            long u;
            do u = static_cast<long>(rng() % static_cast<unsigned long>(p * p * p));
            while (u % p == 0);
            z.push_back(u);
        }
        std::vector<ParamSeries> out;
        for (const auto& f : system) {
            RestrictedSeries j = f.joint();
            for (int i = 0; i < n; ++i)
                j = substitute_shift(j, i, PadicScaled::from_integer(p, z[i] * Integer(ipow(p, tr.t))));
            out.emplace_back(j, f.nparams());
        }
        if (pointed_check(out)) {
            tr.shifted = true;
            tr.z = z;
            tr.redraws = attempt;
            tr.pointed_after = true;
            return out;
        }
    }
    tr.pointed_after = false;
    return system;
}

// Outcome of the generic displacement near one component.
struct MultiplicityResult {
    Integer multiplicity = 0;
    std::vector<QVector> points;             // transverse intersection points at eps = 0
    std::vector<Integer> local;              // MV at each point
    std::vector<std::vector<long>> shifts;   // v_i
    int retries = 0;
};

namespace detail {

struct Facet1 {
    const TropCell* cell;
    QVector edge;  // Newton edge vector
};

inline std::vector<Facet1> codim_one_cells(const TropicalData& d) {
    std::vector<Facet1> out;
    auto add = [&](const std::vector<TropCell>& cs) {
        for (const auto& c : cs)
            if (c.newton.dim() == 1) out.push_back({&c, c.newton.vertices()[1] - c.newton.vertices()[0]});
    };
    add(d.cells);
    add(d.boundary_cells);
    return out;
}

}  // namespace detail

// Sum over the points of (Trop(f_1) + eps v_1) ∩ ... ∩ (Trop(f_n) + eps v_n)
// near C (eps -> 0+) of MV of the dual Newton cells.
inline MultiplicityResult stable_multiplicity(const std::vector<TropicalData>& trops, const Component& comp,
                                             std::mt19937_64& rng, int max_retries = 32) {
    int n = static_cast<int>(trops.size());
    std::vector<std::vector<detail::Facet1>> lists;
    for (const auto& t : trops) lists.push_back(detail::codim_one_cells(t));
    // Candidate tuples: transverse Newton edges and a common point in C.
    struct Candidate {
        std::vector<const detail::Facet1*> cells;
        QVector point;
        QMatrix edges;
        Integer mv;
    };
    std::vector<Candidate> cands;
    std::vector<const detail::Facet1*> cur;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            QMatrix edges;
            QVector rhs;
            for (const auto* c : cur) {
                edges.push_back(c->edge);
                rhs.push_back(dot(c->edge, c->cell->witness));
            }
            Rational det = determinant(edges);
            if (det == 0) return;
            QVector nu = *solve(edges, rhs, n);
            for (const auto* c : cur)
                if (!c->cell->full.contains(nu)) return;
            if (!comp.contains(nu)) return;
            std::vector<QPolyhedron> segs;
            for (const auto* c : cur) segs.push_back(c->cell->newton);
            Rational mv = mixed_volume(segs, Normalization::Coefficient);
            cands.push_back({cur, nu, edges, Integer(mv)});
            return;
        }
        for (const auto& c : lists[i]) {
            cur.push_back(&c);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    MultiplicityResult res;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::vector<std::vector<long>> v(n, std::vector<long>(n));
        for (auto& row : v)
            for (auto& x : row) x = static_cast<long>(rng() % 65536) + 1;
        bool degenerate = false;
        MultiplicityResult r;
        r.shifts = v;
        r.retries = attempt;
        for (const auto& c : cands) {
            QVector rhs;
            std::vector<QVector> vi;
            for (int i = 0; i < n; ++i) {
                QVector x;
                for (long y : v[i]) x.push_back(Rational(y));
                vi.push_back(x);
                rhs.push_back(dot(c.edges[i], x));
            }
            QVector w = *solve(c.edges, rhs, n);
            bool inside = true;
            for (int i = 0; i < n && !degenerate; ++i) {
                QVector dir = w - vi[i];
                for (const auto& h : c.cells[i]->cell->full.facets()) {
                    if (dot(h.a, c.point) != h.b) continue;
                    Rational s = dot(h.a, dir);
                    if (s == 0) degenerate = true;
                    else if (s > 0) inside = false;
                }
            }
            if (degenerate) break;
            if (!inside) continue;
            r.points.push_back(c.point);
            r.local.push_back(c.mv);
            r.multiplicity += c.mv;
        }
        if (!degenerate) return r;
    }
    throw GenericityFailure("no generic displacement found after " + std::to_string(max_retries) + " retries");
}

struct ComponentReport {
    Component component;
    MultiplicityResult result;
};

struct BoundReport {
    long prime = 0;
    int n = 0;
    unsigned long long seed = 0;
    std::string normalization = "coefficient";
    std::vector<std::string> ids;
    std::vector<long> d;   // d(f_i)
    std::vector<long> E;   // E(f_i)
    IsolatedBounds isolated;
    Integer T1, T2, T;
    PointedTranscript transforms;
    std::vector<ComponentReport> components;
    Integer S;
};

struct BoundOptions {
    unsigned long long seed = 0;
    long precision = 12;
    int jobs = 1;
};

inline QPolyhedron common_domain(const std::vector<ParamSeries>& system) {
    int n = system[0].nvars();
    std::vector<DomainBound> r(n, std::nullopt);
    for (const auto& f : system) {
        auto d = f.x_domain();
        for (int i = 0; i < n; ++i)
            if (d[i] && (!r[i] || *d[i] > *r[i])) r[i] = d[i];
    }
    return domain_polyhedron(r);
}

// make_pointed -> boxes -> trop complexes -> components -> multiplicities.
inline BoundReport system_root_bound(const std::vector<ParamSeries>& input, WBoundOracle& oracle,
                                     const BoundOptions& opt, std::vector<std::string> ids = {}) {
    if (input.empty()) throw InputError("empty system");
    int n = input[0].nvars();
    if (static_cast<int>(input.size()) != n) throw InputError("a system needs as many series as variables");
    for (const auto& f : input)
        if (f.nvars() != n || f.prime() != input[0].prime()) throw InputError("series of the system disagree");
    if (ids.empty())
        for (int i = 0; i < n; ++i) ids.push_back("f" + std::to_string(i + 1));
    BoundReport rep;
    rep.prime = input[0].prime();
    rep.n = n;
    rep.seed = opt.seed;
    rep.ids = ids;
    std::mt19937_64 rng(opt.seed);
    std::vector<ParamSeries> system = make_pointed(input, opt.precision, rng, rep.transforms);
    for (int i = 0; i < n; ++i) {
        std::string id = rep.transforms.factors.empty() && !rep.transforms.shifted ? ids[i] : ids[i] + "'";
        rep.d.push_back(oracle.d(system[i], id));
        rep.E.push_back(box_E(system[i], oracle, id));
    }
    rep.isolated = isolated_bounds(rep.E, n);
    rep.T1 = rep.isolated.D1;
    rep.T2 = Integer(factorial(n)) * ipow(rep.isolated.E, n);
    rep.T = rep.T1 * rep.T2;
    std::vector<TropicalData> trops;
    for (const auto& f : system) trops.push_back(trop_complex(generic_series(f)));
    std::vector<Component> comps = connected_components(trops, common_domain(system));
    rep.components.resize(comps.size());
    std::vector<std::exception_ptr> errors(comps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < comps.size();) {
            try {
                std::seed_seq seq{static_cast<unsigned>(opt.seed & 0xffffffffu), static_cast<unsigned>(opt.seed >> 32),
                                  static_cast<unsigned>(k)};
                std::mt19937_64 local(seq);
                rep.components[k] = {comps[k], stable_multiplicity(trops, comps[k], local)};
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(comps.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    rep.S = 0;
    for (const auto& c : rep.components) rep.S += c.result.multiplicity;
    return rep;
}

}  // namespace troppadic
