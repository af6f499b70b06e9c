// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "troppadic/bounds.hpp"
#include "troppadic/io.hpp"
#include "troppadic/weierstrass.hpp"

using namespace troppadic;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records the first failure; later checks only add to the count.
struct Check {
    Outcome out;
    int failures = 0;
    void expect(bool cond, const std::string& what) {
        if (cond) return;
        if (failures++ == 0) out.detail = what;
        out.ok = false;
    }
};

QVector qv(std::initializer_list<Rational> xs) { return QVector(xs); }

std::vector<DomainBound> whole_plane(int n) { return std::vector<DomainBound>(n, std::nullopt); }

long random_unit(std::mt19937_64& rng, long p, long range) {
    long u;
    do u = static_cast<long>(rng() % (2 * range + 1)) - range;
    while (u % p == 0);
    return u;
}

// 1. The tropical curve of 5x + x^5 + y^5 on R^2 and its dual Newton cells.
Outcome quintic() {
    Check c;
    auto f = RestrictedSeries::polynomial_z(5, 2, {{{1, 0}, 5}, {{5, 0}, 1}, {{0, 5}, 1}});
    f.set_domain(whole_plane(2));
    TropicalData d = trop_complex(f);
    c.expect(d.cells.size() == 4, "expected 4 cells, got " + std::to_string(d.cells.size()));
    if (d.cells.size() != 4) return c.out;
    QVector vtx = qv({Rational(1, 4), Rational(1, 4)});
    QVector rays[3] = {qv({0, 1}), qv({5, 1}), qv({-1, -1})};
    QPolyhedron newton[3] = {convex_hull(2, {qv({1, 0}), qv({5, 0})}), convex_hull(2, {qv({1, 0}), qv({0, 5})}),
                             convex_hull(2, {qv({5, 0}), qv({0, 5})})};
    for (int i = 0; i < 3; ++i) {
        const QPolyhedron& g = d.cells[i].cell;
        std::string lab = "gamma" + std::to_string(i + 1);
        c.expect(g.dim() == 1 && g.vertices() == std::vector<QVector>{vtx}, lab + " is not a ray from (1/4,1/4)");
        c.expect(g.rays().size() == 1 && g.lines().empty() && g.rays()[0] == rays[i], lab + " has the wrong direction");
        c.expect(d.cells[i].newton == newton[i], lab + " has the wrong dual cell");
    }
    c.expect(d.cells[3].cell.dim() == 0 && d.cells[3].witness == vtx, "gamma4 is not the vertex (1/4,1/4)");
    c.expect(d.cells[3].newton == convex_hull(2, {qv({1, 0}), qv({5, 0}), qv({0, 5})}), "gamma4 dual is not the triangle");
    c.expect(d.boundary_cells.empty(), "unexpected boundary cells");
    c.expect(duality_violations(d).empty(), "duality violated");
    return c.out;
}

// 2. Strassmann count of unit * prod (x - a_i) with coefficients known modulo p^20.
Outcome strassmann_planted() {
    Check c;
    const long p = 5, N = 20;
    std::mt19937_64 rng(2);
    Integer mod = Integer(ipow(p, N));
    for (int it = 0; it < 200; ++it) {
        int k = static_cast<int>(rng() % 7);
        // Unit of Z_p<x>: unit constant, v(u_j) >= j above it, tail on the same line.
        // The product keeps the cutoff J while each linear factor lowers the tail
        // offset by one, so J >= k keeps the tail certifiable.
        long J = k + static_cast<long>(rng() % 4);
        RestrictedSeries u(p, 1);
        u.set_tail({J, Rational(1), ValuationQ(Rational(1))});
        u.set_term({0}, PadicScaled::from_long(p, random_unit(rng, p, 1000)));
        for (long j = 1; j <= J; ++j) u.set_term({static_cast<int>(j)}, PadicScaled::from_integer(p, Integer(ipow(p, j)) * (static_cast<long>(rng() % 41) - 20)));
        if (it % 3 == 0) u = RestrictedSeries::constant(p, 1, u.coefficient({0}));
        RestrictedSeries f = u;
        for (int i = 0; i < k; ++i) {
            Integer a = Integer(static_cast<long>(rng() >> 1)) * Integer(static_cast<long>(rng() >> 1)) % mod;
            if (rng() % 4 == 0) a *= Integer(ipow(p, 1 + static_cast<long>(rng() % 3)));
            f = f * RestrictedSeries::polynomial(p, 1, {{{0}, PadicScaled::from_integer(p, -a)}, {{1}, PadicScaled::from_long(p, 1)}});
        }
        f.set_noise(ValuationQ(N));
        try {
            long got = strassmann_count(f);
            c.expect(got == k, "case " + std::to_string(it) + ": count " + std::to_string(got) + " != " + std::to_string(k));
        } catch (const Error& e) {
            c.expect(false, "case " + std::to_string(it) + ": " + e.what());
        }
    }
    return c.out;
}

RestrictedSeries random_poly(std::mt19937_64& rng, long p, int n, long deg, long range) {
    std::vector<std::pair<Exponent, long>> t;
    for_each_exponent(n, 0, deg, [&](const Exponent& e) { t.push_back({e, static_cast<long>(rng() % (2 * range + 1)) - range}); });
    return RestrictedSeries::polynomial_z(p, n, t);
}

// f regular of order d in the last variable.
RestrictedSeries random_regular(std::mt19937_64& rng, long p, int n, long d, long deg) {
    RestrictedSeries f = random_poly(rng, p, n, deg, 30), out(p, n);
    out.set_tail(f.tail());
    for (const auto& [e, cf] : f.terms()) {
        bool slice = true;
        for (int i = 0; i + 1 < n; ++i) slice = slice && e[i] == 0;
        PadicScaled v = cf;
        if (slice && e[n - 1] < d) v = PadicScaled::from_long(p, p) * cf;
        if (slice && e[n - 1] == d) v = PadicScaled::from_long(p, 1 + p * static_cast<long>(rng() % 5));
        out.set_term(e, v);
    }
    Exponent ed(n, 0);
    ed[n - 1] = static_cast<int>(d);
    if (out.terms().find(ed) == out.terms().end()) out.set_term(ed, PadicScaled::from_long(p, 1));
    return out;
}

// 3. Weierstrass division residues and reproducibility.
Outcome weierstrass_divisions() {
    Check c;
    std::mt19937_64 rng(3);
    const Budget b{12, 10};
    for (int it = 0; it < 100; ++it) {
        long p = std::vector<long>{2, 3, 5, 7}[it % 4];
        int n = 1 + it % 2;
        long d = 1 + static_cast<long>(rng() % 4);
        RestrictedSeries f = random_regular(rng, p, n, d, 4);
        RestrictedSeries g = random_poly(rng, p, n, 5, 50);
        std::string tag = "case " + std::to_string(it) + ": ";
        try {
            WeierstrassDivision w = weierstrass_divide(f, g, b);
            c.expect(w.order == d, tag + "wrong order");
            c.expect(weierstrass_residue(f, g, w, b.degree) >= ValuationQ(b.precision), tag + "residue below budget");
            WeierstrassDivision w2 = weierstrass_divide(f, g, b);
            bool same = io::series_json(w.Q) == io::series_json(w2.Q) && w.A.size() == w2.A.size();
            for (std::size_t j = 0; same && j < w.A.size(); ++j) same = io::series_json(w.A[j]) == io::series_json(w2.A[j]);
            c.expect(same, tag + "two runs disagree");
        } catch (const Error& e) {
            c.expect(false, tag + e.what());
        }
    }
    return c.out;
}

QPolyhedron random_polytope(std::mt19937_64& rng, int n, int count, long range) {
    for (;;) {
        std::vector<QVector> pts;
        for (int i = 0; i < count; ++i) {
            QVector v(n);
            for (int j = 0; j < n; ++j) v[j] = Rational(static_cast<long>(rng() % (2 * range + 1)) - range);
            pts.push_back(v);
        }
        QPolyhedron p = convex_hull(n, pts);
        if (p.dim() == n) return p;
    }
}

// 4. Mixed volumes: interpolation oracle, diagonal, monotonicity.
Outcome mixed_volumes() {
    Check c;
    std::mt19937_64 rng(4);
    for (int it = 0; it < 50; ++it) {
        int n = 1 + it % 3;
        std::vector<QPolyhedron> ps;
        for (int i = 0; i < n; ++i) ps.push_back(random_polytope(rng, n, n + 1 + static_cast<int>(rng() % 3), 3));
        std::string tag = "family " + std::to_string(it) + ": ";
        c.expect(mixed_volume(ps) == oracle::mv_by_interpolation(ps), tag + "differs from interpolation");
        std::vector<QPolyhedron> same(n, ps[0]);
        c.expect(mixed_volume(same) == Rational(factorial(n)) * volume(ps[0]), tag + "MV(P,...,P) != n! vol(P)");
    }
    for (int it = 0; it < 50; ++it) {
        int n = 2 + it % 2;
        std::vector<QPolyhedron> small, big;
        for (int i = 0; i < n; ++i) {
            QPolyhedron a = random_polytope(rng, n, 4, 3);
            std::vector<QVector> v = a.vertices();
            QPolyhedron extra = random_polytope(rng, n, 2 + n, 5);
            v.insert(v.end(), extra.vertices().begin(), extra.vertices().end());
            small.push_back(a);
            big.push_back(convex_hull(n, v));
        }
        c.expect(mixed_volume(small) <= mixed_volume(big), "nested pair " + std::to_string(it) + " not monotone");
    }
    return c.out;
}

// 5. Duality between tropical cells and Newton cells.
Outcome duality() {
    Check c;
    std::mt19937_64 rng(5);
    const long p = 3;
    for (int it = 0; it < 50; ++it) {
        std::map<Exponent, PadicScaled> t;
        // Tailed series keep a constant term so the tail is dominated on the quadrant.
        if (it % 3 == 1) t.emplace(Exponent{0, 0}, PadicScaled::from_long(p, random_unit(rng, p, 26)));
        int terms = 3 + it % 6;
        while (static_cast<int>(t.size()) < terms) {
            Exponent e{static_cast<int>(rng() % 6), static_cast<int>(rng() % 6)};
            Integer v = Integer(random_unit(rng, p, 26)) * Integer(ipow(p, static_cast<long>(rng() % 5)));
            t.emplace(e, PadicScaled::from_integer(p, v));
        }
        RestrictedSeries f = RestrictedSeries::polynomial(p, 2, {t.begin(), t.end()});
        if (it % 3 == 0) f.set_domain(whole_plane(2));
        if (it % 3 == 1) f.set_tail({10, 1, ValuationQ(Rational(5))});
        try {
            auto v = duality_violations(trop_complex(f));
            c.expect(v.empty(), "series " + std::to_string(it) + ": " + (v.empty() ? "" : v[0]));
        } catch (const Error& e) {
            c.expect(false, "series " + std::to_string(it) + ": " + e.what());
        }
    }
    return c.out;
}

ParamSeries whole(const RestrictedSeries& f) {
    RestrictedSeries g = f;
    g.set_domain(whole_plane(f.nvars()));
    return ParamSeries(g, 0);
}

std::vector<std::pair<Exponent, long>> random_sparse(std::mt19937_64& rng, long p, int extra, int maxdeg) {
    std::map<Exponent, long> t{{{0, 0}, random_unit(rng, p, 100)}, {{1, 0}, random_unit(rng, p, 100)}, {{0, 1}, random_unit(rng, p, 100)}};
    for (int i = 0; i < extra; ++i)
        t[{static_cast<int>(rng() % (maxdeg + 1)), static_cast<int>(rng() % (maxdeg + 1))}] = random_unit(rng, p, 100);
    return {t.begin(), t.end()};
}

oracle::Poly2 to_poly2(const std::vector<std::pair<Exponent, long>>& t) {
    oracle::Poly2 out;
    for (const auto& [e, cf] : t) out[{e[0], e[1]}] += cf;
    return out;
}

// 6. Soundness of the system bound against an exact torus root count.
Outcome system_soundness() {
    Check c;
    std::mt19937_64 rng(6);
    const long p = 5;
    int done = 0, equal = 0, attempts = 0;
    while (done < 30 && attempts++ < 300) {
        auto t1 = random_sparse(rng, p, 2, 2), t2 = random_sparse(rng, p, 2, 2);
        auto count = oracle::torus_root_count(to_poly2(t1), to_poly2(t2));
        if (!count) continue;
        WBoundOracle o;
        BoundReport r = system_root_bound({whole(RestrictedSeries::polynomial_z(p, 2, t1)), whole(RestrictedSeries::polynomial_z(p, 2, t2))},
                                          o, {.seed = 6});
        Integer sum = 0;
        for (const auto& comp : r.components) sum += comp.result.multiplicity;
        std::string tag = "system " + std::to_string(done) + ": ";
        c.expect(Integer(*count) <= sum, tag + "oracle " + std::to_string(*count) + " > sum of multiplicities");
        c.expect(sum <= r.S, tag + "sum of multiplicities > S");
        if (Integer(*count) == sum) ++equal;
        ++done;
    }
    c.expect(done == 30, "only " + std::to_string(done) + " systems had a finite oracle count");
    c.expect(equal >= 10, "only " + std::to_string(equal) + " equalities");
    if (c.out.ok) c.out.detail = std::to_string(equal) + "/30 equalities";
    return c.out;
}

// 7. Box bound on sampled parameters.
Outcome box_bound() {
    Check c;
    const long p = 5;
    ParamSeries f(RestrictedSeries::polynomial_z(
                      p, 3, {{{1, 0, 1}, 1}, {{0, 2, 0}, 1}, {{1, 1, 0}, 1}, {{1, 1, 1}, p}, {{3, 0, 0}, p}, {{0, 4, 1}, p * p}}),
                  1);
    WBoundOracle o;
    long e = box_E(f, o, "f");
    std::mt19937_64 rng(7);
    for (int it = 0; it < 100; ++it) {
        long y = static_cast<long>(rng() % 625);
        TropicalData d = trop_complex(f.specialize({PadicScaled::from_long(p, y)}));
        for (const auto& cell : d.cells)
            for (const auto& v : cell.newton.vertices())
                for (const auto& x : v) c.expect(x <= Rational(e), "y = " + std::to_string(y) + ": Newton cell leaves B(E)");
    }
    c.expect(isolated_bounds(std::vector<long>{e, e}, 2).D2 == Integer(e * e), "D2 != E^n for the fixture");
    c.expect(isolated_bounds(std::vector<long>{4}, 2).D2 == Integer(16), "D2 != 16 for E = 4, n = 2");
    if (c.out.ok) c.out.detail = "E = " + std::to_string(e);
    return c.out;
}

// 8. Regular order after the monomial substitution.
Outcome substitution_order() {
    Check c;
    std::mt19937_64 rng(8);
    for (int it = 0; it < 20; ++it) {
        int n = 1 + it % 3;
        long d = 2 + static_cast<long>(rng() % 3);
        Exponent e(n);
        for (auto& x : e) x = static_cast<int>(rng() % static_cast<unsigned long>(d));
        if (degree(e) == 0) e[n - 1] = 1;
        long want = 0, pw = 1;
        for (int i = n - 1; i >= 0; --i, pw *= d) want += e[i] * pw;
        c.expect(monomial_substitution_order(e, d) == want, "case " + std::to_string(it) + ": wrong order");
    }
    return c.out;
}

// 9. Reports are reproducible per seed; other seeds change only the transcript.
Outcome determinism() {
    Check c;
    const long p = 3;
    auto f = whole(RestrictedSeries::polynomial_z(p, 2, {{{0, 0}, 1}, {{1, 0}, 2}, {{0, 1}, 1}, {{2, 1}, 1}}));
    auto g = whole(RestrictedSeries::polynomial_z(p, 2, {{{0, 0}, 2}, {{1, 0}, 1}, {{0, 1}, 1}, {{1, 2}, 1}}));
    auto run = [&](unsigned long long seed, int jobs, BoundReport& r) {
        WBoundOracle o;
        r = system_root_bound({f, g}, o, {.seed = seed, .jobs = jobs});
        return io::dump(io::bound_report_json(r, o));
    };
    BoundReport a, b, x;
    std::string ja = run(17, 1, a), jb = run(17, 4, b), jx = run(18, 1, x);
    c.expect(ja == jb, "same seed gave different reports");
    c.expect(a.S == x.S, "S depends on the seed");
    c.expect(a.components.size() == x.components.size(), "component count depends on the seed");
    for (std::size_t i = 0; i < std::min(a.components.size(), x.components.size()); ++i)
        c.expect(a.components[i].result.multiplicity == x.components[i].result.multiplicity, "multiplicity depends on the seed");
    for (const BoundReport* r : {&a, &x}) {
        Integer sum = 0;
        for (const auto& comp : r->components) sum += comp.result.multiplicity;
        c.expect(sum <= r->S, "sum of multiplicities > S");
    }
    return c.out;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double limit;  // seconds, 0 = none
    };
    std::vector<Criterion> all = {
        {"tropical curve of 5x + x^5 + y^5 and dual cells", quintic, 1},
        {"strassmann count of 200 planted-root series", strassmann_planted, 10},
        {"100 weierstrass divisions: residue and reproducibility", weierstrass_divisions, 30},
        {"mixed volume: interpolation, diagonal, monotonicity", mixed_volumes, 0},
        {"duality on 50 random bivariate series", duality, 0},
        {"30 sparse systems: oracle <= sum i(C) <= S", system_soundness, 120},
        {"box bound on 100 parameter samples", box_bound, 0},
        {"20 monomial substitution orders", substitution_order, 0},
        {"seeded determinism of the bound report", determinism, 0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (argc > 1 && std::to_string(i + 1) != argv[1]) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (all[i].limit > 0 && secs > all[i].limit) {
            o.ok = false;
            o.detail = "took longer than " + std::to_string(static_cast<int>(all[i].limit)) + " s";
        }
        failed += !o.ok;
        std::printf("%s %zu %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, all[i].name, secs,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
