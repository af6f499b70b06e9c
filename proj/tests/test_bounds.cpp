#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "troppadic/bounds.hpp"

using namespace troppadic;

namespace {

// Joint series in (X..., Y...) with integer coefficients.
ParamSeries param(long p, int n, int m, const std::vector<std::pair<Exponent, long>>& terms) {
    return ParamSeries(RestrictedSeries::polynomial_z(p, n + m, terms), m);
}

ParamSeries whole(ParamSeries f) {
    RestrictedSeries j = f.joint();
    std::vector<DomainBound> d = j.domain();
    for (int i = 0; i < f.nvars(); ++i) d[i] = std::nullopt;
    j.set_domain(d);
    return ParamSeries(j, f.nparams());
}

// Fixture with parameters: Y X1 + X2^2 + (1 + pY) X1 X2 + p X1^3 + p^2 Y X2^4.
ParamSeries box_fixture(long p) {
    return param(p, 2, 1,
                 {{{1, 0, 1}, 1}, {{0, 2, 0}, 1}, {{1, 1, 0}, 1}, {{1, 1, 1}, p}, {{3, 0, 0}, p}, {{0, 4, 1}, p * p}});
}

oracle::Poly2 to_poly2(const std::vector<std::pair<Exponent, long>>& t) {
    oracle::Poly2 out;
    for (const auto& [e, c] : t) out[{e[0], e[1]}] += c;
    return out;
}

long random_unit(std::mt19937_64& rng, long p) {
    long u;
    do u = static_cast<long>(rng() % 201) - 100;
    while (u % p == 0);
    return u;
}

std::vector<std::pair<Exponent, long>> random_sparse(std::mt19937_64& rng, long p, int extra, int maxdeg) {
    std::map<Exponent, long> t{{{0, 0}, random_unit(rng, p)}, {{1, 0}, random_unit(rng, p)}, {{0, 1}, random_unit(rng, p)}};
    for (int i = 0; i < extra; ++i) t[{static_cast<int>(rng() % (maxdeg + 1)), static_cast<int>(rng() % (maxdeg + 1))}] = random_unit(rng, p);
    return {t.begin(), t.end()};
}

}  // namespace

TEST(Bounds, WeierstrassBoundExample) {
    ParamSeries f = param(5, 1, 1, {{{1, 1}, 1}, {{3, 0}, 1}});
    WBoundOracle o;
    EXPECT_FALSE(WBoundOracle::verify(f, 3));
    EXPECT_TRUE(WBoundOracle::refute(f, 3));
    EXPECT_TRUE(WBoundOracle::verify(f, 4));
    auto b = weierstrass_bound_1_to_n(f, o, "f");
    EXPECT_EQ(b.d, 4);
    EXPECT_EQ(b.D, 5);
    EXPECT_EQ(o.lookup("f")->provenance, "computed");
    EXPECT_EQ(box_E(f, o, "f"), 4);
    auto z = weierstrass_bound_1_to_n(ParamSeries(RestrictedSeries(5, 2), 1), o, "zero");
    EXPECT_TRUE(z.zero_flag);
    EXPECT_EQ(z.D, 1);
}

TEST(Bounds, RegisteredBoundsWin) {
    ParamSeries f = param(5, 1, 1, {{{1, 1}, 1}, {{3, 0}, 1}});
    WBoundOracle o;
    o.register_bound("f", 7);
    EXPECT_EQ(o.d(f, "f"), 7);
    EXPECT_EQ(o.lookup("f")->provenance, "registered");
}

TEST(Bounds, GenericDegreeWithVanishingSample) {
    // a_2 = Y vanishes at the zero sample but not at the unit sample.
    ParamSeries f = param(5, 1, 1, {{{0, 0}, 1}, {{1, 0}, 5}, {{2, 1}, 1}});
    EXPECT_EQ(WBoundOracle::compute(f), 3);
}

TEST(Bounds, SubstitutionOrder) {
    EXPECT_EQ(monomial_substitution_order({1, 2}, 3), 5);
    EXPECT_EQ(monomial_substitution_order({2, 1, 3}, 2), 3 + 1 * 2 + 2 * 4);
}

TEST(Bounds, ConstantCoefficientBox) {
    ParamSeries f = param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}, {{2, 1}, 1}});
    WBoundOracle o;
    long e = box_E(f, o, "f");
    EXPECT_GE(e, 3);
    TropicalData d = trop_complex(f.joint());
    for (const auto& c : d.cells)
        for (const auto& v : c.newton.vertices())
            for (const auto& x : v) EXPECT_LE(x, Rational(e));
}

TEST(Bounds, BoxBoundOnSampledParameters) {
    const long p = 5;
    ParamSeries f = box_fixture(p);
    WBoundOracle o;
    EXPECT_EQ(o.d(f, "f"), 3);
    long e = box_E(f, o, "f");
    EXPECT_GE(e, 3);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        long y = static_cast<long>(rng() % 625);
        RestrictedSeries g = f.specialize({PadicScaled::from_long(p, y)});
        TropicalData d = trop_complex(g);
        for (const auto& c : d.cells)
            for (const auto& v : c.newton.vertices())
                for (const auto& x : v) EXPECT_LE(x, Rational(e)) << "y = " << y;
    }
    auto b = isolated_bounds(std::vector<long>{e, 2}, 2);
    EXPECT_EQ(b.D2, Integer(e * e));
    EXPECT_EQ(isolated_bounds(std::vector<long>{4}, 2).D2, Integer(16));
}

TEST(Bounds, CellCountBounds) {
    EXPECT_EQ(codim_one_cell_bound(1, 2), Integer(4));
    EXPECT_EQ(codim_one_cell_bound(2, 2), Integer(6));
    EXPECT_EQ(codim_one_cell_bound(3, 1), Integer(4));
    EXPECT_EQ(codim_one_cell_bound(2, 3), Integer(27));
    EXPECT_EQ(isolated_bounds(std::vector<long>{1, 1}, 2).D1, Integer(16));
}

TEST(Bounds, Pointedness) {
    ParamSeries a = param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}});
    ParamSeries b = param(5, 2, 0, {{{0, 0}, 2}, {{1, 0}, 3}, {{0, 1}, 1}, {{2, 2}, 1}});
    EXPECT_TRUE(pointed_check({a, b}));
    ParamSeries c = param(5, 2, 0, {{{0, 0}, 1}, {{1, 1}, 1}});
    ParamSeries d = param(5, 2, 0, {{{0, 0}, 1}, {{1, 1}, 3}, {{2, 0}, 1}});
    EXPECT_FALSE(pointed_check({c, d}));
}

TEST(Bounds, MakePointedAddsMissingVariable) {
    ParamSeries f1 = param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 1}});
    ParamSeries f2 = param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 2}, {{0, 1}, 1}});
    std::mt19937_64 rng(1);
    PointedTranscript tr;
    auto out = make_pointed({f1, f2}, 12, rng, tr);
    EXPECT_FALSE(tr.pointed_before);
    EXPECT_TRUE(tr.pointed_after);
    ASSERT_EQ(tr.factors.size(), 1u);
    EXPECT_EQ(tr.factors[0], "f1 *= (1 + 5^1 x2)");
    EXPECT_FALSE(tr.shifted);
    EXPECT_TRUE(out[0].x_support().count({0, 1}));
}

TEST(Bounds, MakePointedShiftsWhenNeeded) {
    ParamSeries c = param(5, 2, 0, {{{0, 0}, 1}, {{1, 1}, 1}});
    ParamSeries d = param(5, 2, 0, {{{0, 0}, 1}, {{1, 1}, 3}, {{2, 0}, 1}});
    std::mt19937_64 rng(1);
    PointedTranscript tr;
    auto out = make_pointed({c, d}, 3, rng, tr);
    EXPECT_TRUE(tr.shifted);
    EXPECT_TRUE(tr.pointed_after);
    EXPECT_EQ(tr.t, 3);
    EXPECT_TRUE(pointed_check(out));
}

TEST(Bounds, StableMultiplicityOfLines) {
    auto l1 = whole(param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}}));
    auto l2 = whole(param(5, 2, 0, {{{0, 0}, 25}, {{1, 0}, 1}, {{0, 1}, 5}}));
    auto l3 = whole(param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 5}}));
    std::vector<TropicalData> t12{trop_complex(l1.joint()), trop_complex(l2.joint())};
    auto c12 = connected_components(t12, domain_polyhedron(l1.x_domain()));
    ASSERT_EQ(c12.size(), 1u);
    std::mt19937_64 rng(2);
    auto r = stable_multiplicity(t12, c12[0], rng);
    EXPECT_EQ(r.multiplicity, Integer(1));
    ASSERT_EQ(r.points.size(), 1u);
    EXPECT_EQ(r.points[0], (QVector{Rational(1), Rational(0)}));
    std::vector<TropicalData> t13{trop_complex(l1.joint()), trop_complex(l3.joint())};
    auto c13 = connected_components(t13, domain_polyhedron(l1.x_domain()));
    ASSERT_EQ(c13.size(), 1u);
    EXPECT_FALSE(c13[0].bounded());
    Integer m0 = -1;
    for (unsigned seed = 0; seed < 5; ++seed) {
        std::mt19937_64 g(seed);
        auto rr = stable_multiplicity(t13, c13[0], g);
        if (m0 < 0) m0 = rr.multiplicity;
        EXPECT_EQ(rr.multiplicity, m0);
    }
    EXPECT_EQ(m0, Integer(1));
}

TEST(Bounds, SystemBoundOfLinesAndQuintic) {
    auto l1 = whole(param(5, 2, 0, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}}));
    auto l2 = whole(param(5, 2, 0, {{{0, 0}, 25}, {{1, 0}, 1}, {{0, 1}, 5}}));
    WBoundOracle o;
    BoundReport r = system_root_bound({l1, l2}, o, {.seed = 9});
    EXPECT_EQ(r.S, Integer(1));
    EXPECT_TRUE(r.transforms.pointed_before);
    // 5x + x^5 + y^5 with a generic line.
    auto fig = whole(param(5, 2, 0, {{{1, 0}, 5}, {{5, 0}, 1}, {{0, 5}, 1}}));
    auto line = whole(param(5, 2, 0, {{{0, 0}, 3}, {{1, 0}, 7}, {{0, 1}, 2}}));
    WBoundOracle o2;
    BoundReport r2 = system_root_bound({fig, line}, o2, {.seed = 9});
    auto count = oracle::torus_root_count(to_poly2({{{1, 0}, 5}, {{5, 0}, 1}, {{0, 5}, 1}}),
                                          to_poly2({{{0, 0}, 3}, {{1, 0}, 7}, {{0, 1}, 2}}));
    ASSERT_TRUE(count);
    EXPECT_LE(Integer(*count), r2.S);
    EXPECT_LE(r2.S, r2.T * Integer(static_cast<long>(r2.components.size())));
}

TEST(Bounds, SeedChangesOnlyTranscript) {
    auto f = whole(param(3, 2, 0, {{{0, 0}, 1}, {{1, 0}, 2}, {{0, 1}, 1}, {{2, 1}, 1}}));
    auto g = whole(param(3, 2, 0, {{{0, 0}, 2}, {{1, 0}, 1}, {{0, 1}, 1}, {{1, 2}, 1}}));
    WBoundOracle o1, o2;
    BoundReport a = system_root_bound({f, g}, o1, {.seed = 1});
    BoundReport b = system_root_bound({f, g}, o2, {.seed = 2, .jobs = 4});
    EXPECT_EQ(a.S, b.S);
    ASSERT_EQ(a.components.size(), b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        EXPECT_EQ(a.components[i].result.multiplicity, b.components[i].result.multiplicity);
        EXPECT_NE(a.components[i].result.shifts, b.components[i].result.shifts);
    }
}

TEST(Bounds, BernsteinSoundnessSample) {
    std::mt19937_64 rng(11);
    const long p = 5;
    int done = 0, equal = 0;
    while (done < 10) {
        auto t1 = random_sparse(rng, p, 2, 2), t2 = random_sparse(rng, p, 2, 2);
        auto count = oracle::torus_root_count(to_poly2(t1), to_poly2(t2));
        if (!count) continue;
        auto f1 = whole(param(p, 2, 0, t1)), f2 = whole(param(p, 2, 0, t2));
        WBoundOracle o;
        BoundReport r = system_root_bound({f1, f2}, o, {.seed = 4});
        Integer sum = 0;
        for (const auto& c : r.components) sum += c.result.multiplicity;
        EXPECT_LE(Integer(*count), sum);
        EXPECT_LE(sum, r.S);
        std::vector<QVector> n1, n2;
        for (const auto& [e, c] : t1) n1.push_back(to_qvector(e));
        for (const auto& [e, c] : t2) n2.push_back(to_qvector(e));
        EXPECT_EQ(Rational(sum), mixed_volume({convex_hull(2, n1), convex_hull(2, n2)}));
        if (Integer(*count) == sum) ++equal;
        ++done;
    }
    EXPECT_GE(equal, 3);
}
