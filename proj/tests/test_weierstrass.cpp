#include <gtest/gtest.h>

#include <random>

#include "troppadic/weierstrass.hpp"

using namespace troppadic;

namespace {

PadicScaled z(long p, long v) { return PadicScaled::from_long(p, v); }

// Value of a budgeted coefficient as an integer residue modulo p^N.
Integer res(const RestrictedSeries& f, const Exponent& e, long N) { return f.coefficient(e).residue(N); }

RestrictedSeries random_poly(std::mt19937_64& rng, long p, int n, long deg, long range) {
    std::vector<std::pair<Exponent, long>> t;
    for_each_exponent(n, 0, deg, [&](const Exponent& e) {
        t.push_back({e, static_cast<long>(rng() % (2 * range + 1)) - range});
    });
    return RestrictedSeries::polynomial_z(p, n, t);
}

// Random f regular of order d in the last variable.
RestrictedSeries random_regular(std::mt19937_64& rng, long p, int n, long d, long deg) {
    RestrictedSeries f = random_poly(rng, p, n, deg, 30);
    RestrictedSeries out(p, n);
    TailBound t = f.tail();
    out.set_tail(t);
    for (const auto& [e, c] : f.terms()) {
        bool slice = true;
        for (int i = 0; i + 1 < n; ++i) slice = slice && e[i] == 0;
        PadicScaled v = c;
        if (slice && e[n - 1] < d) v = z(p, p) * c;
        if (slice && e[n - 1] == d) v = z(p, 1 + p * static_cast<long>(rng() % 5));
        out.set_term(e, v);
    }
    Exponent ed(n, 0);
    ed[n - 1] = static_cast<int>(d);
    if (out.terms().find(ed) == out.terms().end()) out.set_term(ed, z(p, 1));
    return out;
}

}  // namespace

TEST(Weierstrass, LongDivisionExample) {
    long p = 5;
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 1, {{{2}, 1}, {{0}, -p}});
    RestrictedSeries g = RestrictedSeries::polynomial_z(p, 1, {{{3}, 1}});
    Budget b{12, 10};
    WeierstrassDivision w = weierstrass_divide(f, g, b);
    ASSERT_EQ(w.order, 2);
    // Oracle: polynomial long division y^3 = y (y^2 - p) + p y.
    for (long k = 0; k < 10; ++k) EXPECT_EQ(res(w.Q, {static_cast<int>(k)}, 12), Integer(k == 1 ? 1 : 0));
    EXPECT_EQ(res(w.A[1], {}, 12), Integer(p));
    EXPECT_EQ(res(w.A[0], {}, 12), Integer(0));
}

TEST(Weierstrass, SelfDivision) {
    long p = 3;
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 2, {{{0, 2}, 1}, {{1, 0}, 3}, {{1, 1}, 1}, {{0, 0}, 3}});
    WeierstrassDivision w = weierstrass_divide(f, f, {10, 8});
    for_each_exponent(2, 0, 7, [&](const Exponent& e) {
        EXPECT_EQ(res(w.Q, e, 10), Integer(degree(e) == 0 ? 1 : 0));
    });
    for (const auto& a : w.A) EXPECT_TRUE(a.terms().empty());
}

TEST(Weierstrass, OrderOneInTwoVariables) {
    long p = 7;
    // f = Y - x, g = Y^2: Q = Y + x, A_0 = x^2.
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 2, {{{0, 1}, 1}, {{1, 0}, -1}});
    RestrictedSeries g = RestrictedSeries::polynomial_z(p, 2, {{{0, 2}, 1}});
    WeierstrassDivision w = weierstrass_divide(f, g, {8, 6});
    EXPECT_EQ(res(w.Q, {0, 1}, 8), Integer(1));
    EXPECT_EQ(res(w.Q, {1, 0}, 8), Integer(1));
    EXPECT_EQ(w.Q.terms().size(), 2u);
    EXPECT_EQ(res(w.A[0], {2}, 8), Integer(1));
    EXPECT_EQ(w.A[0].terms().size(), 1u);
}

TEST(Weierstrass, PrepareDistinguished) {
    long p = 5;
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 1, {{{2}, 1}, {{0}, -p}});
    WeierstrassPreparation w = weierstrass_prepare(f, {12, 10});
    EXPECT_EQ(res(w.A[0], {}, 12), residue_mod(Rational(-p), ipow(p, 12)));
    EXPECT_TRUE(w.A[1].terms().empty());
    EXPECT_EQ(res(w.U, {0}, 12), Integer(1));
    EXPECT_EQ(w.U.terms().size(), 1u);
}

TEST(Weierstrass, PrepareRecoversFactor) {
    long p = 5;
    // (1 + pY)(Y^2 - p)
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 1, {{{3}, p}, {{2}, 1}, {{1}, -p * p}, {{0}, -p}});
    WeierstrassPreparation w = weierstrass_prepare(f, {12, 10});
    EXPECT_EQ(res(w.A[0], {}, 12), residue_mod(Rational(-p), ipow(p, 12)));
    EXPECT_EQ(res(w.A[1], {}, 12), Integer(0));
    EXPECT_EQ(res(w.U, {0}, 12), Integer(1));
    EXPECT_EQ(res(w.U, {1}, 12), Integer(p));
    for (long k = 2; k < 10; ++k) EXPECT_EQ(res(w.U, {static_cast<int>(k)}, 12), Integer(0));
}

TEST(Weierstrass, PrepareAlreadyDistinguishedDegreeFive) {
    long p = 5;
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 1, {{{1}, p}, {{5}, 1}});
    WeierstrassPreparation w = weierstrass_prepare(f, {12, 10});
    EXPECT_EQ(w.order, 5);
    RestrictedSeries back = distinguished_polynomial(w, p, 1) * w.U;
    for (long k = 0; k < 10; ++k) EXPECT_EQ(res(back, {static_cast<int>(k)}, 12), res(f, {static_cast<int>(k)}, 12));
}

TEST(Weierstrass, NotRegularDivisor) {
    long p = 5;
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 1, {{{0}, p}, {{1}, p}});
    RestrictedSeries g = RestrictedSeries::polynomial_z(p, 1, {{{1}, 1}});
    EXPECT_THROW(weierstrass_divide(f, g, {6, 6}), NotRegular);
}

TEST(Weierstrass, RandomResidueAndUniqueness) {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 20; ++it) {
        long p = std::vector<long>{2, 3, 5, 7}[it % 4];
        int n = 1 + it % 3;
        long d = 1 + static_cast<long>(rng() % 4);
        RestrictedSeries f = random_regular(rng, p, n, d, 5);
        RestrictedSeries g = random_poly(rng, p, n, 6, 50);
        Budget b{8, 6};
        WeierstrassDivision w = weierstrass_divide(f, g, b);
        EXPECT_GE(weierstrass_residue(f, g, w, b.degree), ValuationQ(b.precision));
        WeierstrassDivision w2 = weierstrass_divide(f, g, {b.precision + 3, b.degree + 2});
        for_each_exponent(n, 0, b.degree - 1, [&](const Exponent& e) {
            EXPECT_EQ(res(w.Q, e, b.precision), res(w2.Q, e, b.precision));
        });
        WeierstrassPreparation pr = weierstrass_prepare(f, b);
        RestrictedSeries back = distinguished_polynomial(pr, p, n) * pr.U;
        for_each_exponent(n, 0, b.degree - 1, [&](const Exponent& e) {
            EXPECT_EQ(res(back, e, b.precision), res(f, e, b.precision));
        });
    }
}

TEST(Weierstrass, LargeModulusPath) {
    long p = 101;
    RestrictedSeries f = RestrictedSeries::polynomial_z(p, 1, {{{2}, 1}, {{0}, -p}});
    RestrictedSeries g = RestrictedSeries::polynomial_z(p, 1, {{{3}, 1}});
    WeierstrassDivision w = weierstrass_divide(f, g, {12, 6});
    EXPECT_EQ(res(w.A[1], {}, 12), Integer(p));
}
