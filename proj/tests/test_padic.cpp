#include <gtest/gtest.h>

#include <random>

#include "troppadic/padic.hpp"

using namespace troppadic;

TEST(Padic, ValuationOfInteger) {
    EXPECT_EQ(valuation(PadicScaled::from_long(5, 50)), ValuationQ(2));
    EXPECT_TRUE(valuation(PadicScaled::zero(5)).is_infinite());
    EXPECT_EQ(valuation(PadicScaled::from_unit(5, 3, -1)), ValuationQ(-1));
}

TEST(Padic, AddCarriesAcrossUniformizer) {
    PadicScaled s = arith(PadicScaled::from_long(5, 2), PadicScaled::from_long(5, 3), ArithOp::Add);
    EXPECT_EQ(valuation(s), ValuationQ(1));
    EXPECT_EQ(s.unit(), Rational(1));
}

TEST(Padic, MulAddsValuations) {
    PadicScaled a = PadicScaled::from_unit(5, 3, 2, Rational(6));
    PadicScaled b = PadicScaled::from_unit(5, 7, 3, Rational(6));
    EXPECT_EQ(valuation(arith(a, b, ArithOp::Mul)), ValuationQ(5));
}

TEST(Padic, GeometricSeriesInverse) {
    PadicScaled one = PadicScaled::from_unit(5, 1, 0, Rational(4));
    PadicScaled d = PadicScaled::from_unit(5, -4, 0, Rational(4));
    PadicScaled q = arith(one, d, ArithOp::Div);
    // Oracle: 1/(1-5) = sum 5^k, truncated below 5^4.
    Integer oracle = 0;
    for (int k = 0; k < 4; ++k) oracle += ipow(5, k);
    EXPECT_EQ(q.unit(), Rational(oracle % 625));
    EXPECT_EQ(q.residue(4), Integer(156));
}

TEST(Padic, CancellationFailsLoudly) {
    PadicScaled a = PadicScaled::from_unit(5, 7, 0, Rational(2));
    PadicScaled b = PadicScaled::from_unit(5, 32, 0, Rational(2));
    EXPECT_THROW(arith(a, b, ArithOp::Sub), PrecisionExhausted);
    EXPECT_THROW(arith(a, PadicScaled::zero(5), ArithOp::Div), DivisionByZero);
}

TEST(Padic, PrecisionLossOnPartialCancellation) {
    PadicScaled a = PadicScaled::from_unit(5, 1, 0, Rational(4));
    PadicScaled b = PadicScaled::from_unit(5, 6, 0, Rational(4));
    PadicScaled d = arith(b, a, ArithOp::Sub);
    EXPECT_EQ(valuation(d), ValuationQ(1));
    EXPECT_EQ(*d.precision(), Rational(3));
}

TEST(Padic, RamifiedValuationsAbsorbHigherTerm) {
    PadicScaled a = PadicScaled::from_unit(5, 2, Rational(1, 2));
    PadicScaled b = PadicScaled::from_unit(5, 1, 1);
    PadicScaled s = a + b;
    EXPECT_EQ(valuation(s), ValuationQ(Rational(1, 2)));
    EXPECT_EQ(s.error_valuation(), ValuationQ(1));
}

TEST(Padic, RandomProperties) {
    std::mt19937_64 rng(7);
    for (long p : {2L, 3L, 5L, 7L}) {
        for (int it = 0; it < 200; ++it) {
            auto draw = [&] {
                long u = static_cast<long>(rng() % 100000) + 1;
                while (u % p == 0) ++u;
                long v = static_cast<long>(rng() % 7) - 3;
                long prec = static_cast<long>(rng() % 10) + 5;
                return PadicScaled::from_unit(p, u, v, Rational(prec));
            };
            PadicScaled x = draw(), y = draw();
            EXPECT_EQ(valuation(x * y), valuation(x) + valuation(y));
            PadicScaled s = x + y;
            if (!s.is_indeterminate()) {
                EXPECT_GE(valuation(s), vmin(valuation(x), valuation(y)));
                if (valuation(x) != valuation(y)) EXPECT_EQ(valuation(s), vmin(valuation(x), valuation(y)));
            }
            PadicScaled back = arith(arith(x, y, ArithOp::Div), y, ArithOp::Mul);
            EXPECT_EQ(valuation(back), valuation(x));
            EXPECT_TRUE(PadicScaled::agree_to(back, x, vmin(back.error_valuation(), x.error_valuation()).value()));
            PadicScaled coarse = x.capped(x.error_valuation().value() - 2);
            EXPECT_EQ(valuation(coarse), valuation(x));
        }
    }
}

TEST(Padic, ExactRationalRoundTrip) {
    PadicScaled a = PadicScaled::from_rational(3, Rational(5, 9));
    EXPECT_EQ(valuation(a), ValuationQ(-2));
    PadicScaled b = PadicScaled::from_rational(3, Rational(2, 7));
    PadicScaled q = (a / b) * b;
    EXPECT_EQ(q, a);
}
