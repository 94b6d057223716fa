#include "tailcert/error.hpp"
#include "tailcert/prob2.hpp"
#include "tailcert/rational.hpp"
#include "tailcert/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace tailcert;

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parse_rational("3/6"), BigRational(1, 2));
    EXPECT_EQ(parse_rational("7"), BigRational(7));
    EXPECT_EQ(parse_rational("-2/4"), BigRational(-1, 2));
    EXPECT_EQ(to_string(BigRational(6, 4)), "3/2");
    EXPECT_EQ(to_string(BigRational(5)), "5");
    EXPECT_EQ(parse_fraction("1/16"), Fraction(1, 16));
    EXPECT_EQ(to_string(Fraction(3, 12)), "1/4");
    EXPECT_THROW(parse_rational("1/0"), DomainError);
    EXPECT_THROW(parse_rational("abc"), DomainError);
    EXPECT_THROW(parse_fraction(""), DomainError);
}

TEST(Rational, PowerAndLogs) {
    EXPECT_EQ(power(BigRational(1, 2), 10), BigRational(1, 1024));
    EXPECT_EQ(power(BigRational(3, 5), 0), BigRational(1));
    EXPECT_DOUBLE_EQ(log2_of(BigRational(1, 1024)), -10.0);
    const BigRational tiny = power(BigRational(1, 2), 5000);
    EXPECT_NEAR(log2_of(tiny), -5000.0, 1e-9);
    EXPECT_NEAR(log2_of(BigInt(1) << 3000), 3000.0, 1e-9);
    EXPECT_DOUBLE_EQ(to_double(Fraction(1, 4)), 0.25);
    EXPECT_EQ(to_big(Fraction(3, 8)), BigRational(3, 8));
    EXPECT_EQ(fraction_from_double(0.125), Fraction(1, 8));
}

TEST(Prob2, Construction) {
    const auto quarter = Prob2::from_exact(BigRational(1, 4));
    EXPECT_DOUBLE_EQ(quarter.log2(), -2.0);
    EXPECT_DOUBLE_EQ(quarter.value(), 0.25);
    EXPECT_TRUE(quarter.has_exact());
    EXPECT_TRUE(std::isinf(Prob2::zero().log2()));
    EXPECT_DOUBLE_EQ(Prob2::one().log2(), 0.0);
    EXPECT_THROW(Prob2::from_exact(BigRational(3, 2)), DomainError);
    EXPECT_THROW(Prob2::from_exact(BigRational(-1, 2)), DomainError);
    EXPECT_THROW(Prob2::from_log2(0.5), DomainError);
    EXPECT_DOUBLE_EQ(Prob2::from_log2(1e-12).log2(), 0.0);
    EXPECT_FALSE(Prob2::from_log2(-3).has_exact());
}

TEST(Prob2, ScientificSurvivesUnderflow) {
    EXPECT_EQ(scientific_from_log2(-1.0, 3), "5.00e-01");
    // 2^-5000 = 7.0798e-1506
    EXPECT_EQ(Prob2::from_log2(-5000).scientific(3), "7.08e-1506");
    EXPECT_EQ(Prob2::zero().scientific(), "0.00000e+00");
}

TEST(Philox, KnownAnswerVectors) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(CounterRng, StreamsArePureFunctions) {
    CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
        EXPECT_NE(x, d());
        seen.insert(x);
    }
    EXPECT_EQ(seen.size(), 100u);
}

TEST(CounterRng, UniformMoments) {
    CounterRng rng(1, 0);
    double sum = 0.0, sq = 0.0;
    constexpr int kN = 200000;
    for (int i = 0; i < kN; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / kN, 0.5, 0.005);
    EXPECT_NEAR(sq / kN, 1.0 / 3.0, 0.005);
}
