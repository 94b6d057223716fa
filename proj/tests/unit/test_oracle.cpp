#include "reference.hpp"

#include "tailcert/error.hpp"
#include "tailcert/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tailcert;
using namespace tailcert::oracle;

namespace {

BigRational q(long a, long b) { return BigRational(a, b); }

const BigRational& exact_of(const Prob2& p) {
    EXPECT_TRUE(p.has_exact());
    return *p.exact();
}

}  // namespace

TEST(BinomTail, CertainEventAndAllHeads) {
    EXPECT_EQ(exact_of(binom_tail(10, q(1, 2), 0, Mode::exact)), BigRational(1));
    EXPECT_EQ(exact_of(binom_tail(10, q(1, 2), 10, Mode::exact)), q(1, 1024));
}

TEST(BinomTail, LargeDeviationInstanceFrozen) {
    // Numerator of Pr[Bin(64, 1/16) >= 32] over 16^64, from a Pascal-row sum.
    const BigInt num("84507547811582574744648441867577131014311894113080811811");
    const BigRational expected(num, BigInt(1) << 256);
    const auto p = binom_tail(64, q(1, 16), 32, Mode::exact);
    EXPECT_EQ(exact_of(p), expected);
    EXPECT_EQ(expected, ref::binom_tail_pascal(64, q(1, 16), 32));
    EXPECT_LE(exact_of(p), BigRational(1, 1) / BigRational(BigInt(1) << 32));
    EXPECT_NEAR(p.log2(), -70.21487457939742, 1e-9);
}

TEST(BinomTail, MatchesPascalAcrossParameters) {
    for (unsigned n : {1u, 5u, 17u, 40u}) {
        for (const auto& p : {q(1, 2), q(1, 3), q(1, 16), q(0, 1)}) {
            for (long t = 0; t <= static_cast<long>(n); ++t) {
                ASSERT_EQ(exact_of(binom_tail(n, p, t, Mode::exact)), ref::binom_tail_pascal(n, p, t))
                    << n << " " << t;
            }
        }
    }
}

TEST(BinomTail, FloatModeAgreesWithExact) {
    for (long t : {0L, 10L, 64L, 200L, 400L}) {
        const auto exact = binom_tail(400, q(1, 8), t, Mode::exact);
        const auto flt = binom_tail(400, q(1, 8), t, Mode::float_log);
        EXPECT_FALSE(flt.has_exact());
        EXPECT_NEAR(flt.log2(), exact.log2(), 1e-9 * std::max(1.0, std::abs(exact.log2()))) << t;
    }
}

TEST(BinomTail, Errors) {
    EXPECT_THROW(binom_tail(10, q(1, 2), 11, Mode::exact), RangeError);
    EXPECT_THROW(binom_tail(10, q(1, 2), -1, Mode::exact), RangeError);
    EXPECT_THROW(binom_tail(kExactSizeCap + 1, q(1, 2), 3, Mode::exact), CapacityError);
    EXPECT_NO_THROW(binom_tail(kExactSizeCap + 1, q(1, 2), 3, Mode::float_log));
}

TEST(BinomTail, LogPmfNormalizes) {
    for (std::uint64_t n : {1u, 64u, 1000u, 20000u}) {
        const auto pmf = binom_log2_pmf(n, 0.125);
        double m = -INFINITY;
        for (double x : pmf) m = std::max(m, x);
        double s = 0.0;
        for (double x : pmf) s += std::exp2(x - m);
        EXPECT_NEAR(m + std::log2(s), 0.0, 1e-9) << n;
    }
    const auto exact = binom_pmf_exact(50, q(3, 7));
    BigRational total = 0;
    for (const auto& x : exact) total += x;
    EXPECT_EQ(total, BigRational(1));
}

TEST(WalkTail, KnownValues) {
    EXPECT_EQ(exact_of(walk_tail(16, 0)), (1 + q(12870, 65536)) / 2);
    EXPECT_EQ(exact_of(walk_tail(16, 1)), q(26333, 65536));
    EXPECT_NEAR(walk_tail(16, 1).value(), 0.401810, 1e-6);
    EXPECT_EQ(exact_of(walk_tail(4, 4)), q(1, 16));
    EXPECT_THROW(walk_tail(4, 5), RangeError);
    EXPECT_THROW(walk_tail(4, -5), RangeError);
}

TEST(WalkTail, MatchesPathEnumeration) {
    for (unsigned n = 1; n <= 16; ++n) {
        for (long t = -static_cast<long>(n); t <= static_cast<long>(n); ++t) {
            ASSERT_EQ(exact_of(walk_tail(n, t)), ref::walk_tail_paths(n, t)) << n << " " << t;
        }
    }
}

TEST(WalkTail, SymmetryAgainstLowerTail) {
    for (unsigned n = 1; n <= 18; ++n) {
        for (long t = -static_cast<long>(n); t <= static_cast<long>(n); ++t) {
            ASSERT_EQ(exact_of(walk_tail(n, t)), ref::walk_lower_tail_paths(n, t)) << n << " " << t;
        }
    }
}

TEST(WalkTail, MonotoneInThreshold) {
    for (std::uint64_t n : {7u, 64u, 255u}) {
        BigRational prev = 2;
        for (long t = -static_cast<long>(n); t <= static_cast<long>(n); ++t) {
            const auto cur = exact_of(walk_tail(n, t));
            ASSERT_LE(cur, prev);
            prev = cur;
        }
    }
    double prev = 1.0;
    for (long t = 0; t <= 6000; t += 37) {
        const double cur = walk_tail(6000, t).log2();
        ASSERT_LE(cur, prev + 1e-12);
        prev = cur;
    }
}

TEST(WalkTail, ExactLog2Consistency) {
    for (long t : {0L, 16L, 64L, 256L}) {
        const auto p = walk_tail(256, t);
        EXPECT_NEAR(p.log2(), ref::log2_q(*p.exact()), 1e-9);
    }
}

TEST(PrefixMax, KnownValues) {
    for (auto method : {PrefixMaxMethod::dp, PrefixMaxMethod::reflection}) {
        EXPECT_EQ(exact_of(prefix_max_tail(2, 1, method)), q(1, 2));
        EXPECT_EQ(exact_of(prefix_max_tail(4, 2, method)), q(3, 8));
        EXPECT_EQ(exact_of(prefix_max_tail(1, 1, method)), q(1, 2));
        EXPECT_THROW(prefix_max_tail(4, 0, method), RangeError);
        EXPECT_THROW(prefix_max_tail(4, 5, method), RangeError);
    }
}

TEST(PrefixMax, MatchesPathEnumeration) {
    for (unsigned n = 1; n <= 14; ++n) {
        for (long m = 1; m <= static_cast<long>(n); ++m) {
            ASSERT_EQ(exact_of(prefix_max_tail(n, m, PrefixMaxMethod::dp)), ref::prefix_max_paths(n, m));
        }
    }
}

TEST(PrefixMax, DpEqualsReflectionUpTo64) {
    for (std::uint64_t n = 1; n <= 64; ++n) {
        for (std::int64_t m = 1; m <= static_cast<std::int64_t>(n); ++m) {
            ASSERT_EQ(exact_of(prefix_max_tail(n, m, PrefixMaxMethod::dp)),
                      exact_of(prefix_max_tail(n, m, PrefixMaxMethod::reflection)))
                << n << " " << m;
        }
    }
}

TEST(PrefixMax, DominatesEndpointWithinFactorTwo) {
    for (std::uint64_t n = 1; n <= 64; ++n) {
        BigRational prev = 2;
        for (std::int64_t m = 1; m <= static_cast<std::int64_t>(n); ++m) {
            const auto mx = exact_of(prefix_max_tail(n, m, PrefixMaxMethod::dp));
            const auto end = exact_of(walk_tail(n, m));
            ASSERT_GE(mx, end);
            ASSERT_LE(mx, 2 * end);
            ASSERT_LE(mx, prev);
            prev = mx;
        }
    }
}

TEST(PrefixMax, FloatModeAgrees) {
    for (std::int64_t m : {1, 30, 100, 300}) {
        const auto e = prefix_max_tail(300, m, PrefixMaxMethod::dp, Mode::exact);
        for (auto method : {PrefixMaxMethod::dp, PrefixMaxMethod::reflection}) {
            const auto f = prefix_max_tail(300, m, method, Mode::float_log);
            EXPECT_NEAR(f.log2(), e.log2(), 1e-9 * std::max(1.0, std::abs(e.log2())));
        }
    }
}

TEST(HittingTime, SquaresExactly) {
    EXPECT_EQ(hitting_time_mean_exact({1, std::nullopt}), BigRational(1));
    EXPECT_EQ(hitting_time_mean_exact({2, std::nullopt}), BigRational(4));
    EXPECT_EQ(hitting_time_mean_exact({8, std::nullopt}), BigRational(64));
    for (std::uint64_t r = 1; r <= 32; ++r) {
        ASSERT_EQ(hitting_time_mean_exact({r, std::nullopt}), BigRational(r * r));
    }
    EXPECT_DOUBLE_EQ(hitting_time_mean({5, std::nullopt}), 25.0);
}

TEST(HittingTime, AgreesWithSurvivalIteration) {
    for (unsigned r : {1u, 2u, 3u, 6u}) {
        EXPECT_NEAR(ref::hitting_mean_iterate(r), static_cast<double>(r * r), 1e-6);
    }
}

TEST(HittingTime, TruncatedHorizon) {
    EXPECT_EQ(hitting_time_mean_exact({1, 1}), BigRational(1));
    // min(t_2, 2) = 2 always.
    EXPECT_EQ(hitting_time_mean_exact({2, 2}), BigRational(2));
    // Pr[t_2 > 2] = 1/2, Pr[t_2 > 3] = 1/2: 1 + 1 + 1/2 + 1/2.
    EXPECT_EQ(hitting_time_mean_exact({2, 4}), BigRational(3));
    EXPECT_LT(hitting_time_mean_exact({8, 4096}), BigRational(64));
    EXPECT_NEAR(hitting_time_mean({8, 4096}), 64.0, 1e-6);
}

TEST(HittingTime, Errors) {
    EXPECT_THROW(hitting_time_mean_exact({0, std::nullopt}), DomainError);
    EXPECT_THROW(hitting_time_mean_exact({4, 3}), DomainError);
}

TEST(Compositions, Counts) {
    EXPECT_EQ(compositions_count(3, 3), BigInt(10));
    EXPECT_EQ(compositions_count(5, 1), BigInt(1));
    for (unsigned s = 0; s <= 8; ++s) {
        for (unsigned m = 1; m <= 8; ++m) {
            ASSERT_EQ(compositions_count(s, m), BigInt(ref::count_compositions(s, m))) << s << " " << m;
            ASSERT_EQ(enumerate_witnesses(s, m).size(), ref::count_compositions(s, m));
        }
    }
    for (unsigned n = 1; n <= 12; ++n) {
        EXPECT_LE(compositions_count(n, n), BigInt(1) << (2 * n));
    }
}

TEST(Witness, EncodeExamples) {
    EXPECT_EQ(witness_encode({{2, 0, 1}}), "001101");
    EXPECT_EQ(witness_encode({{0}}), "1");
    EXPECT_EQ(witness_decode("001101"), (WitnessSequence{{2, 0, 1}}));
    EXPECT_THROW(witness_decode("0010"), DomainError);
    EXPECT_THROW(witness_decode("01x1"), DomainError);
}

TEST(Witness, ExhaustiveRoundTrip) {
    for (unsigned s = 0; s <= 8; ++s) {
        for (unsigned m = 1; m <= 8; ++m) {
            for (const auto& w : enumerate_witnesses(s, m)) {
                ASSERT_EQ(w.total(), s);
                ASSERT_EQ(w.parts(), m);
                const auto bits = witness_encode(w);
                ASSERT_EQ(bits.size(), s + m);
                ASSERT_EQ(witness_decode(bits), w);
            }
        }
    }
}

TEST(GeometricSum, KnownValues) {
    const auto one = geometric_sum_tail(1, q(1, 8), 2, 64);
    EXPECT_EQ(exact_of(one.upper), q(1, 64));
    const auto two = geometric_sum_tail(2, q(1, 8), 2, 64);
    EXPECT_EQ(exact_of(two.upper), q(11, 256));
    EXPECT_LE(exact_of(two.lower), q(11, 256));
    for (unsigned n : {1u, 3u, 6u}) EXPECT_EQ(exact_of(geometric_sum_tail(n, q(1, 3), 0).upper), BigRational(1));
    EXPECT_THROW(geometric_sum_tail(2, q(1, 8), 5, 4), CapacityError);
    EXPECT_THROW(geometric_sum_tail(2, q(0, 1), 1), DomainError);
}

TEST(GeometricSum, UpperBracketMatchesEnumeration) {
    for (unsigned n = 1; n <= 4; ++n) {
        for (const auto& p : {q(1, 8), q(1, 16), q(1, 2)}) {
            for (long t = 0; t <= 2 * static_cast<long>(n); ++t) {
                const auto got = geometric_sum_tail(n, p, t);
                const auto want = ref::geometric_sum_tail_enum(n, p, t);
                ASSERT_EQ(exact_of(got.upper), want) << n << " " << t;
                ASSERT_LE(exact_of(got.lower), want);
            }
        }
    }
}

TEST(ExactTail, DispatchesOnLaw) {
    TailQuery fair{16, FairWalk{}, 1};
    EXPECT_EQ(exact_of(exact_tail(fair)), q(26333, 65536));
    TailQuery bern{64, Bernoulli{q(1, 16)}, 32};
    EXPECT_EQ(exact_of(exact_tail(bern)), ref::binom_tail_pascal(64, q(1, 16), 32));
    TailQuery heavy{10, Bernoulli{q(3, 4)}, 2};
    EXPECT_THROW(exact_tail(heavy), DomainError);
    EXPECT_EQ(default_mode(kExactSizeCap), Mode::exact);
    EXPECT_EQ(default_mode(kExactSizeCap + 1), Mode::float_log);
}
