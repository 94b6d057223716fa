#include "reference.hpp"

#include "tailcert/bounds.hpp"
#include "tailcert/error.hpp"
#include "tailcert/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace tailcert;
using namespace tailcert::bounds;

namespace {

BigRational q(long a, long b) { return BigRational(a, b); }

bool has_violation(const BoundResult& b, const std::string& name) {
    return std::find(b.violated.begin(), b.violated.end(), name) != b.violated.end();
}

void expect_well_formed(const BoundResult& b) {
    EXPECT_EQ(b.valid, b.violated.empty());
    if (b.valid) EXPECT_LE(b.log2_bound, 0.0);
    EXPECT_FALSE(b.citation.empty());
}

}  // namespace

TEST(Chebyshev, Examples) {
    const auto b = chebyshev_max_bound(64, 2);
    expect_well_formed(b);
    EXPECT_TRUE(b.valid);
    EXPECT_EQ(b.direction, Direction::upper);
    EXPECT_DOUBLE_EQ(b.threshold, 16.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -1.0);
    EXPECT_EQ(*oracle::prefix_max_tail(64, 16, oracle::PrefixMaxMethod::dp).exact() <= q(1, 2), true);

    const auto one = chebyshev_max_bound(100, 1);
    EXPECT_TRUE(one.valid);
    EXPECT_DOUBLE_EQ(one.log2_bound, 0.0);

    const auto bad = chebyshev_max_bound(64, 0.5);
    EXPECT_FALSE(bad.valid);
    EXPECT_TRUE(has_violation(bad, "k>=1"));
}

TEST(PoorFair, Examples) {
    const auto b = poor_fair_bound(64, 2);
    EXPECT_TRUE(b.valid);
    EXPECT_DOUBLE_EQ(b.threshold, 16.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -1.0);
    const auto b8 = poor_fair_bound(64, 8);
    EXPECT_DOUBLE_EQ(b8.threshold, 64.0);
    EXPECT_DOUBLE_EQ(b8.log2_bound, -4.0);
    EXPECT_LE(*oracle::walk_tail(64, 16).exact(), q(1, 2));
    EXPECT_FALSE(poor_fair_bound(64, 3).valid);
    EXPECT_FALSE(poor_fair_bound(64, 10).valid);
}

TEST(GeoSum, Examples) {
    const auto b = geo_sum_bound(3, q(1, 8), false);
    EXPECT_TRUE(b.valid);
    EXPECT_DOUBLE_EQ(b.threshold, 6.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -3.0);
    ASSERT_TRUE(b.exact_bound.has_value());
    EXPECT_EQ(*b.exact_bound, q(1, 8));

    const auto i = geo_sum_bound(2, q(1, 8), true);
    EXPECT_EQ(i.family, Family::geo_sum_int);
    EXPECT_DOUBLE_EQ(i.threshold, 2.0);
    EXPECT_DOUBLE_EQ(i.log2_bound, -2.0);
    EXPECT_LE(*oracle::geometric_sum_tail(2, q(1, 8), 2).upper.exact(), *i.exact_bound);

    const auto vac = geo_sum_bound(1, q(1, 4), false);
    EXPECT_TRUE(vac.vacuous);
    EXPECT_FALSE(vac.valid);
    EXPECT_DOUBLE_EQ(vac.log2_raw, 0.0);

    EXPECT_THROW(geo_sum_bound(2, q(0, 1), false), DomainError);
    EXPECT_THROW(geo_sum_bound(2, q(1, 1), false), DomainError);
}

TEST(FairUpper, Examples) {
    const auto b = fair_upper_bound(1024, 2);
    EXPECT_TRUE(b.valid);
    EXPECT_DOUBLE_EQ(b.threshold, 1024.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -8.0);
    const auto b1 = fair_upper_bound(256, 1);
    EXPECT_DOUBLE_EQ(b1.threshold, 256.0);
    EXPECT_DOUBLE_EQ(b1.log2_bound, -2.0);
    EXPECT_EQ(*oracle::walk_tail(256, 256).exact(), BigRational(1) / BigRational(BigInt(1) << 256));
    EXPECT_FALSE(fair_upper_bound(64, 4).valid);
}

TEST(FairLower, Examples) {
    const auto b = fair_lower_bound(256, 1);
    EXPECT_TRUE(b.valid);
    EXPECT_EQ(b.direction, Direction::lower);
    EXPECT_DOUBLE_EQ(b.threshold, 16.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -32.0);
    EXPECT_GE(oracle::walk_tail(256, 16).log2(), -32.0);
    EXPECT_GT(oracle::walk_tail(256, 16).value(), 0.15);
    EXPECT_TRUE(fair_lower_bound(16, 1).valid);
    EXPECT_FALSE(fair_lower_bound(16, 2).valid);
}

TEST(LargeDev, Examples) {
    const auto [up, lo] = large_dev_bounds(64, q(1, 16), 8);
    EXPECT_TRUE(up.valid);
    EXPECT_TRUE(lo.valid);
    EXPECT_DOUBLE_EQ(up.threshold, 32.0);
    EXPECT_DOUBLE_EQ(lo.threshold, 32.0);
    EXPECT_DOUBLE_EQ(up.log2_bound, -32.0);
    EXPECT_NEAR(lo.log2_bound, -32.0 * std::log2(8.0 * std::exp(1.0)), 1e-9);
    const auto truth = oracle::binom_tail(64, q(1, 16), 32, oracle::Mode::exact);
    EXPECT_LE(*truth.exact(), *up.exact_bound);
    EXPECT_GE(truth.log2(), lo.log2_bound);

    const auto [up2, lo2] = large_dev_bounds(16, q(1, 2), 3);
    EXPECT_FALSE(up2.valid);
    EXPECT_FALSE(lo2.valid);
}

TEST(BennettPoor, Examples) {
    const auto b = bennett_poor_bound(4, 3);
    EXPECT_EQ(b.family, Family::bennett_poor_high_v);
    EXPECT_DOUBLE_EQ(b.threshold, 24.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -6.0);
    const auto s = bennett_poor_bound(0.25, 2);
    EXPECT_EQ(s.family, Family::bennett_poor_low_v);
    EXPECT_DOUBLE_EQ(s.threshold, 2.0);
    EXPECT_DOUBLE_EQ(s.log2_bound, -2.0);
    const auto one = bennett_poor_bound(1, 1);
    EXPECT_EQ(one.family, Family::bennett_poor_high_v);
    EXPECT_DOUBLE_EQ(one.threshold, 4.0);
    EXPECT_DOUBLE_EQ(one.log2_bound, -2.0);
}

TEST(BennettSmall, Examples) {
    const auto b = bennett_small_bound(64, 2);
    EXPECT_TRUE(b.valid);
    EXPECT_DOUBLE_EQ(b.threshold, 528.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -8.0);
    EXPECT_TRUE(bennett_small_bound(4, 2).valid);
    EXPECT_FALSE(bennett_small_bound(4, 3).valid);
}

TEST(BennettLarge, Examples) {
    const auto b = bennett_large_bound(1, 8);
    EXPECT_TRUE(b.valid);
    EXPECT_DOUBLE_EQ(b.threshold, 24.0);
    EXPECT_DOUBLE_EQ(b.log2_bound, -8.0);
    const auto b2 = bennett_large_bound(2, 4);
    EXPECT_DOUBLE_EQ(b2.threshold, 24.0);
    EXPECT_DOUBLE_EQ(b2.log2_bound, -12.0);
    const auto vac = bennett_large_bound(1, 32);
    EXPECT_TRUE(vac.vacuous);
    EXPECT_FALSE(vac.valid);
    EXPECT_FALSE(bennett_large_bound(1, 2.5).valid);
}

TEST(Hoeffding, Examples) {
    std::vector<BigRational> halves(64, q(1, 2));
    const auto hp = hoeffding_bounds(halves, 2, 8);
    EXPECT_EQ(hp.upper.family, Family::hoeffding_small);
    EXPECT_NEAR(hp.upper.threshold, 32 + 66 * std::sqrt(32.0), 1e-9);
    EXPECT_DOUBLE_EQ(hp.upper.log2_bound, -8.0);

    std::vector<BigRational> sixteenths(64, q(1, 16));
    const auto hl = hoeffding_bounds(sixteenths, 1, 8);
    const auto ref_large = bennett_large_bound(4, 8);
    EXPECT_EQ(hl.lower.family, Family::hoeffding_large);
    EXPECT_DOUBLE_EQ(hl.lower.log2_bound, ref_large.log2_bound);
    EXPECT_DOUBLE_EQ(hl.lower.threshold, 4 + ref_large.threshold);

    std::vector<BigRational> zero{q(0, 1)};
    EXPECT_THROW(hoeffding_bounds(zero, 1, 2), DomainError);
    std::vector<BigRational> none;
    EXPECT_THROW(hoeffding_bounds(none, 1, 2), DomainError);
}

TEST(Query, RegimeSelection) {
    const auto small = query(100, 10000, 120);
    EXPECT_EQ(small.family, Family::hoeffding_small);
    ASSERT_TRUE(small.k.has_value());
    EXPECT_DOUBLE_EQ(*small.k, 2.0);
    const auto large = query(4, 64, 32);
    EXPECT_EQ(large.family, Family::large_upper);
    ASSERT_TRUE(large.r.has_value());
    EXPECT_DOUBLE_EQ(*large.r, 8.0);
    EXPECT_THROW(query(10, 100, 10), DomainError);
    EXPECT_THROW(query(10, 100, 5), DomainError);
}

TEST(Query, CrossoverContinuity) {
    for (double mu : {16.0, 64.0, 256.0}) {
        const double k = std::sqrt(mu);  // 2 mu = mu + k sqrt(mu)
        const auto small = bennett_small_bound(mu, k);
        const auto large = bennett_large_bound(mu, 1.0);
        const double ratio = std::abs(small.log2_raw) / std::abs(large.log2_raw);
        EXPECT_GE(ratio, 1.0 / 64) << mu;
        EXPECT_LE(ratio, 64.0) << mu;
    }
}

TEST(Properties, ValidResultsAreProbabilities) {
    std::vector<BoundResult> all;
    for (std::uint64_t n : {16u, 64u, 256u, 1024u}) {
        for (std::int64_t k = 1; k <= 12; ++k) {
            all.push_back(chebyshev_max_bound(n, static_cast<double>(k)));
            all.push_back(poor_fair_bound(n, k));
            all.push_back(fair_upper_bound(n, k));
            all.push_back(fair_lower_bound(n, k));
        }
    }
    for (double v : {0.25, 1.0, 4.0, 64.0}) {
        for (std::int64_t k = 1; k <= 8; ++k) {
            all.push_back(bennett_poor_bound(v, k));
            all.push_back(bennett_small_bound(v, static_cast<double>(k)));
            all.push_back(bennett_large_bound(v, static_cast<double>(k)));
        }
    }
    for (const auto& b : all) expect_well_formed(b);
}

TEST(Properties, MonotoneInDeviation) {
    for (std::uint64_t n : {64u, 1024u}) {
        double c = 1, p = 1, u = 1;
        for (std::int64_t k = 1; k <= 32; ++k) {
            const auto cb = chebyshev_max_bound(n, static_cast<double>(k));
            const auto pb = poor_fair_bound(n, k);
            const auto ub = fair_upper_bound(n, k);
            EXPECT_LE(cb.log2_raw, c);
            EXPECT_LE(pb.log2_raw, p);
            EXPECT_LE(ub.log2_raw, u);
            c = cb.log2_raw;
            p = pb.log2_raw;
            u = ub.log2_raw;
        }
    }
    for (double v : {1.0, 4.0, 64.0}) {
        double s = 1, pp = 1;
        for (double x = 1; x <= 16; x += 1) {
            const auto sb = bennett_small_bound(v, x);
            const auto pb = bennett_poor_bound(v, static_cast<std::int64_t>(x));
            EXPECT_LE(sb.log2_raw, s);
            EXPECT_LE(pb.log2_raw, pp);
            s = sb.log2_raw;
            pp = pb.log2_raw;
        }
        // (32/r)^{-rv/2} decreases only up to r = 32/e and climbs back to 1 at r = 32.
        double l = 1;
        for (double r = 1; r <= 11; r += 1) {
            const auto lb = bennett_large_bound(v, r);
            EXPECT_LE(lb.log2_raw, l);
            l = lb.log2_raw;
        }
        EXPECT_GT(bennett_large_bound(v, 16).log2_raw, bennett_large_bound(v, 12).log2_raw);
    }
    double prev = 1;
    for (double r = 2; r <= 16; r += 1) {
        const auto up = large_dev_bounds(1024, q(1, 16), r).upper;
        EXPECT_LE(up.log2_bound, prev);
        prev = up.log2_bound;
    }
}

TEST(Properties, SoundAgainstOracle) {
    for (std::uint64_t n : {16u, 64u, 256u}) {
        const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
        for (std::int64_t k = 1; k * root <= static_cast<std::int64_t>(n); ++k) {
            const auto c = chebyshev_max_bound(n, static_cast<double>(k));
            const auto m = static_cast<std::int64_t>(std::ceil(c.threshold));
            const auto truth = *oracle::prefix_max_tail(n, m, oracle::PrefixMaxMethod::dp).exact();
            EXPECT_LE(truth, BigRational(2, k * k));
            const auto p = poor_fair_bound(n, k);
            if (p.valid) {
                EXPECT_LE(oracle::walk_tail(n, static_cast<std::int64_t>(p.threshold)).log2(),
                          p.log2_bound + 1e-6);
            }
            const auto l = fair_lower_bound(n, k);
            if (l.valid) {
                EXPECT_GE(oracle::walk_tail(n, static_cast<std::int64_t>(l.threshold)).log2(),
                          l.log2_bound - 1e-6);
            }
        }
    }
    for (std::uint64_t n : {64u, 256u, 1024u}) {
        for (const auto& p : {q(1, 16), q(1, 8), q(1, 4), q(1, 2)}) {
            for (double r : {2.0, 3.0, 4.0, 8.0}) {
                const auto [up, lo] = large_dev_bounds(n, p, r);
                if (up.threshold > static_cast<double>(n)) continue;
                const auto t = static_cast<std::int64_t>(std::ceil(up.threshold));
                const auto truth = oracle::binom_tail(n, p, t, oracle::Mode::exact);
                if (up.valid) EXPECT_LE(truth.log2(), up.log2_bound + 1e-6);
                if (lo.valid) EXPECT_GE(truth.log2(), lo.log2_bound - 1e-6);
            }
        }
    }
}

TEST(Properties, FairSandwich) {
    for (std::uint64_t n : {256u, 1024u}) {
        const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
        for (std::int64_t k = 2; 4 * k <= root; ++k) {
            const double l2 = oracle::walk_tail(n, k * root).log2();
            EXPECT_GE(l2, -32.0 * static_cast<double>(k * k));
            EXPECT_LE(l2, -static_cast<double>(k * k) / 128.0);
        }
    }
}

TEST(Families, IdsRoundTrip) {
    for (int i = 0; i <= static_cast<int>(Family::hoeffding_large); ++i) {
        const auto f = static_cast<Family>(i);
        EXPECT_EQ(parse_family(to_string(f)), f);
    }
    EXPECT_EQ(parse_direction("lower"), Direction::lower);
    EXPECT_THROW(parse_family("nope"), LookupError);
}
