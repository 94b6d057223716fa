#include "tailcert/error.hpp"
#include "tailcert/serialize.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tailcert;
using namespace tailcert::serialize;

TEST(Real, NonFiniteAsStrings) {
    EXPECT_EQ(real(-INFINITY), Json("-inf"));
    EXPECT_EQ(real(INFINITY), Json("inf"));
    EXPECT_TRUE(std::isinf(real_from(Json("-inf"))));
    EXPECT_DOUBLE_EQ(real_from(Json(0.25)), 0.25);
}

TEST(Prob2Json, RoundTrip) {
    for (const auto& p : {Prob2::from_exact(BigRational(11, 256)), Prob2::from_log2(-4000.5), Prob2::zero(),
                          Prob2::one()}) {
        const auto j = to_json(p);
        const auto back = prob_from_json(j);
        EXPECT_EQ(back.log2(), p.log2());
        EXPECT_EQ(back.exact(), p.exact());
        EXPECT_EQ(dump(to_json(back)), dump(j));
    }
    EXPECT_EQ(to_json(Prob2::from_exact(BigRational(1, 4)))["exact"], Json("1/4"));
}

TEST(BoundJson, RoundTrip) {
    for (const auto& b : {bounds::poor_fair_bound(64, 2), bounds::poor_fair_bound(64, 3),
                          bounds::geo_sum_bound(1, BigRational(1, 4), false), bounds::query(4, 64, 32),
                          bounds::large_dev_bounds(64, BigRational(1, 16), 8).lower}) {
        const auto j = to_json(b);
        const auto back = bound_from_json(j);
        EXPECT_EQ(back.family, b.family);
        EXPECT_EQ(back.valid, b.valid);
        EXPECT_EQ(back.violated, b.violated);
        EXPECT_EQ(dump(to_json(back)), dump(j));
    }
}

TEST(SimulationJson, RoundTrip) {
    const auto r = montecarlo::SimulationReport::from_counts("fair n=16", 400, 1000, 9);
    const auto j = to_json(r);
    const auto back = simulation_from_json(j);
    EXPECT_EQ(back.successes, 400u);
    EXPECT_EQ(back.seed, 9u);
    EXPECT_EQ(dump(to_json(back)), dump(j));
}

TEST(VerificationJson, RoundTrip) {
    const auto report = verify::run_suite(verify::Suite::geo, verify::Scale::quick, 3);
    const auto j = to_json(report);
    const auto back = verification_from_json(j);
    EXPECT_EQ(back.cases.size(), report.cases.size());
    EXPECT_EQ(dump(to_json(back)), dump(j));
    EXPECT_EQ(verify::to_csv(back), verify::to_csv(report));
    for (const auto& c : back.cases) EXPECT_EQ(c.pass, verify::recompute_pass(c));
}

TEST(Errors, MalformedInput) {
    EXPECT_THROW(prob_from_json(Json::object()), DomainError);
    EXPECT_THROW(bound_from_json(Json{{"family", "poor-fair"}}), Error);
    EXPECT_THROW(case_from_json(Json::array()), DomainError);
}
