#include "tailcert/bounds.hpp"

#include "tailcert/error.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace tailcert::bounds {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 14> kFamilyNames{{
    {Family::chebyshev_max, "chebyshev-max"},
    {Family::poor_fair, "poor-fair"},
    {Family::geo_sum, "geo-sum"},
    {Family::geo_sum_int, "geo-sum-int"},
    {Family::fair_upper, "fair-upper"},
    {Family::fair_lower, "fair-lower"},
    {Family::large_upper, "large-upper"},
    {Family::large_lower, "large-lower"},
    {Family::bennett_poor_high_v, "bennett-poor-high-v"},
    {Family::bennett_poor_low_v, "bennett-poor-low-v"},
    {Family::bennett_small, "bennett-small"},
    {Family::bennett_large, "bennett-large"},
    {Family::hoeffding_small, "hoeffding-small"},
    {Family::hoeffding_large, "hoeffding-large"},
}};

bool is_integral(double x) { return std::fabs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::fabs(x)); }

BigRational pow2_neg(std::uint64_t e) { return BigRational(BigInt(1), BigInt(1) << e); }

// Fills the derived fields from log2_raw and the constraint list.
BoundResult finish(BoundResult b) {
    b.vacuous = b.log2_raw >= 0.0;
    b.log2_bound = std::min(b.log2_raw, 0.0);
    if (b.exact_bound && *b.exact_bound > 1) b.exact_bound = BigRational(1);
    b.valid = b.violated.empty();
    return b;
}

BoundResult make(Family f, Direction d, double threshold, double log2_raw, std::string citation) {
    BoundResult b;
    b.family = f;
    b.direction = d;
    b.threshold = threshold;
    b.log2_raw = log2_raw;
    b.citation = std::move(citation);
    return b;
}

void require(BoundResult& b, bool ok, std::string name) {
    if (!ok) b.violated.push_back(std::move(name));
}

// Bernoulli upper bound at threshold r mu, shared by large_dev_bounds and query.
BoundResult large_upper(std::uint64_t n, double p, double mu, double r) {
    const double rmu = r * mu;
    BoundResult b = make(Family::large_upper, Direction::upper, rmu, rmu * std::log2(4.0 / r),
                         "Bernoulli large deviation: Pr[X >= r*mu] <= (4/r)^(r*mu)");
    b.r = r;
    require(b, p <= 0.5, "p<=1/2");
    require(b, r >= 2.0, "r>=2");
    require(b, rmu <= static_cast<double>(n) + 1e-9, "r*mu<=n");
    require(b, rmu >= 1.0 - 1e-9 && is_integral(rmu), "r*mu integer");
    if (rmu >= 1.0 - 1e-9 && is_integral(rmu)) {
        const auto groups = static_cast<std::uint64_t>(std::llround(rmu));
        require(b, n % groups == 0, "r*mu divides n");
        if (is_integral(r) && r > 0) {
            b.exact_bound = power(BigRational(4, static_cast<std::int64_t>(std::llround(r))),
                                static_cast<unsigned>(groups));
        }
    }
    return b;
}

}  // namespace

std::string_view to_string(Family f) noexcept {
    for (const auto& [fam, name] : kFamilyNames) {
        if (fam == f) return name;
    }
    return "unknown";
}

std::string_view to_string(Direction d) noexcept { return d == Direction::upper ? "upper" : "lower"; }

Family parse_family(std::string_view id) {
    for (const auto& [fam, name] : kFamilyNames) {
        if (name == id) return fam;
    }
    throw LookupError("unknown bound family '" + std::string(id) + "'");
}

Direction parse_direction(std::string_view id) {
    if (id == "upper") return Direction::upper;
    if (id == "lower") return Direction::lower;
    throw LookupError("unknown bound direction '" + std::string(id) + "'");
}

double BoundResult::value() const { return std::exp2(log2_bound); }

BoundResult chebyshev_max_bound(std::uint64_t n, double k) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    BoundResult b = make(Family::chebyshev_max, Direction::upper, k * sqrt_n, 1.0 - 2.0 * std::log2(k),
                         "prefix-max Chebyshev: Pr[max_j S_j >= k*sqrt(n)] <= 2/k^2");
    b.k = k;
    require(b, k >= 1.0, "k>=1");
    if (k >= 1.0 && is_integral(k)) {
        const auto kk = std::llround(k);
        b.exact_bound = BigRational(2, kk * kk);
    }
    return finish(std::move(b));
}

BoundResult poor_fair_bound(std::uint64_t n, std::int64_t k) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    BoundResult b = make(Family::poor_fair, Direction::upper, static_cast<double>(k) * sqrt_n,
                         -static_cast<double>(k) / 2.0, "poor man's bound, fair coins: Pr[S_n >= k*sqrt(n)] <= 2^(-k/2)");
    b.k = static_cast<double>(k);
    require(b, k % 2 == 0, "k even");
    require(b, k >= 2, "k>=2");
    require(b, static_cast<double>(k) <= sqrt_n + 1e-12, "k<=sqrt(n)");
    if (k >= 2 && k % 2 == 0) b.exact_bound = pow2_neg(static_cast<std::uint64_t>(k / 2));
    return finish(std::move(b));
}

BoundResult geo_sum_bound(std::uint64_t n, const BigRational& p, bool integer_variant) {
    if (!(p > 0 && p < 1)) throw DomainError("geometric parameter " + tailcert::to_string(p) + " outside (0, 1)");
    const double threshold = integer_variant ? static_cast<double>(n) : 2.0 * static_cast<double>(n);
    const BigRational four_p = 4 * p;
    BoundResult b = make(integer_variant ? Family::geo_sum_int : Family::geo_sum, Direction::upper, threshold,
                         static_cast<double>(n) * log2_of(four_p),
                         integer_variant ? "geometric sum, integer summands: Pr[Y >= n] <= (4p)^n"
                                         : "geometric sum: Pr[Y >= 2n] <= (4p)^n");
    require(b, four_p < 1, "4p<1");
    b.exact_bound = power(four_p, static_cast<unsigned>(n));
    return finish(std::move(b));
}

BoundResult fair_upper_bound(std::uint64_t n, std::int64_t k) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double kk = static_cast<double>(k);
    BoundResult b = make(Family::fair_upper, Direction::upper, 16.0 * kk * sqrt_n, -2.0 * kk * kk,
                         "fair coins, grouped: Pr[S_n >= 16k*sqrt(n)] <= 4^(-k^2)");
    b.k = kk;
    require(b, k >= 1, "k>=1");
    require(b, 16.0 * kk * sqrt_n <= static_cast<double>(n) + 1e-9, "16k*sqrt(n)<=n");
    if (k >= 1) b.exact_bound = pow2_neg(static_cast<std::uint64_t>(2 * k * k));
    return finish(std::move(b));
}

BoundResult fair_lower_bound(std::uint64_t n, std::int64_t k) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double kk = static_cast<double>(k);
    BoundResult b = make(Family::fair_lower, Direction::lower, kk * sqrt_n, -32.0 * kk * kk,
                         "fair coins, lower: Pr[S_n >= k*sqrt(n)] >= (1/4)^(16k^2)");
    b.k = kk;
    require(b, k >= 1, "k>=1");
    require(b, kk <= sqrt_n / 4.0 + 1e-12, "k<=sqrt(n)/4");
    if (k >= 1) b.exact_bound = pow2_neg(static_cast<std::uint64_t>(32 * k * k));
    return finish(std::move(b));
}

BoundPair large_dev_bounds(std::uint64_t n, const BigRational& p, double r) {
    if (p < 0 || p > 1) throw DomainError("probability " + tailcert::to_string(p) + " outside [0, 1]");
    const double pd = to_double(p);
    const double mu = pd * static_cast<double>(n);
    BoundResult upper = large_upper(n, pd, mu, r);

    const double rmu = r * mu;
    BoundResult lower = make(Family::large_lower, Direction::lower, rmu, -rmu * std::log2(std::exp(1.0) * r),
                             "Bernoulli large deviation, lower: Pr[X >= r*mu] >= (e*r)^(-r*mu)");
    lower.r = r;
    lower.violated = upper.violated;
    return {finish(std::move(upper)), finish(std::move(lower))};
}

BoundResult bennett_poor_bound(double v, std::int64_t k) {
    const double kk = static_cast<double>(k);
    if (v >= 1.0) {
        BoundResult b = make(Family::bennett_poor_high_v, Direction::upper, 4.0 * kk * std::sqrt(v), -2.0 * kk,
                             "adaptive poor man's bound, v >= 1: Pr[X >= 4k*sqrt(v)] <= 4^(-k)");
        b.k = kk;
        require(b, v > 0.0, "v>0");
        require(b, k >= 1, "k>=1");
        if (k >= 1) b.exact_bound = pow2_neg(static_cast<std::uint64_t>(2 * k));
        return finish(std::move(b));
    }
    BoundResult b = make(Family::bennett_poor_low_v, Direction::upper, kk, kk / 2.0 * std::log2(v),
                         "adaptive poor man's bound, v <= 1: Pr[X >= k] <= v^(k/2)");
    b.k = kk;
    require(b, v > 0.0, "v>0");
    require(b, k >= 1, "k>=1");
    return finish(std::move(b));
}

BoundResult bennett_small_bound(double v, double k) {
    BoundResult b = make(Family::bennett_small, Direction::upper, 33.0 * k * std::sqrt(v), -2.0 * k * k,
                         "adaptive Bennett, small deviations: Pr[X >= 33k*sqrt(v)] <= 4^(-k^2)");
    b.k = k;
    require(b, v >= 1.0, "v>=1");
    require(b, k >= 1.0, "k>=1");
    require(b, k <= std::sqrt(v) + 1e-12, "k<=sqrt(v)");
    if (k >= 1.0 && is_integral(k)) {
        const auto kk = static_cast<std::uint64_t>(std::llround(k));
        b.exact_bound = pow2_neg(2 * kk * kk);
    }
    return finish(std::move(b));
}

BoundResult bennett_large_bound(double v, double r) {
    const double rv = r * v;
    BoundResult b = make(Family::bennett_large, Direction::upper, 3.0 * rv, -(rv / 2.0) * std::log2(32.0 / r),
                         "adaptive Bennett, large deviations: Pr[X >= 3rv] <= (32/r)^(-rv/2)");
    b.r = r;
    require(b, v > 0.0, "v>0");
    require(b, r >= 1.0, "r>=1");
    require(b, rv >= 1.0 - 1e-9 && is_integral(rv), "r*v integer");
    require(b, r < 32.0, "r<32");
    if (is_integral(r) && r >= 1.0 && is_integral(rv / 2.0) && rv >= 2.0 - 1e-9) {
        b.exact_bound = power(BigRational(std::llround(r), 32), static_cast<unsigned>(std::llround(rv / 2.0)));
    }
    return finish(std::move(b));
}

BoundPair hoeffding_bounds(std::span<const BigRational> means, std::int64_t k, double r) {
    if (means.empty()) throw DomainError("hoeffding bounds need at least one mean");
    BigRational total = 0;
    for (const auto& m : means) {
        if (m < 0 || m > 1) throw DomainError("mean " + tailcert::to_string(m) + " outside [0, 1]");
        total += m;
    }
    if (total <= 0) throw DomainError("hoeffding bounds need a positive total mean");
    const double mu = to_double(total);

    // X - mu is a martingale with steps <= 1 and variance budget sum p_i (1 - p_i) <= mu.
    BoundResult small = bennett_small_bound(mu, static_cast<double>(k));
    small.family = Family::hoeffding_small;
    small.threshold = mu + small.threshold;
    small.citation = "independent [0,1] variables, small deviations: Pr[X >= mu + 33k*sqrt(mu)] <= 4^(-k^2)";

    BoundResult large = bennett_large_bound(mu, r);
    large.family = Family::hoeffding_large;
    large.threshold = mu + large.threshold;
    large.citation = "independent [0,1] variables, large deviations: Pr[X >= mu + 3r*mu] <= (32/r)^(-r*mu/2)";
    return {std::move(small), std::move(large)};
}

BoundResult query(double mu, std::uint64_t n, double t) {
    if (!(mu > 0.0)) throw DomainError("query needs a positive mean");
    if (!(t > mu)) throw DomainError("threshold must exceed the mean; no concentration statement at t <= mu");
    if (t <= 2.0 * mu) {
        const double sqrt_mu = std::sqrt(mu);
        const double k = (t - mu) / sqrt_mu;
        BoundResult b = bennett_small_bound(mu, k);
        b.family = Family::hoeffding_small;
        b.threshold = mu + b.threshold;
        b.citation = "small-deviation regime: Pr[X >= mu + 33k*sqrt(mu)] <= 4^(-k^2) with t = mu + k*sqrt(mu)";
        require(b, k * sqrt_mu <= static_cast<double>(n) + 1e-9, "k*sqrt(mu)<=n");
        return finish(std::move(b));
    }
    const double r = t / mu;
    BoundResult b = large_upper(n, mu / static_cast<double>(n), mu, r);
    b.citation = "large-deviation regime: Pr[X >= r*mu] <= (4/r)^(r*mu) with t = r*mu";
    return finish(std::move(b));
}

}  // namespace tailcert::bounds
