#pragma once

// Closed-form tail bounds with explicit constants.
//
// Every function is total: parameters outside a bound's stated hypotheses do
// not throw, they produce a result with valid = false and the names of the
// violated constraints. Only parameters for which the closed form itself is
// undefined (p outside (0, 1), an empty list of means, t <= mu) throw.

#include "tailcert/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tailcert::bounds {

enum class Family {
    chebyshev_max,
    poor_fair,
    geo_sum,
    geo_sum_int,
    fair_upper,
    fair_lower,
    large_upper,
    large_lower,
    bennett_poor_high_v,
    bennett_poor_low_v,
    bennett_small,
    bennett_large,
    hoeffding_small,
    hoeffding_large,
};

enum class Direction { upper, lower };

std::string_view to_string(Family f) noexcept;
std::string_view to_string(Direction d) noexcept;
/// Accepts the dashed ids printed by to_string ("poor-fair", ...). Throws LookupError.
Family parse_family(std::string_view id);
Direction parse_direction(std::string_view id);

struct BoundResult {
    Family family = Family::chebyshev_max;
    Direction direction = Direction::upper;
    double threshold = 0.0;
    /// log2 of the certified bound, capped at 0 (a probability bound never exceeds 1).
    double log2_bound = 0.0;
    /// The closed form before capping; > 0 marks a vacuous instance.
    double log2_raw = 0.0;
    bool valid = true;
    bool vacuous = false;
    std::vector<std::string> violated;
    /// Plain-language statement of the inequality being evaluated.
    std::string citation;
    /// The bound as an exact rational when the closed form is rational at these parameters.
    std::optional<BigRational> exact_bound;
    /// Deviation parameters behind the threshold (filled where they apply).
    std::optional<double> k;
    std::optional<double> r;

    double value() const;
};

/// Pr[max_j S_j >= k sqrt(n)] <= 2 / k^2 for the fair walk.
BoundResult chebyshev_max_bound(std::uint64_t n, double k);

/// Pr[S_n >= k sqrt(n)] <= 2^{-k/2} for even k <= sqrt(n).
BoundResult poor_fair_bound(std::uint64_t n, std::int64_t k);

/// Pr[sum Y_i >= 2n] <= (4p)^n, or at threshold n when the Y_i are integers.
BoundResult geo_sum_bound(std::uint64_t n, const BigRational& p, bool integer_variant);

/// Pr[S_n >= 16 k sqrt(n)] <= 4^{-k^2}.
BoundResult fair_upper_bound(std::uint64_t n, std::int64_t k);

/// Pr[S_n >= k sqrt(n)] >= (1/4)^{16 k^2} for 1 <= k <= sqrt(n)/4.
BoundResult fair_lower_bound(std::uint64_t n, std::int64_t k);

struct BoundPair {
    BoundResult upper;
    BoundResult lower;
};

/// Bernoulli(p) sums at threshold r mu: upper (4/r)^{r mu}, lower (e r)^{-r mu}.
BoundPair large_dev_bounds(std::uint64_t n, const BigRational& p, double r);

/// Adaptive game with variance budget v: Pr[X >= 4k sqrt(v)] <= 4^{-k} when v >= 1,
/// Pr[X >= k] <= v^{k/2} when v < 1.
BoundResult bennett_poor_bound(double v, std::int64_t k);

/// Pr[X >= 33 k sqrt(v)] <= 4^{-k^2} for 1 <= k <= sqrt(v).
BoundResult bennett_small_bound(double v, double k);

/// Pr[X >= 3 r v] <= (32/r)^{-r v / 2} for integral r v.
BoundResult bennett_large_bound(double v, double r);

/// Independent [0, 1] variables with the given means, through the variance <= mean
/// reduction: thresholds mu + 33 k sqrt(mu) and mu + 3 r mu.
BoundPair hoeffding_bounds(std::span<const BigRational> means, std::int64_t k, double r);

/// Regime selector for a sum with mean mu over n variables at threshold t.
///
/// t <= 2 mu is the small-deviation regime with t = mu + k sqrt(mu); the
/// result is the hoeffding-small bound at that k. Beyond 2 mu it is the
/// large-deviation regime with t = r mu; the result is the large-upper bound
/// at that r. Throws DomainError for t <= mu.
BoundResult query(double mu, std::uint64_t n, double t);

}  // namespace tailcert::bounds
