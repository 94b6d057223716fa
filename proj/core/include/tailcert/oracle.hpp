#pragma once

// Exact ground truth for the fair ±1 walk, Bernoulli sums and sums of integer
// geometric variables, plus the combinatorics behind the witness-sequence
// counting argument and walk hitting times.
//
// Every tail is returned as a Prob2. In exact mode the rational value is
// computed with big integers (paths counted over 2^n, binomial terms over b^n)
// and the log2 field is derived from it; in float-log mode only log2 is filled.

#include "tailcert/prob2.hpp"
#include "tailcert/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tailcert::oracle {

enum class Mode { float_log, exact };

/// Largest n for which exact rational mode is offered.
inline constexpr std::uint64_t kExactSizeCap = 4096;

/// Exact when n fits under the cap, float-log otherwise.
Mode default_mode(std::uint64_t n) noexcept;

struct FairWalk {};
struct Bernoulli {
    BigRational p;
};
using StepLaw = std::variant<FairWalk, Bernoulli>;

/// Pr[sum of n steps >= threshold] for a fair ±1 walk or a Bernoulli(p) sum, p in [0, 1/2].
struct TailQuery {
    std::uint64_t n = 0;
    StepLaw law = FairWalk{};
    std::int64_t threshold = 0;

    /// Throws RangeError/DomainError when the invariants do not hold.
    void validate() const;
};

Prob2 exact_tail(const TailQuery& query, std::optional<Mode> mode = std::nullopt);

/// Pr[Bin(n, p) >= t].
Prob2 binom_tail(std::uint64_t n, const BigRational& p, std::int64_t t, Mode mode);

/// log2 Pr[Bin(n, p) = j] for j = 0..n, from lgamma.
std::vector<double> binom_log2_pmf(std::uint64_t n, double p);

/// Exact Pr[Bin(n, p) = j] for j = 0..n.
std::vector<BigRational> binom_pmf_exact(std::uint64_t n, const BigRational& p);

/// Pr[S_n >= t] for the fair ±1 walk; t is rounded up to the reachable parity.
Prob2 walk_tail(std::uint64_t n, std::int64_t t, std::optional<Mode> mode = std::nullopt);

enum class PrefixMaxMethod { dp, reflection };

/// Pr[max_{j<=n} S_j >= m] for the fair walk.
///
/// The dp method absorbs paths at the barrier m and advances a (step, sum)
/// table; reflection uses 2 Pr[S_n >= m] - Pr[S_n = m]. Both agree exactly.
Prob2 prefix_max_tail(std::uint64_t n, std::int64_t m, PrefixMaxMethod method,
                      std::optional<Mode> mode = std::nullopt);

struct HittingQuery {
    std::uint64_t r = 1;
    std::optional<std::uint64_t> horizon;

    void validate() const;
};

/// E[t_r] (or E[min(t_r, horizon)]) for the first time the fair walk reaches ±r.
///
/// Without a horizon the value comes from solving the first-step equations
/// E[x] = 1 + (E[x-1] + E[x+1]) / 2 on x in (-r, r) in exact arithmetic.
/// With a horizon it sums Pr[t_r > s] over s < horizon.
BigRational hitting_time_mean_exact(const HittingQuery& query);
double hitting_time_mean(const HittingQuery& query);

/// Number of witness sequences with the given total over `parts` parts: C(total + parts - 1, parts - 1).
BigInt compositions_count(std::uint64_t total, std::uint64_t parts);

struct WitnessSequence {
    std::vector<std::uint64_t> q;

    std::size_t parts() const noexcept { return q.size(); }
    std::uint64_t total() const noexcept;

    friend bool operator==(const WitnessSequence&, const WitnessSequence&) = default;
};

/// q_1 zeros then a one, q_2 zeros then a one, ... (length total + parts).
std::string witness_encode(const WitnessSequence& w);

/// Inverse of witness_encode. Throws DomainError if the string is not an encoding.
WitnessSequence witness_decode(std::string_view bits);

/// Every witness sequence with `parts` parts summing to `total`, in lexicographic order.
std::vector<WitnessSequence> enumerate_witnesses(std::uint64_t total, std::uint64_t parts);

/// Brackets on Pr[Y_1 + ... + Y_n >= t] for i.i.d. integer geometrics with Pr[Y >= j] = p^j.
///
/// Each variable is convolved on {0, ..., tail_cap - 1}; configurations in which
/// some variable reaches tail_cap are dropped from the lower bracket and added
/// whole to the upper one. Because tail_cap >= t such configurations always
/// satisfy the event, so the upper bracket is the exact tail.
ProbInterval geometric_sum_tail(std::uint64_t n, const BigRational& p, std::int64_t t,
                                std::optional<std::int64_t> tail_cap = std::nullopt);

}  // namespace tailcert::oracle
