#pragma once

// Seeded Monte Carlo estimation.
//
// Trials are grouped into fixed blocks of kBlockSize; trial i always draws from
// CounterRng(seed, i) and block results are merged in block order. Reports are
// therefore bit-identical for a given (seed, parameters) whatever the number
// of worker threads.

#include "tailcert/adversary.hpp"
#include "tailcert/oracle.hpp"
#include "tailcert/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace tailcert::montecarlo {

inline constexpr double kDefaultLevel = 0.99;
inline constexpr std::uint64_t kBlockSize = 4096;

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Exact two-sided binomial interval at the given confidence level.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level = kDefaultLevel);

/// z such that a standard normal lies in [-z, z] with probability `level`.
double normal_quantile(double level);

struct SimulationReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::string ci_method = "clopper-pearson";
    double ci_level = kDefaultLevel;
    std::uint64_t seed = 0;
    std::string subject;

    static SimulationReport from_counts(std::string subject, std::uint64_t successes, std::uint64_t trials,
                                        std::uint64_t seed, double level = kDefaultLevel);
};

struct IidSubject {
    std::uint64_t n = 0;
    oracle::StepLaw law = oracle::FairWalk{};
};

struct GameSubject {
    std::string strategy_id;
    adversary::GameConfig config;  // n == 0 means the strategy's natural length
};

using Subject = std::variant<IidSubject, GameSubject>;

std::string describe(const Subject& subject, double threshold);

/// Pr[X >= threshold] for an i.i.d. sum or the final sum of a strategy's game.
SimulationReport estimate_tail(const Subject& subject, double threshold, std::uint64_t trials, std::uint64_t seed,
                               double level = kDefaultLevel);

/// Pr[max_j S_j >= m] for the fair walk.
SimulationReport estimate_prefix_max_tail(std::uint64_t n, std::int64_t m, std::uint64_t trials, std::uint64_t seed,
                                          double level = kDefaultLevel);

struct MeanEstimate {
    std::uint64_t count = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    bool covers(double value) const noexcept { return ci_low <= value && value <= ci_high; }
};

struct HittingEstimate {
    std::uint64_t r = 0;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
    double level = kDefaultLevel;
    MeanEstimate time;            // mean of min(t_r, horizon), normal-approximation CI
    double truncated_fraction = 0.0;
};

HittingEstimate estimate_hitting_time(std::uint64_t r, std::uint64_t horizon, std::uint64_t trials,
                                      std::uint64_t seed, double level = kDefaultLevel);

/// Statistics of many plays of one strategy, gathered in a single pass.
struct GameSummary {
    std::string strategy_id;
    adversary::GameConfig config;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double level = kDefaultLevel;

    std::vector<double> thresholds;
    std::vector<std::uint64_t> final_counts;  // #{X >= thresholds[i]}
    std::vector<std::uint64_t> max_counts;    // #{y_max >= thresholds[i]}

    MeanEstimate final_sum;            // E[X]
    MeanEstimate square_minus_spent;   // E[X^2 - sum v_i]
    MeanEstimate final_square;         // E[X^2]
    MeanEstimate spent;                // E[sum v_i]
    std::uint64_t group_successes = 0; // all groups succeeded (grouped-lower only)
    Fraction max_spent{0};             // largest sum v_i seen in any trial

    SimulationReport final_tail(std::size_t i) const;
    SimulationReport max_tail(std::size_t i) const;
    /// Pr[y_max >= thresholds[hit] | y_max >= thresholds[given]].
    SimulationReport conditional_max_tail(std::size_t hit, std::size_t given) const;
    SimulationReport joint_group_success() const;
};

GameSummary summarize_games(const adversary::Strategy& strategy, const adversary::GameConfig& config,
                            std::span<const double> thresholds, std::uint64_t trials, std::uint64_t seed,
                            double level = kDefaultLevel);

/// Pr[checkpoint t_s exists] for s = 1..max_s on the fair n-step walk, using
/// the referee and adversary::checkpoints.
std::vector<SimulationReport> estimate_checkpoint_existence(std::uint64_t n, double spacing, std::size_t max_s,
                                                            std::uint64_t trials, std::uint64_t seed,
                                                            double level = kDefaultLevel);

namespace detail {

/// Runs trials [0, trials) in fixed blocks, each block with its own accumulator,
/// then folds the accumulators in block order. `fn(rng, acc)` handles one trial;
/// `Acc` needs a default constructor and `merge(const Acc&)`.
template <class Acc, class TrialFn>
Acc run_blocked(std::uint64_t trials, std::uint64_t seed, const Acc& prototype, TrialFn fn) {
    const std::uint64_t blocks = (trials + kBlockSize - 1) / kBlockSize;
    std::vector<Acc> partial(blocks, prototype);
    const auto workers = static_cast<std::uint64_t>(
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(blocks))));
    auto work = [&](std::uint64_t worker) {
        for (std::uint64_t b = worker; b < blocks; b += workers) {
            const std::uint64_t end = std::min(trials, (b + 1) * kBlockSize);
            for (std::uint64_t i = b * kBlockSize; i < end; ++i) {
                CounterRng rng(seed, i);
                fn(rng, partial[b]);
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    Acc total = prototype;
    for (const auto& p : partial) total.merge(p);
    return total;
}

}  // namespace detail

}  // namespace tailcert::montecarlo
