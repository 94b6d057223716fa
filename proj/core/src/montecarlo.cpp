#include "tailcert/montecarlo.hpp"

#include "tailcert/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <bit>
#include <cmath>
#include <cstdio>

namespace tailcert::montecarlo {

namespace {

// Sums of non-dyadic steps (e.g. -1/3) drift by a few ulps; a hit that misses
// the threshold only through rounding still counts.
constexpr double kHitSlack = 1e-9;

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
}

void check_trials(std::uint64_t trials) {
    if (trials == 0) throw DomainError("trial count must be positive");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Moments {
    std::uint64_t count = 0;
    long double sum = 0.0L;
    long double sum_sq = 0.0L;

    void add(double x) noexcept {
        ++count;
        sum += x;
        sum_sq += static_cast<long double>(x) * x;
    }
    void merge(const Moments& o) noexcept {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    MeanEstimate estimate(double z) const {
        MeanEstimate e;
        e.count = count;
        if (count == 0) return e;
        const long double n = static_cast<long double>(count);
        const long double mean = sum / n;
        long double var = 0.0L;
        if (count > 1) var = std::max(0.0L, (sum_sq - n * mean * mean) / (n - 1));
        e.mean = static_cast<double>(mean);
        e.std_error = static_cast<double>(std::sqrt(var / n));
        e.ci_low = e.mean - z * e.std_error;
        e.ci_high = e.mean + z * e.std_error;
        return e;
    }
};

struct Counter {
    std::uint64_t hits = 0;
    void merge(const Counter& o) noexcept { hits += o.hits; }
};

// Sum of n fair ±1 steps from popcounts of 64-bit draws.
std::int64_t fair_walk_sum(CounterRng& rng, std::uint64_t n) noexcept {
    std::uint64_t heads = 0;
    std::uint64_t left = n;
    while (left >= 64) {
        heads += static_cast<std::uint64_t>(std::popcount(rng()));
        left -= 64;
    }
    if (left > 0) heads += static_cast<std::uint64_t>(std::popcount(rng() >> (64 - left)));
    return 2 * static_cast<std::int64_t>(heads) - static_cast<std::int64_t>(n);
}

// Feeds fair ±1 steps one at a time, 64 per draw.
class BitStream {
public:
    explicit BitStream(CounterRng& rng) noexcept : rng_(rng) {}
    int step() noexcept {
        if (left_ == 0) {
            word_ = rng_();
            left_ = 64;
        }
        const int s = (word_ & 1u) ? 1 : -1;
        word_ >>= 1;
        --left_;
        return s;
    }

private:
    CounterRng& rng_;
    std::uint64_t word_ = 0;
    unsigned left_ = 0;
};

}  // namespace

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level) {
    check_trials(trials);
    check_level(level);
    if (successes > trials) throw DomainError("successes exceed trials");
    const double alpha = 1.0 - level;
    const double x = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    Interval ci;
    ci.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
    ci.high = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
    return ci;
}

double normal_quantile(double level) {
    check_level(level);
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
}

SimulationReport SimulationReport::from_counts(std::string subject, std::uint64_t successes, std::uint64_t trials,
                                               std::uint64_t seed, double level) {
    const Interval ci = clopper_pearson(successes, trials, level);
    SimulationReport r;
    r.trials = trials;
    r.successes = successes;
    r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.ci_level = level;
    r.seed = seed;
    r.subject = std::move(subject);
    return r;
}

std::string describe(const Subject& subject, double threshold) {
    if (const auto* iid = std::get_if<IidSubject>(&subject)) {
        std::string law = "fair";
        if (const auto* b = std::get_if<oracle::Bernoulli>(&iid->law)) law = "bernoulli(" + to_string(b->p) + ")";
        return "iid " + law + " n=" + std::to_string(iid->n) + " threshold=" + fmt(threshold);
    }
    const auto& g = std::get<GameSubject>(subject);
    return "game " + g.strategy_id + " n=" + std::to_string(g.config.n) + " v=" + to_string(g.config.v) +
           " threshold=" + fmt(threshold);
}

SimulationReport estimate_tail(const Subject& subject, double threshold, std::uint64_t trials, std::uint64_t seed,
                               double level) {
    check_trials(trials);
    check_level(level);
    const double cut = threshold - kHitSlack;
    Counter total;

    if (const auto* iid = std::get_if<IidSubject>(&subject)) {
        const std::uint64_t n = iid->n;
        if (std::holds_alternative<oracle::FairWalk>(iid->law)) {
            total = detail::run_blocked(trials, seed, Counter{}, [&](CounterRng& rng, Counter& acc) {
                if (static_cast<double>(fair_walk_sum(rng, n)) >= cut) ++acc.hits;
            });
        } else {
            const BigRational& p_exact = std::get<oracle::Bernoulli>(iid->law).p;
            if (p_exact < 0 || p_exact > 1) throw DomainError("Bernoulli p must lie in [0, 1]");
            const double p = to_double(p_exact);
            total = detail::run_blocked(trials, seed, Counter{}, [&](CounterRng& rng, Counter& acc) {
                std::uint64_t ones = 0;
                for (std::uint64_t i = 0; i < n; ++i) ones += rng.uniform() < p ? 1 : 0;
                if (static_cast<double>(ones) >= cut) ++acc.hits;
            });
        }
    } else {
        const auto& g = std::get<GameSubject>(subject);
        const auto strategy = adversary::make_strategy(g.strategy_id, g.config.v);
        adversary::GameConfig config = g.config;
        if (config.n == 0) config.n = adversary::natural_length(*strategy, config.v);
        config.validate();
        total = detail::run_blocked(trials, seed, Counter{}, [&](CounterRng& rng, Counter& acc) {
            thread_local adversary::Trajectory traj;
            adversary::play(config, *strategy, rng, traj);
            if (traj.final_sum() >= cut) ++acc.hits;
        });
    }
    return SimulationReport::from_counts(describe(subject, threshold), total.hits, trials, seed, level);
}

SimulationReport estimate_prefix_max_tail(std::uint64_t n, std::int64_t m, std::uint64_t trials, std::uint64_t seed,
                                          double level) {
    check_trials(trials);
    check_level(level);
    if (m < 1 || m > static_cast<std::int64_t>(n)) {
        throw RangeError("prefix-max level " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
    }
    const Counter total = detail::run_blocked(trials, seed, Counter{}, [&](CounterRng& rng, Counter& acc) {
        BitStream bits(rng);
        std::int64_t s = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            s += bits.step();
            if (s >= m) {
                ++acc.hits;
                return;
            }
        }
    });
    return SimulationReport::from_counts("prefix-max fair n=" + std::to_string(n) + " m=" + std::to_string(m),
                                         total.hits, trials, seed, level);
}

HittingEstimate estimate_hitting_time(std::uint64_t r, std::uint64_t horizon, std::uint64_t trials,
                                      std::uint64_t seed, double level) {
    check_trials(trials);
    check_level(level);
    if (r < 1) throw DomainError("hitting level r must be >= 1");
    if (horizon < r) throw DomainError("hitting horizon must be >= r");

    struct Acc {
        Moments time;
        std::uint64_t truncated = 0;
        void merge(const Acc& o) noexcept {
            time.merge(o.time);
            truncated += o.truncated;
        }
    };
    const auto target = static_cast<std::int64_t>(r);
    const Acc total = detail::run_blocked(trials, seed, Acc{}, [&](CounterRng& rng, Acc& acc) {
        BitStream bits(rng);
        std::int64_t s = 0;
        std::uint64_t t = 0;
        while (t < horizon) {
            s += bits.step();
            ++t;
            if (s == target || s == -target) break;
        }
        if (s != target && s != -target) ++acc.truncated;
        acc.time.add(static_cast<double>(t));
    });

    HittingEstimate e;
    e.r = r;
    e.horizon = horizon;
    e.seed = seed;
    e.level = level;
    e.time = total.time.estimate(normal_quantile(level));
    e.truncated_fraction = static_cast<double>(total.truncated) / static_cast<double>(trials);
    return e;
}

SimulationReport GameSummary::final_tail(std::size_t i) const {
    return SimulationReport::from_counts(strategy_id + " final>=" + fmt(thresholds.at(i)), final_counts.at(i), trials,
                                         seed, level);
}

SimulationReport GameSummary::max_tail(std::size_t i) const {
    return SimulationReport::from_counts(strategy_id + " max>=" + fmt(thresholds.at(i)), max_counts.at(i), trials,
                                         seed, level);
}

SimulationReport GameSummary::conditional_max_tail(std::size_t hit, std::size_t given) const {
    const std::uint64_t base = max_counts.at(given);
    if (base == 0) throw DomainError("conditioning event never occurred");
    // Thresholds are sorted by the caller, so {max >= t_hit} is inside {max >= t_given} when hit >= given.
    if (thresholds.at(hit) < thresholds.at(given)) throw DomainError("conditional tail needs t_hit >= t_given");
    return SimulationReport::from_counts(
        strategy_id + " max>=" + fmt(thresholds[hit]) + " | max>=" + fmt(thresholds[given]), max_counts[hit], base,
        seed, level);
}

SimulationReport GameSummary::joint_group_success() const {
    return SimulationReport::from_counts(strategy_id + " all groups succeed", group_successes, trials, seed, level);
}

GameSummary summarize_games(const adversary::Strategy& strategy, const adversary::GameConfig& config,
                            std::span<const double> thresholds, std::uint64_t trials, std::uint64_t seed,
                            double level) {
    check_trials(trials);
    check_level(level);
    config.validate();
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (thresholds[i] < thresholds[i - 1]) throw DomainError("summary thresholds must be non-decreasing");
    }
    const auto* grouped = dynamic_cast<const adversary::GroupedLowerStrategy*>(&strategy);

    struct Acc {
        std::vector<std::uint64_t> final_counts;
        std::vector<std::uint64_t> max_counts;
        Moments x, x2_minus_v, x2, spent;
        std::uint64_t groups = 0;
        Fraction max_spent{0};
        void merge(const Acc& o) {
            for (std::size_t i = 0; i < final_counts.size(); ++i) {
                final_counts[i] += o.final_counts[i];
                max_counts[i] += o.max_counts[i];
            }
            x.merge(o.x);
            x2_minus_v.merge(o.x2_minus_v);
            x2.merge(o.x2);
            spent.merge(o.spent);
            groups += o.groups;
            max_spent = std::max(max_spent, o.max_spent);
        }
    };
    Acc proto;
    proto.final_counts.assign(thresholds.size(), 0);
    proto.max_counts.assign(thresholds.size(), 0);

    const Acc total = detail::run_blocked(trials, seed, proto, [&](CounterRng& rng, Acc& acc) {
        thread_local adversary::Trajectory traj;
        adversary::play(config, strategy, rng, traj);
        const double x = traj.final_sum();
        const double v = to_double(traj.total_spent);
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            const double cut = thresholds[i] - kHitSlack;
            if (x >= cut) ++acc.final_counts[i];
            if (traj.y_max >= cut) ++acc.max_counts[i];
        }
        acc.x.add(x);
        acc.x2_minus_v.add(x * x - v);
        acc.x2.add(x * x);
        acc.spent.add(v);
        if (grouped && grouped->all_groups_succeed(traj.x)) ++acc.groups;
        acc.max_spent = std::max(acc.max_spent, traj.total_spent);
    });

    const double z = normal_quantile(level);
    GameSummary s;
    s.strategy_id = strategy.id();
    s.config = config;
    s.trials = trials;
    s.seed = seed;
    s.level = level;
    s.thresholds.assign(thresholds.begin(), thresholds.end());
    s.final_counts = total.final_counts;
    s.max_counts = total.max_counts;
    s.final_sum = total.x.estimate(z);
    s.square_minus_spent = total.x2_minus_v.estimate(z);
    s.final_square = total.x2.estimate(z);
    s.spent = total.spent.estimate(z);
    s.group_successes = total.groups;
    s.max_spent = total.max_spent;
    return s;
}

std::vector<SimulationReport> estimate_checkpoint_existence(std::uint64_t n, double spacing, std::size_t max_s,
                                                            std::uint64_t trials, std::uint64_t seed,
                                                            double level) {
    check_trials(trials);
    check_level(level);
    if (n == 0) throw DomainError("checkpoint walk needs n >= 1");
    adversary::GameConfig config;
    config.n = n;
    config.v = Fraction(static_cast<std::int64_t>(n));
    const adversary::RademacherStrategy walk;

    struct Acc {
        std::vector<std::uint64_t> exists;
        void merge(const Acc& o) {
            for (std::size_t i = 0; i < exists.size(); ++i) exists[i] += o.exists[i];
        }
    };
    Acc proto;
    proto.exists.assign(max_s, 0);
    const Acc total = detail::run_blocked(trials, seed, proto, [&](CounterRng& rng, Acc& acc) {
        thread_local adversary::Trajectory traj;
        adversary::play(config, walk, rng, traj);
        const auto cps = adversary::checkpoints(traj, spacing);
        const std::size_t found = std::min(cps.size(), max_s);
        for (std::size_t s = 0; s < found; ++s) ++acc.exists[s];
    });

    std::vector<SimulationReport> out;
    out.reserve(max_s);
    for (std::size_t s = 0; s < max_s; ++s) {
        out.push_back(SimulationReport::from_counts("checkpoint s=" + std::to_string(s + 1) + " spacing=" + fmt(spacing) +
                                                        " n=" + std::to_string(n),
                                                    total.exists[s], trials, seed, level));
    }
    return out;
}

}  // namespace tailcert::montecarlo
