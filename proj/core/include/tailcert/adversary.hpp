#pragma once

// The adaptive martingale game. A strategy picks each step's mean-zero law
// after seeing the outcomes so far; the referee samples the step, charges its
// variance against the budget in exact arithmetic and records the trajectory.

#include "tailcert/rational.hpp"
#include "tailcert/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tailcert::adversary {

/// Two-point law on {-a, +b} with Pr[+b] = a / (a + b); mean 0 and variance a*b
/// hold exactly. a = b = 0 is the point mass at 0.
class StepDistribution {
public:
    StepDistribution() = default;
    /// Throws DomainError unless a, b lie in [0, 1].
    StepDistribution(Fraction a, Fraction b);

    static StepDistribution point_mass() { return {}; }
    static const StepDistribution& rademacher() {
        static const StepDistribution fair{Fraction(1), Fraction(1)};
        return fair;
    }

    const Fraction& down() const noexcept { return a_; }
    const Fraction& up() const noexcept { return b_; }
    Fraction mean() const { return b_ * prob_up_exact() - a_ * (Fraction(1) - prob_up_exact()); }
    const Fraction& variance() const noexcept { return variance_; }
    Fraction prob_up_exact() const;

    /// Maps a uniform draw u in [0, 1) to an outcome.
    double sample(double u) const noexcept { return u < prob_up_ ? up_value_ : down_value_; }
    bool contains(double x) const noexcept { return x == up_value_ || x == down_value_; }

    friend bool operator==(const StepDistribution& l, const StepDistribution& r) noexcept {
        return l.a_ == r.a_ && l.b_ == r.b_;
    }

private:
    Fraction a_{0};
    Fraction b_{0};
    Fraction variance_{0};
    double prob_up_ = 0.0;
    double up_value_ = 0.0;
    double down_value_ = 0.0;
};

enum class BudgetMode { at_most, exactly };

struct GameConfig {
    std::uint64_t n = 0;  // maximum number of steps
    Fraction v{1};        // variance budget
    BudgetMode budget_mode = BudgetMode::at_most;
    std::uint64_t seed = 0;

    void validate() const;
};

/// What a strategy may look at before choosing step `step` (0-based).
struct GameView {
    std::size_t step = 0;
    std::span<const double> history;
    double sum = 0.0;
    Fraction remaining_budget{0};
    std::uint64_t remaining_steps = 0;
};

/// Decision rule of the player. nullopt means stop: every remaining step is
/// the point mass at 0. Implementations must be deterministic given the view.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string id() const = 0;
    virtual std::optional<StepDistribution> next(const GameView& view) const = 0;
};

struct Trajectory {
    std::vector<double> x;         // outcome of each played step
    std::vector<double> z;         // prefix sums z_i = z_{i-1} + x_i
    std::vector<Fraction> v_spent; // variance charged at each step
    double y_max = 0.0;            // max over prefixes, the empty prefix included
    Fraction total_spent{0};
    std::uint64_t horizon = 0;     // steps after x.size() are point masses at 0

    double final_sum() const noexcept { return z.empty() ? 0.0 : z.back(); }
    void clear() noexcept;

    /// CSV with header "step,x,z,v_spent"; v_spent is the exact per-step variance.
    void write_csv(std::ostream& out) const;
};

/// Plays one game with the generator stream (config.seed, 0).
Trajectory play(const GameConfig& config, const Strategy& strategy);

/// Plays one game drawing from `rng`, reusing the buffers of `out`.
/// Throws ProtocolViolation if the strategy over-spends, or under-spends in exactly-mode.
void play(const GameConfig& config, const Strategy& strategy, CounterRng& rng, Trajectory& out);

/// First step index (1-based) at which the prefix sum reaches s * spacing, for s = 1, 2, ...
std::vector<std::size_t> checkpoints(const Trajectory& t, double spacing);

// Built-in strategies --------------------------------------------------------

/// Fair ±1 steps while at least one unit of budget remains; a final partial
/// budget is spent on {-1, +remaining}.
class RademacherStrategy final : public Strategy {
public:
    std::string id() const override { return "rademacher"; }
    std::optional<StepDistribution> next(const GameView& view) const override;
};

/// v unit-variance fair steps split into k^2 consecutive groups. The groups
/// are the constructive lower-bound layout: group g succeeds when its sum is at
/// least sqrt(size_g) / 4, and all groups succeeding forces X >= k sqrt(v) / 4.
class GroupedLowerStrategy final : public Strategy {
public:
    struct Group {
        std::size_t start = 0;
        std::size_t size = 0;
        double target = 0.0;
    };

    /// Throws DomainError when v < k^2 or k < 1.
    GroupedLowerStrategy(std::uint64_t v, std::uint64_t k);

    std::string id() const override { return "grouped-lower:" + std::to_string(k_); }
    std::optional<StepDistribution> next(const GameView& view) const override;

    std::uint64_t v() const noexcept { return v_; }
    std::uint64_t k() const noexcept { return k_; }
    const std::vector<Group>& groups() const noexcept { return groups_; }
    /// False when k^2 does not divide v and the last group absorbed the remainder.
    bool even_partition() const noexcept { return v_ % (k_ * k_) == 0; }
    bool all_groups_succeed(std::span<const double> steps) const;
    /// Product over groups of the exact per-group success probability.
    double joint_success_probability() const;

private:
    std::uint64_t v_;
    std::uint64_t k_;
    std::vector<Group> groups_;
};

/// v*r steps of {-1/r, +1}: variance 1/r each, +1 with probability 1/(r + 1).
class BurstStrategy final : public Strategy {
public:
    /// Throws DomainError unless r >= 2 and r*v is a positive integer.
    BurstStrategy(Fraction v, Fraction r);

    std::string id() const override { return "burst:" + to_string(r_); }
    std::optional<StepDistribution> next(const GameView& view) const override;

    std::uint64_t steps() const noexcept { return steps_; }

private:
    Fraction r_;
    std::uint64_t steps_;
    StepDistribution step_;
};

/// Plays `inner` until the prefix sum reaches tau, then stops.
class StopAtThreshold final : public Strategy {
public:
    StopAtThreshold(double tau, std::unique_ptr<Strategy> inner);

    std::string id() const override;
    std::optional<StepDistribution> next(const GameView& view) const override;

    double tau() const noexcept { return tau_; }
    const Strategy& inner() const noexcept { return *inner_; }

private:
    double tau_;
    std::unique_ptr<Strategy> inner_;
};

/// Builds a strategy from its CLI id: "rademacher", "grouped-lower:k",
/// "burst:r", "stop:tau:inner". The budget v is needed to validate grouped
/// and burst layouts. Throws LookupError for unknown ids.
std::unique_ptr<Strategy> make_strategy(std::string_view id, const Fraction& v);

/// Number of steps the strategy plays when given an unlimited horizon.
std::uint64_t natural_length(const Strategy& strategy, const Fraction& v);

}  // namespace tailcert::adversary
