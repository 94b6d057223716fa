#include "tailcert/adversary.hpp"

#include "tailcert/error.hpp"
#include "tailcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace tailcert::adversary {

namespace {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(std::string_view text, std::string_view what) {
    const std::string s(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(value)) {
        throw LookupError("malformed " + std::string(what) + " '" + s + "'");
    }
    return value;
}

std::uint64_t parse_count(std::string_view text, std::string_view what) {
    const double value = parse_real(text, what);
    if (value < 1.0 || value != std::floor(value)) {
        throw LookupError(std::string(what) + " must be a positive integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::uint64_t>(value);
}

}  // namespace

StepDistribution::StepDistribution(Fraction a, Fraction b) : a_(a), b_(b) {
    if (a < Fraction(0) || a > Fraction(1) || b < Fraction(0) || b > Fraction(1)) {
        throw DomainError("step support {-" + to_string(a) + ", +" + to_string(b) + "} leaves [-1, 1]");
    }
    check_fraction_size(a, "step point");
    check_fraction_size(b, "step point");
    variance_ = a * b;
    if (a + b != Fraction(0)) prob_up_ = to_double(a / (a + b));
    up_value_ = to_double(b);
    down_value_ = -to_double(a);
}

Fraction StepDistribution::prob_up_exact() const {
    if (a_ + b_ == Fraction(0)) return Fraction(0);
    return a_ / (a_ + b_);
}

void GameConfig::validate() const {
    if (v <= Fraction(0)) throw DomainError("variance budget must be positive, got " + to_string(v));
    check_fraction_size(v, "variance budget");
}

void Trajectory::clear() noexcept {
    x.clear();
    z.clear();
    v_spent.clear();
    y_max = 0.0;
    total_spent = Fraction(0);
    horizon = 0;
}

void Trajectory::write_csv(std::ostream& out) const {
    out << "step,x,z,v_spent\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << (i + 1) << ',' << format_real(x[i]) << ',' << format_real(z[i]) << ',' << to_string(v_spent[i])
            << '\n';
    }
}

Trajectory play(const GameConfig& config, const Strategy& strategy) {
    CounterRng rng(config.seed, 0);
    Trajectory t;
    play(config, strategy, rng, t);
    return t;
}

void play(const GameConfig& config, const Strategy& strategy, CounterRng& rng, Trajectory& out) {
    config.validate();
    out.clear();
    out.horizon = config.n;
    // The budget is kept as rem_num / rem_den over a common denominator so the
    // per-step check and charge are integer operations.
    std::int64_t rem_num = config.v.numerator();
    std::int64_t rem_den = config.v.denominator();
    GameView view;
    view.history = out.x;
    view.remaining_budget = config.v;
    double sum = 0.0;
    double peak = 0.0;
    for (std::uint64_t step = 0; step < config.n; ++step) {
        view.step = static_cast<std::size_t>(step);
        view.history = out.x;
        view.sum = sum;
        view.remaining_steps = config.n - step;
        const std::optional<StepDistribution> law = strategy.next(view);
        if (!law) break;
        const Fraction& var = law->variance();
        if (var.numerator() != 0) {
            const std::int64_t vd = var.denominator();
            if (rem_den % vd != 0) {
                const std::int64_t scale = vd / std::gcd(rem_den, vd);
                if (rem_den > kFractionCap * kFractionCap / scale) {
                    check_fraction_size(Fraction(rem_num, rem_den) - var, "remaining budget");
                }
                rem_num *= scale;
                rem_den *= scale;
            }
            const std::int64_t charge = var.numerator() * (rem_den / vd);
            if (charge > rem_num) {
                throw ProtocolViolation(static_cast<std::size_t>(step + 1),
                                        strategy.id() + " requested variance " + to_string(var) + " with only " +
                                            to_string(Fraction(rem_num, rem_den)) + " left");
            }
            rem_num -= charge;
            view.remaining_budget = Fraction(rem_num, rem_den);
            rem_num = view.remaining_budget.numerator();
            rem_den = view.remaining_budget.denominator();
        }
        const double x = law->sample(rng.uniform());
        sum += x;
        peak = std::max(peak, sum);
        out.x.push_back(x);
        out.z.push_back(sum);
        out.v_spent.push_back(var);
    }
    out.y_max = peak;
    out.total_spent = config.v - view.remaining_budget;
    if (config.budget_mode == BudgetMode::exactly && view.remaining_budget != Fraction(0)) {
        throw ProtocolViolation(out.x.size(), strategy.id() + " finished with " + to_string(view.remaining_budget) +
                                                  " of the budget unspent in exactly-mode");
    }
}

std::vector<std::size_t> checkpoints(const Trajectory& t, double spacing) {
    if (!(spacing > 0.0)) throw DomainError("checkpoint spacing must be positive");
    std::vector<std::size_t> out;
    double level = spacing;
    for (std::size_t i = 0; i < t.z.size(); ++i) {
        while (t.z[i] >= level) {
            out.push_back(i + 1);
            level += spacing;
        }
    }
    return out;
}

std::optional<StepDistribution> RademacherStrategy::next(const GameView& view) const {
    if (view.remaining_budget >= Fraction(1)) return StepDistribution::rademacher();
    if (view.remaining_budget > Fraction(0)) return StepDistribution(Fraction(1), view.remaining_budget);
    return std::nullopt;
}

GroupedLowerStrategy::GroupedLowerStrategy(std::uint64_t v, std::uint64_t k) : v_(v), k_(k) {
    if (k < 1) throw DomainError("grouped-lower needs k >= 1");
    const std::uint64_t count = k * k;
    if (v < count) {
        throw DomainError("grouped-lower needs v >= k^2 (v = " + std::to_string(v) + ", k = " + std::to_string(k) +
                          ")");
    }
    const std::uint64_t base = v / count;
    std::size_t start = 0;
    for (std::uint64_t g = 0; g < count; ++g) {
        const std::uint64_t size = (g + 1 == count) ? v - base * (count - 1) : base;
        groups_.push_back({start, static_cast<std::size_t>(size), std::sqrt(static_cast<double>(size)) / 4.0});
        start += size;
    }
}

std::optional<StepDistribution> GroupedLowerStrategy::next(const GameView& view) const {
    if (view.remaining_budget >= Fraction(1)) return StepDistribution::rademacher();
    return std::nullopt;
}

bool GroupedLowerStrategy::all_groups_succeed(std::span<const double> steps) const {
    for (const auto& g : groups_) {
        double sum = 0.0;
        const std::size_t end = std::min(steps.size(), g.start + g.size);
        for (std::size_t i = g.start; i < end; ++i) sum += steps[i];
        if (sum < g.target) return false;
    }
    return true;
}

double GroupedLowerStrategy::joint_success_probability() const {
    double log2p = 0.0;
    for (const auto& g : groups_) {
        // Group sums are integers, so "sum >= target" is "sum >= ceil(target)".
        const auto need = static_cast<std::int64_t>(std::ceil(g.target - 1e-12));
        log2p += oracle::walk_tail(g.size, need).log2();
    }
    return std::exp2(log2p);
}

BurstStrategy::BurstStrategy(Fraction v, Fraction r) : r_(r), steps_(0) {
    if (r < Fraction(2)) throw DomainError("burst needs r >= 2, got " + to_string(r));
    check_fraction_size(r, "burst r");
    const Fraction rv = r * v;
    if (rv.denominator() != 1 || rv.numerator() < 1) {
        throw DomainError("burst needs r*v to be a positive integer (r = " + to_string(r) + ", v = " + to_string(v) +
                          ")");
    }
    steps_ = static_cast<std::uint64_t>(rv.numerator());
    step_ = StepDistribution(Fraction(1) / r, Fraction(1));
}

std::optional<StepDistribution> BurstStrategy::next(const GameView& view) const {
    if (view.remaining_budget >= step_.variance()) return step_;
    return std::nullopt;
}

StopAtThreshold::StopAtThreshold(double tau, std::unique_ptr<Strategy> inner) : tau_(tau), inner_(std::move(inner)) {
    if (!inner_) throw DomainError("stop wrapper needs an inner strategy");
}

std::string StopAtThreshold::id() const {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", tau_);
    return "stop:" + std::string(buf) + ":" + inner_->id();
}

std::optional<StepDistribution> StopAtThreshold::next(const GameView& view) const {
    if (view.sum >= tau_) return std::nullopt;
    return inner_->next(view);
}

std::unique_ptr<Strategy> make_strategy(std::string_view id, const Fraction& v) {
    const auto colon = id.find(':');
    const std::string_view head = id.substr(0, colon);
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);

    if (head == "rademacher" && rest.empty() && colon == std::string_view::npos) {
        return std::make_unique<RademacherStrategy>();
    }
    if (head == "grouped-lower" && !rest.empty()) {
        if (v.denominator() != 1) throw DomainError("grouped-lower needs an integer budget v");
        return std::make_unique<GroupedLowerStrategy>(static_cast<std::uint64_t>(v.numerator()),
                                                      parse_count(rest, "grouped-lower k"));
    }
    if (head == "burst" && !rest.empty()) {
        Fraction r;
        try {
            r = parse_fraction(rest);
        } catch (const DomainError&) {
            throw LookupError("malformed burst rate '" + std::string(rest) + "'");
        }
        return std::make_unique<BurstStrategy>(v, r);
    }
    if (head == "stop" && !rest.empty()) {
        const auto second = rest.find(':');
        if (second == std::string_view::npos) throw LookupError("stop strategy needs 'stop:tau:inner'");
        const double tau = parse_real(rest.substr(0, second), "stop threshold");
        return std::make_unique<StopAtThreshold>(tau, make_strategy(rest.substr(second + 1), v));
    }
    throw LookupError("unknown strategy id '" + std::string(id) + "'");
}

std::uint64_t natural_length(const Strategy& strategy, const Fraction& v) {
    if (const auto* s = dynamic_cast<const StopAtThreshold*>(&strategy)) return natural_length(s->inner(), v);
    if (const auto* b = dynamic_cast<const BurstStrategy*>(&strategy)) return b->steps();
    // Unit-variance strategies play ceil(v) steps.
    const auto whole = static_cast<std::uint64_t>(v.numerator() / v.denominator());
    return whole + (v.numerator() % v.denominator() != 0 ? 1 : 0);
}

}  // namespace tailcert::adversary
