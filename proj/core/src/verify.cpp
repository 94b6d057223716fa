#include "tailcert/verify.hpp"

#include "tailcert/adversary.hpp"
#include "tailcert/error.hpp"
#include "tailcert/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace tailcert::verify {

using tailcert::to_string;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool relation_holds(Relation r, const BigRational& a, const BigRational& b) {
    switch (r) {
        case Relation::at_most: return a <= b;
        case Relation::at_least: return a >= b;
        case Relation::equal: return a == b;
    }
    return false;
}

Relation relation_of(bounds::Direction d) {
    return d == bounds::Direction::upper ? Relation::at_most : Relation::at_least;
}

void check_direction(const bounds::BoundResult& bound, std::optional<bounds::Direction> expected) {
    if (expected && *expected != bound.direction) {
        throw ContractError(std::string("case expects a ") + std::string(bounds::to_string(*expected)) +
                            " bound but got " + std::string(bounds::to_string(bound.family)) + " (" +
                            std::string(bounds::to_string(bound.direction)) + ")");
    }
}

// Copies the bound's parameters into the case unless the header set them.
void adopt_bound(VerificationCase& c, const bounds::BoundResult& bound) {
    c.relation = relation_of(bound.direction);
    c.log2_bound = bound.log2_bound;
    if (!c.threshold) c.threshold = bound.threshold;
    if (!c.k && bound.k) c.k = bound.k;
    if (!c.r && bound.r) c.r = bound.r;
    c.exact_bound = bound.exact_bound;
}

// Invalid and vacuous bounds are kept as skipped rows.
bool skip_unusable(VerificationCase& c, const bounds::BoundResult& bound) {
    if (!bound.valid) {
        std::string why = "invalid:";
        for (const auto& v : bound.violated) why += " " + v;
        c.note = why;
    } else if (bound.vacuous) {
        c.note = "vacuous";
    } else {
        return false;
    }
    c.truth_kind = TruthKind::skipped;
    c.pass = true;
    return true;
}

struct Plan {
    bool full = false;
    std::uint64_t game_trials = 20000;
    std::uint64_t iid_trials = 20000;
    std::uint64_t hitting_trials = 20000;
};

Plan plan_for(Scale scale) {
    Plan p;
    if (scale == Scale::full) {
        p.full = true;
        p.game_trials = 1000000;
        p.iid_trials = 1000000;
        p.hitting_trials = 100000;
    }
    return p;
}

CaseHeader header(std::string_view suite, std::string case_id, std::string anchor) {
    CaseHeader h;
    h.suite = std::string(suite);
    h.case_id = std::move(case_id);
    h.anchor = std::move(anchor);
    return h;
}

std::string id(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += '/';
        out += p;
    }
    return out;
}

std::string kv(std::string_view key, const std::string& value) { return std::string(key) + "=" + value; }
std::string kv(std::string_view key, std::uint64_t value) { return kv(key, std::to_string(value)); }
std::string kv(std::string_view key, int value) { return kv(key, std::to_string(value)); }
std::string kv(std::string_view key, double value) { return kv(key, fmt(value)); }

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Smallest integer >= x, tolerant of rounding in x.
std::int64_t ceil_tol(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-9)); }

// Pr[S_m >= t] for the fair walk, with thresholds outside [-m, m] handled.
Prob2 walk_tail_any(std::uint64_t m, double t) {
    const std::int64_t need = ceil_tol(t);
    if (need <= -static_cast<std::int64_t>(m)) return Prob2::one();
    if (need > static_cast<std::int64_t>(m)) return Prob2::zero();
    return oracle::walk_tail(m, need);
}

Prob2 binom_tail_any(std::uint64_t n, const BigRational& p, std::int64_t need) {
    if (need <= 0) return Prob2::one();
    if (need > static_cast<std::int64_t>(n)) return Prob2::zero();
    return oracle::binom_tail(n, p, need, oracle::default_mode(n));
}

// Exact Pr[sum of independent Bernoulli(p_i) >= t].
BigRational poisson_binomial_tail(std::span<const BigRational> ps, std::int64_t t) {
    if (t <= 0) return 1;
    std::vector<BigRational> dist{1};
    for (const auto& p : ps) {
        std::vector<BigRational> next(dist.size() + 1, BigRational(0));
        for (std::size_t j = 0; j < dist.size(); ++j) {
            next[j] += dist[j] * (1 - p);
            next[j + 1] += dist[j] * p;
        }
        dist = std::move(next);
    }
    BigRational tail = 0;
    for (std::size_t j = static_cast<std::size_t>(std::max<std::int64_t>(t, 0)); j < dist.size(); ++j) tail += dist[j];
    return tail;
}

// Exact law of X for the strategies whose final sum has a closed form:
// rademacher and grouped-lower are fair walks of v steps (or one {-1, +v}
// step when v < 1), burst is an affine image of a binomial.
std::optional<Prob2> game_oracle(const adversary::Strategy& s, const Fraction& v, double t) {
    if (dynamic_cast<const adversary::RademacherStrategy*>(&s) ||
        dynamic_cast<const adversary::GroupedLowerStrategy*>(&s)) {
        if (v.denominator() == 1) return walk_tail_any(static_cast<std::uint64_t>(v.numerator()), t);
        if (v < Fraction(1)) {
            const double up = to_double(v);
            if (t <= -1.0) return Prob2::one();
            if (t <= up + 1e-12) return Prob2::from_exact(BigRational(1) / (1 + to_big(v)));
            return Prob2::zero();
        }
        return std::nullopt;
    }
    if (const auto* b = dynamic_cast<const adversary::BurstStrategy*>(&s)) {
        // X = U (1 + 1/r) - v with U ~ Bin(rv, 1/(r + 1)).
        const std::uint64_t m = b->steps();
        const BigRational r = BigRational(static_cast<std::int64_t>(m)) / to_big(v);
        const double need = to_double(r) * (t + to_double(v)) / (to_double(r) + 1.0);
        return binom_tail_any(m, 1 / (r + 1), ceil_tol(need));
    }
    return std::nullopt;
}

struct SuiteBuilder {
    std::string_view suite;
    Plan plan;
    std::uint64_t seed;
    std::vector<VerificationCase> cases;

    void add(VerificationCase c) { cases.push_back(std::move(c)); }
    CaseHeader head(std::string case_id, std::string anchor) const {
        return header(suite, std::move(case_id), std::move(anchor));
    }
    std::uint64_t seed_for(std::string_view key) const { return case_seed(seed, key); }
};

// ---------------------------------------------------------------------------
// fair

void fair_suite(SuiteBuilder& b) {
    // Prefix maximum against 2/k^2.
    for (const std::uint64_t n : {16u, 64u, 256u}) {
        const std::uint64_t root = isqrt(n);
        for (std::uint64_t k = 1; k <= root; ++k) {
            const auto m = static_cast<std::int64_t>(k * root);
            auto h = b.head(id({"chebyshev-max", kv("n", n), kv("k", k)}), "extended-chebyshev");
            h.n = n;
            h.threshold = static_cast<double>(m);
            b.add(compare(h, oracle::prefix_max_tail(n, m, oracle::PrefixMaxMethod::reflection),
                          bounds::chebyshev_max_bound(n, static_cast<double>(k)), bounds::Direction::upper));
        }
    }
    {
        const std::string key = "chebyshev-max-empirical/n=64/k=2";
        auto h = b.head(key, "extended-chebyshev");
        h.n = 64;
        b.add(compare(h, montecarlo::estimate_prefix_max_tail(64, 16, b.plan.iid_trials, b.seed_for(key)),
                      bounds::chebyshev_max_bound(64, 2.0)));
    }

    // The absorbing-barrier DP and the reflection formula agree exactly.
    std::vector<std::uint64_t> sizes;
    if (b.plan.full) {
        for (std::uint64_t n = 1; n <= 64; ++n) sizes.push_back(n);
    } else {
        sizes = {8, 16, 32, 64};
    }
    for (const std::uint64_t n : sizes) {
        std::uint64_t mismatches = 0;
        for (std::int64_t m = 1; m <= static_cast<std::int64_t>(n); ++m) {
            const Prob2 dp = oracle::prefix_max_tail(n, m, oracle::PrefixMaxMethod::dp, oracle::Mode::exact);
            const Prob2 refl = oracle::prefix_max_tail(n, m, oracle::PrefixMaxMethod::reflection, oracle::Mode::exact);
            if (*dp.exact() != *refl.exact()) ++mismatches;
        }
        auto h = b.head(id({"prefix-max-dp-vs-reflection", kv("n", n)}), "prefix-max-reflection");
        h.n = n;
        h.note = "mismatching levels";
        b.add(exact_value_case(h, BigRational(mismatches), BigRational(0), Relation::equal));
    }

    // Poor man's bound at even k.
    std::vector<std::uint64_t> poor_sizes{64, 256};
    if (b.plan.full) poor_sizes.push_back(1024);
    for (const std::uint64_t n : poor_sizes) {
        const std::uint64_t root = isqrt(n);
        for (std::uint64_t k = 2; k <= root; k += 2) {
            auto h = b.head(id({"poor-fair", kv("n", n), kv("k", k)}), "poor-mans-chernoff");
            h.n = n;
            b.add(compare(h, oracle::walk_tail(n, static_cast<std::int64_t>(k * root)),
                          bounds::poor_fair_bound(n, static_cast<std::int64_t>(k))));
        }
        // Odd k lies outside the hypotheses and shows up as a skipped row.
        auto h = b.head(id({"poor-fair", kv("n", n), kv("k", 3)}), "poor-mans-chernoff");
        h.n = n;
        b.add(compare(h, oracle::walk_tail(n, static_cast<std::int64_t>(3 * root)), bounds::poor_fair_bound(n, 3)));
    }
    {
        const std::string key = "poor-fair-empirical/n=64/k=2";
        auto h = b.head(key, "poor-mans-chernoff");
        h.n = 64;
        b.add(compare(h,
                      montecarlo::estimate_tail(montecarlo::IidSubject{64, oracle::FairWalk{}}, 16.0,
                                                b.plan.iid_trials, b.seed_for(key)),
                      bounds::poor_fair_bound(64, 2)));
    }
    // Checkpoints of the proof: Pr[t_s exists] <= 2^-s at spacing 2 sqrt(n) + 1.
    {
        const std::uint64_t n = 64;
        const double spacing = 2.0 * std::sqrt(static_cast<double>(n)) + 1.0;
        const std::string key = "checkpoints/n=64";
        const auto reports = montecarlo::estimate_checkpoint_existence(n, spacing, 3, b.plan.iid_trials,
                                                                       b.seed_for(key));
        for (std::size_t s = 0; s < reports.size(); ++s) {
            auto h = b.head(id({"checkpoint-exists", kv("n", n), kv("s", static_cast<std::uint64_t>(s + 1))}),
                            "poor-mans-chernoff");
            h.n = n;
            h.threshold = spacing * static_cast<double>(s + 1);
            b.add(empirical_probability_case(h, reports[s], -static_cast<double>(s + 1), Relation::at_most));
        }
    }

    // Fair-coin sandwich: the grouped upper bound, its rescaled form at k sqrt(n), and the lower bound.
    std::vector<std::uint64_t> sandwich_sizes{256};
    if (b.plan.full) sandwich_sizes.push_back(1024);
    for (const std::uint64_t n : sandwich_sizes) {
        const std::uint64_t root = isqrt(n);
        for (std::uint64_t k = 1; 16 * k * root <= n; ++k) {
            auto h = b.head(id({"fair-upper", kv("n", n), kv("k", k)}), "fair-chernoff-upper");
            h.n = n;
            b.add(compare(h, oracle::walk_tail(n, static_cast<std::int64_t>(16 * k * root)),
                          bounds::fair_upper_bound(n, static_cast<std::int64_t>(k))));
        }
        for (std::uint64_t k = 1; 4 * k <= root; ++k) {
            const Prob2 truth = oracle::walk_tail(n, static_cast<std::int64_t>(k * root));
            if (k >= 2) {
                // Substituting k -> k/16 in the grouped bound: Pr[S_n >= k sqrt(n)] <= 2^(-k^2/128).
                auto h = b.head(id({"fair-upper-rescaled", kv("n", n), kv("k", k)}), "fair-chernoff-upper");
                h.n = n;
                h.k = static_cast<double>(k);
                h.threshold = static_cast<double>(k * root);
                b.add(exact_probability_case(h, truth, -static_cast<double>(k * k) / 128.0, std::nullopt,
                                             Relation::at_most));
            }
            auto h = b.head(id({"fair-lower", kv("n", n), kv("k", k)}), "fair-coins-lower");
            h.n = n;
            b.add(compare(h, truth, bounds::fair_lower_bound(n, static_cast<std::int64_t>(k))));
        }
        // The group construction behind the lower bound: k^2 groups each reaching sqrt(size)/4.
        for (std::uint64_t k = 1; 4 * k <= root && k <= 2; ++k) {
            const adversary::GroupedLowerStrategy layout(n, k);
            BigRational joint = 1;
            for (const auto& g : layout.groups()) {
                joint *= *walk_tail_any(g.size, g.target).exact();
            }
            auto h = b.head(id({"fair-lower-groups", kv("n", n), kv("k", k)}), "fair-coins-lower");
            h.n = n;
            h.k = static_cast<double>(k);
            h.threshold = static_cast<double>(k * root) / 4.0;
            b.add(exact_probability_case(h, Prob2::from_exact(joint), -2.0 * static_cast<double>(k * k),
                                         BigRational(1) / power(BigRational(4), static_cast<unsigned>(k * k)),
                                         Relation::at_least));
        }
    }
}

// ---------------------------------------------------------------------------
// geo

void geo_suite(SuiteBuilder& b) {
    const std::array<BigRational, 2> ps{BigRational(1, 8), BigRational(1, 16)};
    for (const auto& p : ps) {
        for (std::uint64_t n = 1; n <= 6; ++n) {
            const auto sn = static_cast<std::int64_t>(n);
            {
                auto h = b.head(id({"geo-sum", kv("n", n), kv("p", to_string(p))}), "geo-sum");
                h.n = n;
                h.p = p;
                b.add(compare(h, oracle::geometric_sum_tail(n, p, 2 * sn).upper, bounds::geo_sum_bound(n, p, false)));
            }
            {
                auto h = b.head(id({"geo-sum-int", kv("n", n), kv("p", to_string(p))}), "geo-sum-integer");
                h.n = n;
                h.p = p;
                b.add(compare(h, oracle::geometric_sum_tail(n, p, sn).upper, bounds::geo_sum_bound(n, p, true)));
            }
            {
                // History-dependent geometrics with Pr[Y_i >= j | past] <= p^j obey the same bound.
                auto h = b.head(id({"geo-sum-adaptive", kv("n", n), kv("p", to_string(p))}), "conditional-geo-sum");
                h.n = n;
                h.p = p;
                b.add(compare(h, Prob2::from_exact(adaptive_geometric_tail(n, p, 2 * sn)),
                              bounds::geo_sum_bound(n, p, false)));
            }
        }
    }

    // Witness sequences: the encoding is a bijection onto the strings counted by C(total + parts - 1, parts - 1).
    const std::uint64_t cap = b.plan.full ? 8 : 5;
    for (std::uint64_t parts = 1; parts <= cap; ++parts) {
        for (std::uint64_t total = 0; total <= cap; ++total) {
            std::uint64_t round_trips = 0;
            for (const auto& w : oracle::enumerate_witnesses(total, parts)) {
                const std::string bits = oracle::witness_encode(w);
                if (bits.size() == total + parts && oracle::witness_decode(bits) == w) ++round_trips;
            }
            auto h = b.head(id({"witness", kv("total", total), kv("parts", parts)}), "geo-sum-witness");
            h.n = parts;
            h.threshold = static_cast<double>(total);
            b.add(exact_value_case(h, BigRational(round_trips), BigRational(oracle::compositions_count(total, parts)),
                                   Relation::equal));
        }
    }
}

// ---------------------------------------------------------------------------
// large

void large_suite(SuiteBuilder& b) {
    struct Point {
        std::uint64_t n;
        BigRational p;
        double r;
    };
    std::vector<Point> points{{64, BigRational(1, 16), 8.0}};
    std::vector<std::uint64_t> sizes{64, 256};
    if (b.plan.full) sizes.push_back(1024);
    const std::array<BigRational, 4> ps{BigRational(1, 16), BigRational(1, 8), BigRational(1, 4), BigRational(1, 2)};
    for (const std::uint64_t n : sizes) {
        for (const auto& p : ps) {
            for (const double r : {2.0, 4.0, 8.0}) {
                if (n == 64 && p == BigRational(1, 16) && r == 8.0) continue;
                if (r * to_double(p) * static_cast<double>(n) <= static_cast<double>(n)) points.push_back({n, p, r});
            }
        }
    }
    for (const auto& pt : points) {
        const auto pair = bounds::large_dev_bounds(pt.n, pt.p, pt.r);
        const auto need = static_cast<std::int64_t>(std::llround(pair.upper.threshold));
        const Prob2 truth = binom_tail_any(pt.n, pt.p, need);
        for (const auto* bound : {&pair.upper, &pair.lower}) {
            const bool up = bound->direction == bounds::Direction::upper;
            auto h = b.head(id({up ? "large-upper" : "large-lower", kv("n", pt.n), kv("p", to_string(pt.p)),
                                kv("r", pt.r)}),
                            up ? "large-deviation-upper" : "large-deviation-lower");
            h.n = pt.n;
            h.p = pt.p;
            b.add(compare(h, truth, *bound));
        }
    }

    // Regime selection: query() picks the small- or large-deviation statement for (mu, n, t).
    struct RegimePoint {
        std::uint64_t n;
        BigRational p;
        double t_over_mu;
        bool small;
    };
    std::vector<RegimePoint> regimes{{256, BigRational(1, 2), 1.0 + 1.0 / std::sqrt(128.0), true},
                                     {256, BigRational(1, 16), 4.0, false},
                                     {64, BigRational(1, 16), 8.0, false}};
    if (b.plan.full) {
        regimes.push_back({4096, BigRational(1, 2), 1.0 + 1.0 / std::sqrt(2048.0), true});
        regimes.push_back({1024, BigRational(1, 16), 4.0, false});
    }
    for (const auto& rp : regimes) {
        const double mu = to_double(rp.p) * static_cast<double>(rp.n);
        const double t = rp.t_over_mu * mu;
        const bounds::BoundResult bound = bounds::query(mu, rp.n, t);
        const Prob2 truth = binom_tail_any(rp.n, rp.p, ceil_tol(bound.threshold));
        auto h = b.head(id({rp.small ? "regime-small" : "regime-large", kv("n", rp.n), kv("p", to_string(rp.p)),
                            kv("t", t)}),
                        rp.small ? "regime-small" : "regime-large");
        h.n = rp.n;
        h.p = rp.p;
        b.add(compare(h, truth, bound));
    }

    // Independent variables with unequal means through the variance <= mean reduction.
    for (const std::uint64_t denom : {16u, 64u}) {
        std::vector<BigRational> means;
        for (std::uint64_t i = 0; i < 64; ++i) means.emplace_back(static_cast<std::int64_t>(i % 4 + 1), denom);
        const auto pair = bounds::hoeffding_bounds(means, 1, 2.0);
        for (const auto* bound : {&pair.upper, &pair.lower}) {
            const bool small = bound->family == bounds::Family::hoeffding_small;
            auto h = b.head(id({small ? "hoeffding-small" : "hoeffding-large", kv("n", std::uint64_t{64}),
                                kv("mean-denominator", std::uint64_t{denom})}),
                            "hoeffding-corollary");
            h.n = 64;
            b.add(compare(h, Prob2::from_exact(poisson_binomial_tail(means, ceil_tol(bound->threshold))), *bound));
        }
    }
}

// ---------------------------------------------------------------------------
// bennett

struct GameSpec {
    std::string id;
    Fraction v;
};

std::vector<GameSpec> bennett_games() {
    std::vector<GameSpec> out;
    for (const std::int64_t v : {1, 4, 64}) {
        const auto root = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(v)));
        out.push_back({"rademacher", Fraction(v)});
        out.push_back({v >= 4 ? "grouped-lower:2" : "grouped-lower:1", Fraction(v)});
        out.push_back({"burst:4", Fraction(v)});
        out.push_back({"burst:8", Fraction(v)});
        out.push_back({"stop:" + std::to_string(root) + ":rademacher", Fraction(v)});
        out.push_back({"stop:" + std::to_string(4 * root) + ":burst:4", Fraction(v)});
    }
    return out;
}

struct ThresholdSet {
    std::vector<double> values;

    void add(double t) { values.push_back(t); }
    void seal() {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end(),
                                 [](double a, double c) { return std::fabs(a - c) <= 1e-12 * std::max(1.0, std::fabs(a)); }),
                     values.end());
    }
    std::size_t index(double t) const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (std::fabs(values[i] - t) <= 1e-12 * std::max(1.0, std::fabs(t))) return i;
        }
        throw ContractError("threshold " + fmt(t) + " was not registered");
    }
};

void game_cases(SuiteBuilder& b, const GameSpec& spec) {
    const auto strategy = adversary::make_strategy(spec.id, spec.v);
    adversary::GameConfig config;
    config.v = spec.v;
    config.n = adversary::natural_length(*strategy, spec.v);
    const double v = to_double(spec.v);
    const double sqrt_v = std::sqrt(v);
    const bool integral_v = spec.v.denominator() == 1;
    const auto* grouped = dynamic_cast<const adversary::GroupedLowerStrategy*>(strategy.get());

    ThresholdSet ts;
    if (v >= 1.0) {
        for (int k = 1; k <= 4; ++k) ts.add(4.0 * k * sqrt_v);
        for (std::uint64_t k = 1; k * k <= static_cast<std::uint64_t>(v); ++k) ts.add(33.0 * static_cast<double>(k) * sqrt_v);
        for (const double r : {4.0, 8.0}) ts.add(3.0 * r * v);
        for (const double k : {2.0, 4.0}) ts.add(k * sqrt_v);
    } else {
        for (int k = 1; k <= 2; ++k) ts.add(k);
    }
    if (grouped) ts.add(static_cast<double>(grouped->k()) * sqrt_v / 4.0);
    ts.seal();

    const std::string base = id({spec.id, kv("v", to_string(spec.v))});
    const auto summary =
        montecarlo::summarize_games(*strategy, config, ts.values, b.plan.game_trials, b.seed_for("game/" + base));

    auto head = [&](const std::string& what, const std::string& anchor) {
        auto h = b.head(id({what, base}), anchor);
        h.n = config.n;
        h.v = spec.v;
        return h;
    };

    // Each catalog bound gets an empirical row, plus an exact row when the law of X is known.
    auto both = [&](const std::string& what, const std::string& anchor, const bounds::BoundResult& bound) {
        const std::size_t i = ts.index(bound.threshold);
        if (const auto exact = game_oracle(*strategy, spec.v, bound.threshold)) {
            b.add(compare(head(what + "-exact", anchor), *exact, bound));
        }
        b.add(compare(head(what + "-empirical", anchor), summary.final_tail(i), bound));
    };

    if (v >= 1.0) {
        for (int k = 1; k <= 4; ++k) both("bennett-poor-k" + std::to_string(k), "bennett-poor", bounds::bennett_poor_bound(v, k));
        for (std::uint64_t k = 1; k * k <= static_cast<std::uint64_t>(v); ++k) {
            both("bennett-small-k" + std::to_string(k), "bennett-small",
                 bounds::bennett_small_bound(v, static_cast<double>(k)));
        }
        for (const double r : {4.0, 8.0}) {
            both("bennett-large-r" + fmt(r), "bennett-large", bounds::bennett_large_bound(v, r));
        }
        if (integral_v) {
            for (const double k : {2.0, 4.0}) {
                const auto bound = bounds::chebyshev_max_bound(static_cast<std::uint64_t>(v), k);
                b.add(compare(head("prefix-max-k" + fmt(k), "prefix-max-chebyshev"),
                              summary.max_tail(ts.index(bound.threshold)), bound));
            }
        }
    } else {
        for (int k = 1; k <= 2; ++k) both("bennett-poor-k" + std::to_string(k), "bennett-poor", bounds::bennett_poor_bound(v, k));
    }

    // The game is a martingale and E[X^2] = E[sum v_i].
    const auto& m = summary.final_sum;
    b.add(empirical_value_case(head("martingale-mean", "martingale-mean"), m.ci_low, m.mean, m.ci_high, 0.0,
                               Relation::equal));
    const auto& sq = summary.square_minus_spent;
    b.add(empirical_value_case(head("square-minus-spent", "variance-additivity"), sq.ci_low, sq.mean, sq.ci_high, 0.0,
                               Relation::equal));
    b.add(exact_value_case(head("budget-safety", "budget-safety"), to_big(summary.max_spent), to_big(spec.v),
                           Relation::at_most));

    // Greedy variance partition with quota v/k^2 closes at most k^2 groups.
    if (integral_v) {
        const std::uint64_t k = v >= 4.0 ? 2 : 1;
        const Fraction quota = spec.v / static_cast<std::int64_t>(k * k);
        std::uint64_t most = 0;
        const std::uint64_t plays = 256;
        const std::uint64_t pseed = b.seed_for("partition/" + base);
        adversary::Trajectory traj;
        for (std::uint64_t i = 0; i < plays; ++i) {
            CounterRng rng(pseed, i);
            adversary::play(config, *strategy, rng, traj);
            most = std::max<std::uint64_t>(most, greedy_partition(traj.v_spent, quota).size());
        }
        auto h = head("greedy-partition-k" + std::to_string(k), "bennett-grouping");
        h.k = static_cast<double>(k);
        b.add(exact_value_case(h, BigRational(most), BigRational(k * k), Relation::at_most));
    }

    if (grouped) {
        const std::uint64_t k = grouped->k();
        const double t = static_cast<double>(k) * sqrt_v / 4.0;
        BigRational joint = 1;
        for (const auto& g : grouped->groups()) joint *= *walk_tail_any(g.size, g.target).exact();
        const double log2_bound = -2.0 * static_cast<double>(k * k);
        auto h = head("grouped-lower-tail", "bennett-lower");
        h.k = static_cast<double>(k);
        h.threshold = t;
        b.add(empirical_probability_case(h, summary.final_tail(ts.index(t)), log2_bound, Relation::at_least));
        auto he = head("grouped-lower-joint-exact", "bennett-lower");
        he.k = static_cast<double>(k);
        he.threshold = t;
        b.add(exact_probability_case(he, Prob2::from_exact(joint), log2_bound,
                                     BigRational(1) / power(BigRational(4), static_cast<unsigned>(k * k)),
                                     Relation::at_least));
        auto hj = head("grouped-lower-joint-empirical", "bennett-grouping");
        hj.k = static_cast<double>(k);
        hj.threshold = t;
        b.add(empirical_probability_case(hj, summary.joint_group_success(), log2_of(joint), Relation::equal));
    }
}

void bennett_suite(SuiteBuilder& b) {
    for (const auto& spec : bennett_games()) game_cases(b, spec);
    for (const auto& id_ : {"rademacher", "burst:4"}) game_cases(b, {id_, Fraction(1, 4)});

    // Diminishing growth on the fair walk: later crossings are no likelier than the first.
    const std::uint64_t n = 256;
    adversary::GameConfig config;
    config.n = n;
    config.v = Fraction(static_cast<std::int64_t>(n));
    const adversary::RademacherStrategy walk;
    const std::array<std::pair<int, int>, 3> pairs{{{4, 4}, {8, 4}, {8, 8}}};
    ThresholdSet ts;
    for (const auto& [alpha, beta] : pairs) {
        ts.add(alpha);
        ts.add(beta);
        ts.add(alpha + beta + 1);
    }
    ts.seal();
    const auto summary = montecarlo::summarize_games(walk, config, ts.values, b.plan.game_trials,
                                                     b.seed_for("diminishing-growth/n=256"));
    for (const auto& [alpha, beta] : pairs) {
        const std::size_t ia = ts.index(alpha);
        const std::size_t ib = ts.index(beta);
        const std::size_t ihit = ts.index(alpha + beta + 1);
        const auto cond = summary.conditional_max_tail(ihit, ib);
        const auto uncond = summary.max_tail(ia);
        const double width = std::max(cond.ci_high - cond.ci_low, uncond.ci_high - uncond.ci_low);
        auto h = b.head(id({"diminishing-growth-empirical", kv("n", n), kv("alpha", alpha), kv("beta", beta)}),
                        "diminishing-growth");
        h.n = n;
        h.threshold = alpha + beta + 1;
        b.add(empirical_value_case(h, cond.estimate, cond.estimate, cond.estimate, uncond.estimate + 3.0 * width,
                                   Relation::at_most));

        const auto hit = oracle::prefix_max_tail(n, alpha + beta + 1, oracle::PrefixMaxMethod::reflection,
                                                 oracle::Mode::exact);
        const auto given = oracle::prefix_max_tail(n, beta, oracle::PrefixMaxMethod::reflection, oracle::Mode::exact);
        const auto first = oracle::prefix_max_tail(n, alpha, oracle::PrefixMaxMethod::reflection, oracle::Mode::exact);
        auto he = b.head(id({"diminishing-growth-exact", kv("n", n), kv("alpha", alpha), kv("beta", beta)}),
                         "diminishing-growth");
        he.n = n;
        he.threshold = alpha + beta + 1;
        b.add(exact_value_case(he, *hit.exact() / *given.exact(), *first.exact(), Relation::at_most));
    }
}

// ---------------------------------------------------------------------------
// appendix

void appendix_suite(SuiteBuilder& b) {
    const std::uint64_t top = b.plan.full ? 64 : 16;
    for (std::uint64_t root = 4; root <= top; ++root) {
        const std::uint64_t n = root * root;
        auto h = b.head(id({"majority-quarter", kv("n", n)}), "appendix-majority");
        h.n = n;
        h.threshold = static_cast<double>(root) / 4.0;
        b.add(exact_probability_case(h, walk_tail_any(n, static_cast<double>(root) / 4.0), -2.0, BigRational(1, 4),
                                     Relation::at_least));
    }

    const std::uint64_t r_top = b.plan.full ? 32 : 8;
    for (std::uint64_t r = 1; r <= r_top; ++r) {
        auto h = b.head(id({"hitting-mean-exact", kv("r", r)}), "hitting-time");
        h.r = static_cast<double>(r);
        b.add(exact_value_case(h, oracle::hitting_time_mean_exact({r, std::nullopt}), BigRational(r * r),
                               Relation::equal));
    }

    const std::array<std::pair<std::uint64_t, std::uint64_t>, 3> runs{{{2, 1024}, {4, 2048}, {8, 4096}}};
    for (const auto& [r, horizon] : runs) {
        const std::string key = id({"hitting-mean-empirical", kv("r", r), kv("horizon", horizon)});
        const auto e = montecarlo::estimate_hitting_time(r, horizon, b.plan.hitting_trials, b.seed_for(key));
        auto h = b.head(key, "hitting-time");
        h.r = static_cast<double>(r);
        h.n = horizon;
        const double three_se = 3.0 * e.time.std_error;
        b.add(empirical_value_case(h, e.time.mean - three_se, e.time.mean, e.time.mean + three_se,
                                   static_cast<double>(r * r), Relation::equal));
        auto ht = b.head(id({"hitting-truncated", kv("r", r), kv("horizon", horizon)}), "hitting-time");
        ht.r = static_cast<double>(r);
        ht.n = horizon;
        b.add(empirical_value_case(ht, e.truncated_fraction, e.truncated_fraction, e.truncated_fraction,
                                   r <= 2 ? 1e-3 : 1e-2, Relation::at_most));
    }
}

const std::vector<std::pair<Suite, std::vector<std::string>>>& anchor_table() {
    static const std::vector<std::pair<Suite, std::vector<std::string>>> table{
        {Suite::fair,
         {"extended-chebyshev", "prefix-max-reflection", "poor-mans-chernoff", "fair-chernoff-upper",
          "fair-coins-lower"}},
        {Suite::geo, {"geo-sum", "geo-sum-integer", "geo-sum-witness", "conditional-geo-sum"}},
        {Suite::large,
         {"large-deviation-upper", "large-deviation-lower", "regime-small", "regime-large", "hoeffding-corollary"}},
        {Suite::bennett,
         {"bennett-poor", "bennett-small", "bennett-large", "bennett-lower", "bennett-grouping",
          "variance-additivity", "prefix-max-chebyshev", "diminishing-growth", "martingale-mean", "budget-safety"}},
        {Suite::appendix, {"appendix-majority", "hitting-time"}},
    };
    return table;
}

void run_one(Suite s, SuiteBuilder& b) {
    switch (s) {
        case Suite::fair: fair_suite(b); break;
        case Suite::geo: geo_suite(b); break;
        case Suite::large: large_suite(b); break;
        case Suite::bennett: bennett_suite(b); break;
        case Suite::appendix: appendix_suite(b); break;
        case Suite::all: break;
    }
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::string_view key) { return splitmix64(seed ^ fnv1a(key)); }

std::string_view to_string(Suite s) noexcept {
    switch (s) {
        case Suite::fair: return "fair";
        case Suite::geo: return "geo";
        case Suite::large: return "large";
        case Suite::bennett: return "bennett";
        case Suite::appendix: return "appendix";
        case Suite::all: return "all";
    }
    return "?";
}

std::string_view to_string(Scale s) noexcept { return s == Scale::quick ? "quick" : "full"; }

Suite parse_suite(std::string_view name) {
    for (const Suite s : {Suite::fair, Suite::geo, Suite::large, Suite::bennett, Suite::appendix, Suite::all}) {
        if (to_string(s) == name) return s;
    }
    throw LookupError("unknown suite '" + std::string(name) + "'");
}

Scale parse_scale(std::string_view name) {
    if (name == "quick") return Scale::quick;
    if (name == "full") return Scale::full;
    throw LookupError("unknown scale '" + std::string(name) + "' (expected quick or full)");
}

std::string_view to_string(TruthKind k) noexcept {
    switch (k) {
        case TruthKind::exact: return "exact";
        case TruthKind::empirical: return "empirical";
        case TruthKind::exact_value: return "exact-value";
        case TruthKind::empirical_value: return "empirical-value";
        case TruthKind::skipped: return "skipped";
    }
    return "?";
}

std::string_view to_string(Relation r) noexcept {
    switch (r) {
        case Relation::at_most: return "truth<=bound";
        case Relation::at_least: return "truth>=bound";
        case Relation::equal: return "truth==bound";
    }
    return "?";
}

TruthKind parse_truth_kind(std::string_view id) {
    for (const TruthKind k : {TruthKind::exact, TruthKind::empirical, TruthKind::exact_value,
                              TruthKind::empirical_value, TruthKind::skipped}) {
        if (to_string(k) == id) return k;
    }
    throw LookupError("unknown truth kind '" + std::string(id) + "'");
}

Relation parse_relation(std::string_view id) {
    for (const Relation r : {Relation::at_most, Relation::at_least, Relation::equal}) {
        if (to_string(r) == id) return r;
    }
    throw LookupError("unknown direction '" + std::string(id) + "'");
}

bool recompute_pass(const VerificationCase& c) {
    switch (c.truth_kind) {
        case TruthKind::skipped: return true;
        case TruthKind::exact:
        case TruthKind::exact_value: {
            if (c.exact_truth && c.exact_bound) return relation_holds(c.relation, *c.exact_truth, *c.exact_bound);
            const double slack = c.truth_kind == TruthKind::exact
                                     ? kLogSlack
                                     : 1e-9 * std::max(1.0, std::fabs(c.log2_bound));
            switch (c.relation) {
                case Relation::at_most: return c.log2_truth <= c.log2_bound + slack;
                case Relation::at_least: return c.log2_truth >= c.log2_bound - slack;
                case Relation::equal: return std::fabs(c.log2_truth - c.log2_bound) <= slack;
            }
            return false;
        }
        case TruthKind::empirical:
        case TruthKind::empirical_value: {
            const double bound = c.truth_kind == TruthKind::empirical ? std::exp2(c.log2_bound) : c.log2_bound;
            switch (c.relation) {
                case Relation::at_most: return c.ci_low <= bound;
                case Relation::at_least: return c.ci_high >= bound;
                case Relation::equal: return c.ci_low <= bound && bound <= c.ci_high;
            }
            return false;
        }
    }
    return false;
}

VerificationCase compare(CaseHeader c, const Prob2& truth, const bounds::BoundResult& bound,
                         std::optional<bounds::Direction> expected) {
    check_direction(bound, expected);
    adopt_bound(c, bound);
    c.log2_truth = truth.log2();
    c.ci_low = c.ci_high = truth.value();
    c.exact_truth = truth.exact();
    if (skip_unusable(c, bound)) return c;
    c.truth_kind = TruthKind::exact;
    c.pass = recompute_pass(c);
    return c;
}

VerificationCase compare(CaseHeader c, const montecarlo::SimulationReport& truth, const bounds::BoundResult& bound,
                         std::optional<bounds::Direction> expected) {
    check_direction(bound, expected);
    adopt_bound(c, bound);
    c.exact_bound.reset();
    c.log2_truth = std::log2(truth.estimate);
    c.ci_low = truth.ci_low;
    c.ci_high = truth.ci_high;
    if (skip_unusable(c, bound)) return c;
    if (bound.log2_bound < std::log2(kRareEventFloor)) {
        c.truth_kind = TruthKind::skipped;
        c.note = "oracle-only: bound below sampling floor";
        c.pass = true;
        return c;
    }
    c.truth_kind = TruthKind::empirical;
    c.pass = recompute_pass(c);
    return c;
}

VerificationCase exact_value_case(CaseHeader c, const BigRational& truth, const BigRational& expected,
                                  Relation relation) {
    c.truth_kind = TruthKind::exact_value;
    c.relation = relation;
    c.log2_truth = to_double(truth);
    c.log2_bound = to_double(expected);
    c.ci_low = c.ci_high = c.log2_truth;
    c.exact_truth = truth;
    c.exact_bound = expected;
    c.pass = recompute_pass(c);
    return c;
}

VerificationCase empirical_value_case(CaseHeader c, double low, double estimate, double high, double expected,
                                      Relation relation) {
    c.truth_kind = TruthKind::empirical_value;
    c.relation = relation;
    c.log2_truth = estimate;
    c.ci_low = low;
    c.ci_high = high;
    c.log2_bound = expected;
    c.pass = recompute_pass(c);
    return c;
}

VerificationCase exact_probability_case(CaseHeader c, const Prob2& truth, double log2_bound,
                                        std::optional<BigRational> exact_bound, Relation relation) {
    c.truth_kind = TruthKind::exact;
    c.relation = relation;
    c.log2_truth = truth.log2();
    c.ci_low = c.ci_high = truth.value();
    c.log2_bound = log2_bound;
    c.exact_truth = truth.exact();
    c.exact_bound = std::move(exact_bound);
    c.pass = recompute_pass(c);
    return c;
}

VerificationCase empirical_probability_case(CaseHeader c, const montecarlo::SimulationReport& truth,
                                            double log2_bound, Relation relation) {
    c.truth_kind = TruthKind::empirical;
    c.relation = relation;
    c.log2_truth = std::log2(truth.estimate);
    c.ci_low = truth.ci_low;
    c.ci_high = truth.ci_high;
    c.log2_bound = log2_bound;
    if (relation != Relation::equal && log2_bound < std::log2(kRareEventFloor)) {
        c.truth_kind = TruthKind::skipped;
        c.note = "oracle-only: bound below sampling floor";
        c.pass = true;
        return c;
    }
    c.pass = recompute_pass(c);
    return c;
}

std::size_t VerificationReport::skipped() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [](const auto& c) { return c.truth_kind == TruthKind::skipped; }));
}

std::size_t VerificationReport::failed() const noexcept {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.pass; }));
}

std::string VerificationReport::summary() const {
    std::ostringstream out;
    out << "suite=" << suite << " scale=" << scale << " seed=" << seed << " cases=" << cases.size()
        << " failed=" << failed() << " skipped=" << skipped() << " digest=" << config_digest << ' '
        << (overall_pass ? "PASS" : "FAIL");
    return out.str();
}

VerificationReport run_suite(Suite suite, Scale scale, std::uint64_t seed) {
    VerificationReport report;
    report.suite = std::string(to_string(suite));
    report.scale = std::string(to_string(scale));
    report.seed = seed;

    const Plan plan = plan_for(scale);
    const std::vector<Suite> order = suite == Suite::all
                                         ? std::vector<Suite>{Suite::fair, Suite::geo, Suite::large, Suite::bennett,
                                                              Suite::appendix}
                                         : std::vector<Suite>{suite};
    for (const Suite s : order) {
        SuiteBuilder b{to_string(s), plan, seed, {}};
        run_one(s, b);
        for (auto& c : b.cases) report.cases.push_back(std::move(c));
    }

    std::uint64_t h = fnv1a(report.suite + "|" + report.scale + "|" + std::to_string(seed));
    for (const auto& c : report.cases) h = fnv1a("|" + c.case_id, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    report.config_digest = buf;

    report.overall_pass = std::all_of(report.cases.begin(), report.cases.end(), [](const auto& c) { return c.pass; });
    return report;
}

VerificationReport run_suite(std::string_view name, Scale scale, std::uint64_t seed) {
    return run_suite(parse_suite(name), scale, seed);
}

std::vector<std::string> anchors_for(Suite suite) {
    std::vector<std::string> out;
    for (const auto& [s, anchors] : anchor_table()) {
        if (suite == Suite::all || suite == s) out.insert(out.end(), anchors.begin(), anchors.end());
    }
    return out;
}

std::vector<std::string> audit_coverage(const VerificationReport& report, Suite suite) {
    std::vector<std::string> missing;
    for (const auto& anchor : anchors_for(suite)) {
        const bool covered = std::any_of(report.cases.begin(), report.cases.end(),
                                         [&](const auto& c) { return c.anchor == anchor; });
        if (!covered) missing.push_back(anchor);
    }
    return missing;
}

void write_csv(const VerificationReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& c : report.cases) {
        out << c.suite << ',' << c.case_id << ',';
        if (c.n) out << *c.n;
        out << ',';
        if (c.p) out << numerator(*c.p) << ',' << denominator(*c.p);
        else out << ',';
        out << ',';
        if (c.k) out << fmt(*c.k);
        out << ',';
        if (c.r) out << fmt(*c.r);
        out << ',';
        if (c.v) out << to_string(*c.v);
        out << ',';
        if (c.threshold) out << fmt(*c.threshold);
        out << ',' << to_string(c.truth_kind) << ',' << fmt(c.log2_truth) << ',' << fmt(c.ci_low) << ','
            << fmt(c.ci_high) << ',' << fmt(c.log2_bound) << ',' << to_string(c.relation) << ','
            << (c.pass ? "true" : "false") << '\n';
    }
}

std::string to_csv(const VerificationReport& report) {
    std::ostringstream out;
    write_csv(report, out);
    return out.str();
}

std::vector<std::size_t> greedy_partition(std::span<const Fraction> variances, const Fraction& quota) {
    if (quota <= Fraction(0)) throw DomainError("partition quota must be positive");
    std::vector<std::size_t> closes;
    Fraction running(0);
    for (std::size_t i = 0; i < variances.size(); ++i) {
        running += variances[i];
        if (running >= quota) {
            closes.push_back(i + 1);
            running = 0;
        }
    }
    return closes;
}

BigRational adaptive_geometric_tail(std::uint64_t n, const BigRational& p, std::int64_t t) {
    if (p <= 0 || p >= 1) throw DomainError("geometric parameter must lie in (0, 1)");
    if (t <= 0) return 1;
    const auto width = static_cast<std::size_t>(t);
    std::vector<BigRational> alive(width, BigRational(0));
    alive[0] = 1;
    BigRational reached = 0;
    for (std::uint64_t step = 0; step < n; ++step) {
        std::vector<BigRational> next(width, BigRational(0));
        for (std::size_t s = 0; s < width; ++s) {
            if (alive[s] == 0) continue;
            const BigRational q = (s % 2 == 0) ? p : p / 2;
            BigRational qj = 1;  // q^j
            for (std::size_t j = 0; s + j < width; ++j) {
                next[s + j] += alive[s] * qj * (1 - q);
                qj *= q;
            }
            reached += alive[s] * qj;  // Pr[Y >= t - s]
        }
        alive = std::move(next);
    }
    return reached;
}

}  // namespace tailcert::verify
