#include "cli.hpp"

#include "tailcert/adversary.hpp"
#include "tailcert/bounds.hpp"
#include "tailcert/error.hpp"
#include "tailcert/montecarlo.hpp"
#include "tailcert/oracle.hpp"
#include "tailcert/serialize.hpp"
#include "tailcert/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace tailcert::cli {

namespace {

using serialize::Json;

class UsageError : public Error {
public:
    using Error::Error;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// String-valued options of one subcommand, looked up by long name.
class Options {
public:
    explicit Options(CLI::App* app) : app_(app) {}

    void add(const std::string& name, const std::string& help) {
        app_->add_option("--" + name, values_[name], help);
    }
    void flag(const std::string& name, const std::string& help) { app_->add_flag("--" + name, flags_[name], help); }

    bool has(const std::string& name) const { return app_->count("--" + name) > 0; }
    const std::string& raw(const std::string& name) const {
        if (!has(name)) throw UsageError("missing required flag --" + name);
        return values_.at(name);
    }
    bool on(const std::string& name) const { return flags_.count(name) && flags_.at(name); }

    std::uint64_t count(const std::string& name) const {
        const std::string& s = raw(name);
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw UsageError("--" + name + " expects a non-negative integer, got '" + s + "'");
        }
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw UsageError("--" + name + " is out of range: '" + s + "'");
        }
    }
    std::int64_t integer(const std::string& name) const {
        const std::string& s = raw(name);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError("--" + name + " expects an integer, got '" + s + "'");
        return v;
    }
    BigRational rational(const std::string& name) const {
        try {
            return parse_rational(raw(name));
        } catch (const DomainError& e) {
            throw UsageError("--" + name + ": " + e.what());
        }
    }
    Fraction fraction(const std::string& name) const {
        try {
            return parse_fraction(raw(name));
        } catch (const DomainError& e) {
            throw UsageError("--" + name + ": " + e.what());
        }
    }
    /// Reals accept the rational grammar too ("1/2", "0.25", "8") and plain doubles.
    double real(const std::string& name) const {
        const std::string& s = raw(name);
        try {
            return to_double(parse_rational(s));
        } catch (const DomainError&) {
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) {
            throw UsageError("--" + name + " expects a number, got '" + s + "'");
        }
        return v;
    }

    /// Rejects every given flag outside `allowed` (plus the shared ones).
    void only(const std::set<std::string>& allowed, const std::string& context) const {
        static const std::set<std::string> shared{"json", "seed", "config"};
        for (const auto& [name, _] : values_) {
            if (has(name) && !allowed.count(name) && !shared.count(name)) {
                throw UsageError("--" + name + " does not apply to " + context);
            }
        }
        for (const auto& [name, _] : flags_) {
            if (has(name) && !allowed.count(name) && !shared.count(name)) {
                throw UsageError("--" + name + " does not apply to " + context);
            }
        }
    }

private:
    CLI::App* app_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> flags_;
};

std::uint64_t seed_of(const Options& o) { return o.has("seed") ? o.count("seed") : 0; }

// ---------------------------------------------------------------------------
// printing

void print_prob(std::ostream& out, const Prob2& p, const std::string& prefix = "") {
    out << prefix << "log2: " << fmt(p.log2()) << '\n';
    out << prefix << "value: " << p.scientific() << '\n';
    if (p.exact()) out << prefix << "exact: " << to_string(*p.exact()) << '\n';
}

void print_bound(std::ostream& out, const bounds::BoundResult& b) {
    out << "family: " << bounds::to_string(b.family) << '\n';
    out << "direction: " << bounds::to_string(b.direction) << '\n';
    out << "threshold: " << fmt(b.threshold) << '\n';
    out << "log2_bound: " << fmt(b.log2_bound) << '\n';
    out << "bound: " << scientific_from_log2(b.log2_bound) << '\n';
    if (b.exact_bound) out << "exact_bound: " << to_string(*b.exact_bound) << '\n';
    out << "valid: " << (b.valid ? "true" : "false") << '\n';
    if (!b.violated.empty()) {
        out << "violated:";
        for (const auto& v : b.violated) out << ' ' << v;
        out << '\n';
    }
    out << "vacuous: " << (b.vacuous ? "true" : "false") << '\n';
    out << "citation: " << b.citation << '\n';
}

void print_simulation(std::ostream& out, const montecarlo::SimulationReport& r) {
    out << "subject: " << r.subject << '\n';
    out << "trials: " << r.trials << '\n';
    out << "successes: " << r.successes << '\n';
    out << "estimate: " << fmt(r.estimate) << '\n';
    out << "ci: [" << fmt(r.ci_low) << ", " << fmt(r.ci_high) << "] (" << r.ci_method << ", level "
        << fmt(r.ci_level) << ")\n";
    out << "seed: " << r.seed << '\n';
}

// ---------------------------------------------------------------------------
// bound

int run_bound(const Options& o, std::ostream& out) {
    const std::string family = o.raw("family");
    const std::string context = "family " + family;
    bounds::BoundResult b;

    auto int_k = [&] { return o.integer("k"); };
    if (family == "query") {
        o.only({"family", "n", "p", "t"}, context);
        const std::uint64_t n = o.count("n");
        const double mu = to_double(o.rational("p")) * static_cast<double>(n);
        b = bounds::query(mu, n, o.real("t"));
    } else {
        const bounds::Family f = bounds::parse_family(family);
        switch (f) {
            case bounds::Family::chebyshev_max:
                o.only({"family", "n", "k"}, context);
                b = bounds::chebyshev_max_bound(o.count("n"), o.real("k"));
                break;
            case bounds::Family::poor_fair:
                o.only({"family", "n", "k"}, context);
                b = bounds::poor_fair_bound(o.count("n"), int_k());
                break;
            case bounds::Family::geo_sum:
            case bounds::Family::geo_sum_int:
                o.only({"family", "n", "p"}, context);
                b = bounds::geo_sum_bound(o.count("n"), o.rational("p"), f == bounds::Family::geo_sum_int);
                break;
            case bounds::Family::fair_upper:
                o.only({"family", "n", "k"}, context);
                b = bounds::fair_upper_bound(o.count("n"), int_k());
                break;
            case bounds::Family::fair_lower:
                o.only({"family", "n", "k"}, context);
                b = bounds::fair_lower_bound(o.count("n"), int_k());
                break;
            case bounds::Family::large_upper:
            case bounds::Family::large_lower: {
                o.only({"family", "n", "p", "r"}, context);
                const auto pair = bounds::large_dev_bounds(o.count("n"), o.rational("p"), o.real("r"));
                b = f == bounds::Family::large_upper ? pair.upper : pair.lower;
                break;
            }
            case bounds::Family::bennett_poor_high_v:
            case bounds::Family::bennett_poor_low_v: {
                o.only({"family", "v", "k"}, context);
                const double v = o.real("v");
                const bool high = f == bounds::Family::bennett_poor_high_v;
                if (high != (v >= 1.0)) {
                    throw UsageError(family + (high ? " needs v >= 1" : " needs v < 1") + ", got v = " + fmt(v));
                }
                b = bounds::bennett_poor_bound(v, int_k());
                break;
            }
            case bounds::Family::bennett_small:
                o.only({"family", "v", "k"}, context);
                b = bounds::bennett_small_bound(o.real("v"), o.real("k"));
                break;
            case bounds::Family::bennett_large:
                o.only({"family", "v", "r"}, context);
                b = bounds::bennett_large_bound(o.real("v"), o.real("r"));
                break;
            case bounds::Family::hoeffding_small:
            case bounds::Family::hoeffding_large: {
                const bool small = f == bounds::Family::hoeffding_small;
                o.only({"family", "n", "p", small ? "k" : "r"}, context);
                const std::vector<BigRational> means(o.count("n"), o.rational("p"));
                const auto pair = small ? bounds::hoeffding_bounds(means, int_k(), 1.0)
                                        : bounds::hoeffding_bounds(means, 1, o.real("r"));
                b = small ? pair.upper : pair.lower;
                break;
            }
        }
    }
    if (o.on("json")) {
        out << serialize::dump(serialize::to_json(b));
    } else {
        print_bound(out, b);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// exact

std::optional<oracle::Mode> mode_of(const Options& o) {
    if (!o.has("mode")) return std::nullopt;
    const auto& m = o.raw("mode");
    if (m == "exact") return oracle::Mode::exact;
    if (m == "float") return oracle::Mode::float_log;
    throw UsageError("--mode expects exact or float, got '" + m + "'");
}

int run_exact(const Options& o, std::ostream& out) {
    const std::string kind = o.raw("kind");
    const std::string context = "kind " + kind;
    const bool json = o.on("json");
    Json j;
    j["kind"] = kind;

    auto emit_prob = [&](const Prob2& p) {
        if (json) {
            j["result"] = serialize::to_json(p);
            out << serialize::dump(j);
        } else {
            print_prob(out, p);
        }
    };

    if (kind == "binom") {
        o.only({"kind", "n", "p", "t", "mode"}, context);
        const std::uint64_t n = o.count("n");
        const auto p = o.rational("p");
        const auto t = o.integer("t");
        j["n"] = n;
        j["p"] = to_string(p);
        j["t"] = t;
        emit_prob(oracle::binom_tail(n, p, t, mode_of(o).value_or(oracle::default_mode(n))));
    } else if (kind == "walk") {
        o.only({"kind", "n", "t", "mode"}, context);
        const std::uint64_t n = o.count("n");
        const auto t = o.integer("t");
        j["n"] = n;
        j["t"] = t;
        emit_prob(oracle::walk_tail(n, t, mode_of(o)));
    } else if (kind == "prefix-max") {
        o.only({"kind", "n", "m", "method", "mode"}, context);
        const std::uint64_t n = o.count("n");
        const auto m = o.integer("m");
        oracle::PrefixMaxMethod method = oracle::PrefixMaxMethod::reflection;
        if (o.has("method")) {
            const auto& name = o.raw("method");
            if (name == "dp") method = oracle::PrefixMaxMethod::dp;
            else if (name != "reflection") throw UsageError("--method expects dp or reflection, got '" + name + "'");
        }
        j["n"] = n;
        j["m"] = m;
        emit_prob(oracle::prefix_max_tail(n, m, method, mode_of(o)));
    } else if (kind == "hitting") {
        o.only({"kind", "r", "horizon"}, context);
        oracle::HittingQuery q;
        q.r = o.count("r");
        if (o.has("horizon")) q.horizon = o.count("horizon");
        const BigRational mean = oracle::hitting_time_mean_exact(q);
        if (json) {
            j["r"] = q.r;
            j["horizon"] = q.horizon ? Json(*q.horizon) : Json(nullptr);
            j["result"] = {{"exact", to_string(mean)}, {"value", serialize::real(to_double(mean))}};
            out << serialize::dump(j);
        } else {
            out << to_string(mean) << '\n';
        }
    } else if (kind == "compositions") {
        o.only({"kind", "total", "parts"}, context);
        const std::uint64_t total = o.count("total");
        const std::uint64_t parts = o.count("parts");
        const BigInt count = oracle::compositions_count(total, parts);
        if (json) {
            j["total"] = total;
            j["parts"] = parts;
            j["result"] = count.str();
            out << serialize::dump(j);
        } else {
            out << count.str() << '\n';
        }
    } else if (kind == "geo-sum") {
        o.only({"kind", "n", "p", "t", "cap"}, context);
        const std::uint64_t n = o.count("n");
        const auto p = o.rational("p");
        const auto t = o.integer("t");
        std::optional<std::int64_t> cap;
        if (o.has("cap")) cap = o.integer("cap");
        const auto bracket = oracle::geometric_sum_tail(n, p, t, cap);
        if (json) {
            j["n"] = n;
            j["p"] = to_string(p);
            j["t"] = t;
            j["result"] = {{"lower", serialize::to_json(bracket.lower)}, {"upper", serialize::to_json(bracket.upper)}};
            out << serialize::dump(j);
        } else {
            print_prob(out, bracket.lower, "lower.");
            print_prob(out, bracket.upper, "upper.");
        }
    } else {
        throw UsageError("unknown --kind '" + kind + "' (binom, walk, prefix-max, hitting, compositions, geo-sum)");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(const Options& o, std::ostream& out) {
    o.only({"strategy", "v", "n", "threshold", "trials", "level", "budget-mode", "trajectory"}, "simulate");
    montecarlo::GameSubject subject;
    subject.strategy_id = o.raw("strategy");
    subject.config.v = o.fraction("v");
    subject.config.n = o.has("n") ? o.count("n") : 0;
    subject.config.seed = seed_of(o);
    if (o.has("budget-mode")) {
        const auto& m = o.raw("budget-mode");
        if (m == "exactly") subject.config.budget_mode = adversary::BudgetMode::exactly;
        else if (m != "at-most") throw UsageError("--budget-mode expects at-most or exactly, got '" + m + "'");
    }
    const double threshold = o.real("threshold");
    const std::uint64_t trials = o.has("trials") ? o.count("trials") : 100000;
    const double level = o.has("level") ? o.real("level") : montecarlo::kDefaultLevel;

    const auto strategy = adversary::make_strategy(subject.strategy_id, subject.config.v);
    if (subject.config.n == 0) subject.config.n = adversary::natural_length(*strategy, subject.config.v);

    if (o.has("trajectory")) {
        std::ofstream file(o.raw("trajectory"));
        if (!file) throw UsageError("cannot write trajectory to '" + o.raw("trajectory") + "'");
        adversary::play(subject.config, *strategy).write_csv(file);
    }

    const auto report = montecarlo::estimate_tail(subject, threshold, trials, subject.config.seed, level);
    if (o.on("json")) {
        out << serialize::dump(serialize::to_json(report));
    } else {
        print_simulation(out, report);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const Options& o, std::ostream& out) {
    o.only({"suite", "scale", "out", "format"}, "verify");
    const verify::Suite suite = verify::parse_suite(o.has("suite") ? o.raw("suite") : "all");
    const verify::Scale scale = verify::parse_scale(o.has("scale") ? o.raw("scale") : "quick");
    const auto report = verify::run_suite(suite, scale, seed_of(o));
    const auto missing = verify::audit_coverage(report, suite);

    if (o.has("out")) {
        const std::string path = o.raw("out");
        std::string format = o.has("format") ? o.raw("format") : "";
        if (format.empty()) format = path.size() >= 5 && path.ends_with(".json") ? "json" : "csv";
        if (format != "csv" && format != "json") throw UsageError("--format expects csv or json");
        std::ofstream file(path, std::ios::binary);
        if (!file) throw UsageError("cannot write report to '" + path + "'");
        if (format == "json") file << serialize::dump(serialize::to_json(report));
        else verify::write_csv(report, file);
    } else if (o.has("format")) {
        throw UsageError("--format needs --out");
    }

    const bool ok = report.overall_pass && missing.empty();
    if (o.on("json")) {
        Json j;
        j["suite"] = report.suite;
        j["scale"] = report.scale;
        j["seed"] = report.seed;
        j["config_digest"] = report.config_digest;
        j["cases"] = report.cases.size();
        j["failed"] = report.failed();
        j["skipped"] = report.skipped();
        j["uncovered_anchors"] = missing;
        j["overall_pass"] = ok;
        out << serialize::dump(j);
    } else {
        out << report.summary();
        if (!missing.empty()) {
            out << " uncovered:";
            for (const auto& a : missing) out << ' ' << a;
        }
        out << '\n';
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

// ---------------------------------------------------------------------------
// config file

std::vector<std::string> with_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].starts_with("--config=")) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream file(path);
    if (!file) throw UsageError("cannot read config file '" + path + "'");
    Json cfg;
    try {
        cfg = Json::parse(file);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a flat JSON object");

    auto given = [&](const std::string& key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
    };
    std::vector<std::string> out = args;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "config" || given(key)) continue;  // flags win over the file
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back("--" + key);
        } else if (value.is_string()) {
            out.push_back("--" + key);
            out.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            out.push_back("--" + key);
            out.push_back(value.dump());
        } else {
            throw UsageError("config key '" + key + "' must be a string, number or boolean");
        }
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tailcert: tail bounds, exact oracles, adaptive-game simulation and verification sweeps"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat JSON object whose keys mirror the flags; flags take precedence");

    auto common = [](Options& o) {
        o.flag("json", "print JSON instead of text");
        o.add("seed", "64-bit seed (default 0)");
        o.add("config", "flat JSON config file");
    };

    CLI::App* bound_cmd = app.add_subcommand("bound", "evaluate a closed-form tail bound");
    Options bound_opts(bound_cmd);
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"family", "bound family id, or 'query' for the regime selector"},
             {"n", "number of variables"},
             {"p", "success probability, e.g. 1/16"},
             {"k", "deviation in standard deviations"},
             {"r", "deviation as a multiple of the mean or budget"},
             {"v", "variance budget"},
             {"t", "threshold (query only)"}}) {
        bound_opts.add(name, help);
    }
    common(bound_opts);

    CLI::App* exact_cmd = app.add_subcommand("exact", "exact oracle values");
    Options exact_opts(exact_cmd);
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"kind", "binom, walk, prefix-max, hitting, compositions or geo-sum"},
             {"n", "number of steps or variables"},
             {"p", "probability, e.g. 1/8"},
             {"t", "threshold"},
             {"m", "prefix-max level"},
             {"r", "hitting level"},
             {"horizon", "hitting-time horizon"},
             {"total", "composition total"},
             {"parts", "composition parts"},
             {"cap", "geo-sum per-variable truncation"},
             {"method", "prefix-max method: dp or reflection"},
             {"mode", "exact or float"}}) {
        exact_opts.add(name, help);
    }
    common(exact_opts);

    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo tail of an adaptive-game strategy");
    Options sim_opts(sim_cmd);
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"strategy", "rademacher, grouped-lower:k, burst:r or stop:tau:inner"},
             {"v", "variance budget"},
             {"n", "number of steps (default: the strategy's natural length)"},
             {"threshold", "tail threshold"},
             {"trials", "number of trials (default 100000)"},
             {"level", "confidence level (default 0.99)"},
             {"budget-mode", "at-most (default) or exactly"},
             {"trajectory", "also write the CSV trajectory of one seeded game to this path"}}) {
        sim_opts.add(name, help);
    }
    common(sim_opts);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    Options verify_opts(verify_cmd);
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"suite", "fair, geo, large, bennett, appendix or all (default all)"},
             {"scale", "quick (default) or full"},
             {"out", "report path"},
             {"format", "csv or json (default: from the --out extension)"}}) {
        verify_opts.add(name, help);
    }
    common(verify_opts);

    try {
        std::vector<std::string> argv = with_config(args);
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*bound_cmd) return run_bound(bound_opts, out);
        if (*exact_cmd) return run_exact(exact_opts, out);
        if (*sim_cmd) return run_simulate(sim_opts, out);
        if (*verify_cmd) return run_verify(verify_opts, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

}  // namespace tailcert::cli
