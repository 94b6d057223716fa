#include "tailcert/serialize.hpp"

#include "tailcert/error.hpp"

#include <cmath>
#include <limits>

namespace tailcert::serialize {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("JSON field '") + key + "' missing");
    return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("JSON field '") + key + "': " + e.what());
    }
}

Json optional_real(const std::optional<double>& x) { return x ? real(*x) : Json(nullptr); }

std::optional<double> optional_real_from(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return real_from(j.at(key));
}

Json optional_rational(const std::optional<BigRational>& q) { return q ? Json(to_string(*q)) : Json(nullptr); }

std::optional<BigRational> optional_rational_from(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return parse_rational(get<std::string>(j, key));
}

}  // namespace

Json real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double real_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw DomainError("expected a real number in JSON, got " + j.dump());
}

Json to_json(const Prob2& p) {
    Json j;
    j["log2"] = real(p.log2());
    j["scientific"] = p.scientific();
    j["exact"] = optional_rational(p.exact());
    return j;
}

Prob2 prob_from_json(const Json& j) {
    if (auto exact = optional_rational_from(j, "exact")) return Prob2::from_exact(std::move(*exact));
    return Prob2::from_log2(real_from(field(j, "log2")));
}

Json to_json(const bounds::BoundResult& b) {
    Json j;
    j["family"] = std::string(bounds::to_string(b.family));
    j["direction"] = std::string(bounds::to_string(b.direction));
    j["threshold"] = real(b.threshold);
    j["log2_bound"] = real(b.log2_bound);
    j["log2_raw"] = real(b.log2_raw);
    j["scientific"] = scientific_from_log2(b.log2_bound);
    j["valid"] = b.valid;
    j["vacuous"] = b.vacuous;
    j["violated"] = b.violated;
    j["citation"] = b.citation;
    j["exact_bound"] = optional_rational(b.exact_bound);
    j["k"] = optional_real(b.k);
    j["r"] = optional_real(b.r);
    return j;
}

bounds::BoundResult bound_from_json(const Json& j) {
    bounds::BoundResult b;
    b.family = bounds::parse_family(get<std::string>(j, "family"));
    b.direction = bounds::parse_direction(get<std::string>(j, "direction"));
    b.threshold = real_from(field(j, "threshold"));
    b.log2_bound = real_from(field(j, "log2_bound"));
    b.log2_raw = real_from(field(j, "log2_raw"));
    b.valid = get<bool>(j, "valid");
    b.vacuous = get<bool>(j, "vacuous");
    b.violated = get<std::vector<std::string>>(j, "violated");
    b.citation = get<std::string>(j, "citation");
    b.exact_bound = optional_rational_from(j, "exact_bound");
    b.k = optional_real_from(j, "k");
    b.r = optional_real_from(j, "r");
    return b;
}

Json to_json(const montecarlo::SimulationReport& r) {
    Json j;
    j["subject"] = r.subject;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["estimate"] = real(r.estimate);
    j["ci_low"] = real(r.ci_low);
    j["ci_high"] = real(r.ci_high);
    j["ci_method"] = r.ci_method;
    j["ci_level"] = real(r.ci_level);
    j["seed"] = r.seed;
    return j;
}

montecarlo::SimulationReport simulation_from_json(const Json& j) {
    montecarlo::SimulationReport r;
    r.subject = get<std::string>(j, "subject");
    r.trials = get<std::uint64_t>(j, "trials");
    r.successes = get<std::uint64_t>(j, "successes");
    r.estimate = real_from(field(j, "estimate"));
    r.ci_low = real_from(field(j, "ci_low"));
    r.ci_high = real_from(field(j, "ci_high"));
    r.ci_method = get<std::string>(j, "ci_method");
    r.ci_level = real_from(field(j, "ci_level"));
    r.seed = get<std::uint64_t>(j, "seed");
    return r;
}

Json to_json(const montecarlo::HittingEstimate& e) {
    Json j;
    j["r"] = e.r;
    j["horizon"] = e.horizon;
    j["trials"] = e.time.count;
    j["mean"] = real(e.time.mean);
    j["std_error"] = real(e.time.std_error);
    j["ci_low"] = real(e.time.ci_low);
    j["ci_high"] = real(e.time.ci_high);
    j["ci_method"] = "normal";
    j["ci_level"] = real(e.level);
    j["truncated_fraction"] = real(e.truncated_fraction);
    j["seed"] = e.seed;
    return j;
}

Json to_json(const verify::VerificationCase& c) {
    Json j;
    j["suite"] = c.suite;
    j["case_id"] = c.case_id;
    j["anchor"] = c.anchor;
    j["n"] = c.n ? Json(*c.n) : Json(nullptr);
    j["p"] = optional_rational(c.p);
    j["k"] = optional_real(c.k);
    j["r"] = optional_real(c.r);
    j["v"] = c.v ? Json(to_string(*c.v)) : Json(nullptr);
    j["threshold"] = optional_real(c.threshold);
    j["truth_kind"] = std::string(verify::to_string(c.truth_kind));
    j["log2_truth"] = real(c.log2_truth);
    j["ci_low"] = real(c.ci_low);
    j["ci_high"] = real(c.ci_high);
    j["log2_bound"] = real(c.log2_bound);
    j["direction"] = std::string(verify::to_string(c.relation));
    j["pass"] = c.pass;
    j["exact_truth"] = optional_rational(c.exact_truth);
    j["exact_bound"] = optional_rational(c.exact_bound);
    j["note"] = c.note;
    return j;
}

verify::VerificationCase case_from_json(const Json& j) {
    verify::VerificationCase c;
    c.suite = get<std::string>(j, "suite");
    c.case_id = get<std::string>(j, "case_id");
    c.anchor = get<std::string>(j, "anchor");
    if (j.contains("n") && !j.at("n").is_null()) c.n = get<std::uint64_t>(j, "n");
    c.p = optional_rational_from(j, "p");
    c.k = optional_real_from(j, "k");
    c.r = optional_real_from(j, "r");
    if (j.contains("v") && !j.at("v").is_null()) c.v = parse_fraction(get<std::string>(j, "v"));
    c.threshold = optional_real_from(j, "threshold");
    c.truth_kind = verify::parse_truth_kind(get<std::string>(j, "truth_kind"));
    c.log2_truth = real_from(field(j, "log2_truth"));
    c.ci_low = real_from(field(j, "ci_low"));
    c.ci_high = real_from(field(j, "ci_high"));
    c.log2_bound = real_from(field(j, "log2_bound"));
    c.relation = verify::parse_relation(get<std::string>(j, "direction"));
    c.pass = get<bool>(j, "pass");
    c.exact_truth = optional_rational_from(j, "exact_truth");
    c.exact_bound = optional_rational_from(j, "exact_bound");
    c.note = get<std::string>(j, "note");
    return c;
}

Json to_json(const verify::VerificationReport& r) {
    Json j;
    j["suite"] = r.suite;
    j["scale"] = r.scale;
    j["seed"] = r.seed;
    j["config_digest"] = r.config_digest;
    j["overall_pass"] = r.overall_pass;
    j["case_count"] = r.cases.size();
    j["failed"] = r.failed();
    j["skipped"] = r.skipped();
    Json cases = Json::array();
    for (const auto& c : r.cases) cases.push_back(to_json(c));
    j["cases"] = std::move(cases);
    return j;
}

verify::VerificationReport verification_from_json(const Json& j) {
    verify::VerificationReport r;
    r.suite = get<std::string>(j, "suite");
    r.scale = get<std::string>(j, "scale");
    r.seed = get<std::uint64_t>(j, "seed");
    r.config_digest = get<std::string>(j, "config_digest");
    r.overall_pass = get<bool>(j, "overall_pass");
    for (const auto& c : field(j, "cases")) r.cases.push_back(case_from_json(c));
    return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tailcert::serialize
