#pragma once

// Parameter sweeps that pair each inequality of the bound catalog with exact
// or sampled ground truth, and the report format they produce.

#include "tailcert/bounds.hpp"
#include "tailcert/montecarlo.hpp"
#include "tailcert/prob2.hpp"
#include "tailcert/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tailcert::verify {

enum class Suite { fair, geo, large, bennett, appendix, all };
enum class Scale { quick, full };

std::string_view to_string(Suite s) noexcept;
std::string_view to_string(Scale s) noexcept;
Suite parse_suite(std::string_view name);  // throws LookupError
Scale parse_scale(std::string_view name);  // throws LookupError

/// exact/empirical compare probabilities in log2 space; the *_value kinds
/// compare plain quantities (hitting-time means, counts, moments) and store
/// them in the log2 columns as is.
enum class TruthKind { exact, empirical, exact_value, empirical_value, skipped };

/// truth <= bound, truth >= bound, or truth == bound (interval must cover it).
enum class Relation { at_most, at_least, equal };

std::string_view to_string(TruthKind k) noexcept;
std::string_view to_string(Relation r) noexcept;
TruthKind parse_truth_kind(std::string_view id);
Relation parse_relation(std::string_view id);

/// Log-space slack for exact comparisons done in floating point.
inline constexpr double kLogSlack = 1e-6;
/// Bounds below this are never adjudicated by sampling.
inline constexpr double kRareEventFloor = 1e-5;

struct VerificationCase {
    std::string suite;
    std::string case_id;
    std::string anchor;  // catalog inequality the case exercises

    std::optional<std::uint64_t> n;
    std::optional<BigRational> p;
    std::optional<double> k;
    std::optional<double> r;
    std::optional<Fraction> v;
    std::optional<double> threshold;

    TruthKind truth_kind = TruthKind::exact;
    double log2_truth = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double log2_bound = 0.0;
    Relation relation = Relation::at_most;
    bool pass = false;

    /// Exact operands when both sides are rational; the comparison then uses them.
    std::optional<BigRational> exact_truth;
    std::optional<BigRational> exact_bound;
    std::string note;  // skip reason, violated constraints
};

/// Case identity and parameters; compare() fills in the rest.
using CaseHeader = VerificationCase;

/// Recomputes `pass` from the stored fields.
bool recompute_pass(const VerificationCase& c);

/// Exact truth against a bound. Invalid or vacuous bounds yield skipped rows
/// with pass = true. Throws ContractError when `expected` disagrees with the
/// bound's direction.
VerificationCase compare(CaseHeader header, const Prob2& truth, const bounds::BoundResult& bound,
                         std::optional<bounds::Direction> expected = std::nullopt);

/// Empirical truth against a bound: an upper bound passes when ci_low <= bound,
/// a lower bound when ci_high >= bound. Bounds under kRareEventFloor are
/// recorded as oracle-only skips.
VerificationCase compare(CaseHeader header, const montecarlo::SimulationReport& truth,
                         const bounds::BoundResult& bound, std::optional<bounds::Direction> expected = std::nullopt);

/// Plain-value cases (no BoundResult involved).
VerificationCase exact_value_case(CaseHeader header, const BigRational& truth, const BigRational& expected,
                                  Relation relation);
VerificationCase empirical_value_case(CaseHeader header, double low, double estimate, double high, double expected,
                                      Relation relation);
/// Probability cases whose bound is not in the catalog as a BoundResult
/// (rescaled constants, appendix facts).
VerificationCase exact_probability_case(CaseHeader header, const Prob2& truth, double log2_bound,
                                        std::optional<BigRational> exact_bound, Relation relation);
VerificationCase empirical_probability_case(CaseHeader header, const montecarlo::SimulationReport& truth,
                                            double log2_bound, Relation relation);

struct VerificationReport {
    std::string suite;
    std::string scale;
    std::uint64_t seed = 0;
    std::string config_digest;  // FNV-1a of the suite/scale/seed/case-id list
    std::vector<VerificationCase> cases;
    bool overall_pass = true;

    std::size_t skipped() const noexcept;
    std::size_t failed() const noexcept;
    std::string summary() const;
};

/// Seed of the simulation keyed `key` under a run seed. Each simulation draws
/// from its own seed so a case gives the same numbers in its own suite and in "all".
std::uint64_t case_seed(std::uint64_t seed, std::string_view key);

VerificationReport run_suite(Suite suite, Scale scale, std::uint64_t seed);
VerificationReport run_suite(std::string_view name, Scale scale, std::uint64_t seed);

/// Catalog anchors every run of `suite` must exercise.
std::vector<std::string> anchors_for(Suite suite);
/// Anchors of `suite` that no case in `report` references.
std::vector<std::string> audit_coverage(const VerificationReport& report, Suite suite);

inline constexpr std::string_view kCsvHeader =
    "suite,case_id,n,p_num,p_den,k,r,v,threshold,truth_kind,log2_truth,ci_low,ci_high,log2_bound,direction,pass";

void write_csv(const VerificationReport& report, std::ostream& out);
std::string to_csv(const VerificationReport& report);

/// Steps (1-based) at which a greedy partition of the variance stream closes a
/// group: a group closes at the first step where its running variance reaches `quota`.
std::vector<std::size_t> greedy_partition(std::span<const Fraction> variances, const Fraction& quota);

/// Exact Pr[Y_1 + ... + Y_n >= t] for an adaptive sequence of integer geometrics:
/// Y_i has Pr[Y_i >= j] = p^j when the running sum is even and (p/2)^j when odd.
BigRational adaptive_geometric_tail(std::uint64_t n, const BigRational& p, std::int64_t t);

}  // namespace tailcert::verify
