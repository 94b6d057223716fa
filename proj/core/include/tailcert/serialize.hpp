#pragma once

// JSON forms of the public result types. Keys keep insertion order so dumps are
// byte-stable; non-finite reals are written as the strings "inf" / "-inf";
// rationals are written as "a/b" strings.

#include "tailcert/bounds.hpp"
#include "tailcert/montecarlo.hpp"
#include "tailcert/prob2.hpp"
#include "tailcert/verify.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace tailcert::serialize {

using Json = nlohmann::ordered_json;

Json real(double x);
double real_from(const Json& j);

Json to_json(const Prob2& p);
Json to_json(const bounds::BoundResult& b);
Json to_json(const montecarlo::SimulationReport& r);
Json to_json(const montecarlo::HittingEstimate& e);
Json to_json(const verify::VerificationCase& c);
Json to_json(const verify::VerificationReport& r);

/// Inverses of to_json. Throw DomainError on missing or malformed fields.
Prob2 prob_from_json(const Json& j);
bounds::BoundResult bound_from_json(const Json& j);
montecarlo::SimulationReport simulation_from_json(const Json& j);
verify::VerificationCase case_from_json(const Json& j);
verify::VerificationReport verification_from_json(const Json& j);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace tailcert::serialize
