#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace tailcert {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Small exact rational used on the hot path of the adaptive game. Inputs are
// validated so that numerators and denominators stay below 2^31 and products
// of two values cannot overflow.
// Compare a Fraction only with another Fraction: with Boost 1.74 the mixed
// rational<int64_t> == int overload recurses without end.
using Fraction = boost::rational<std::int64_t>;

/// log2 of a non-negative big integer; -inf for zero. Accurate to ~1e-15 relative.
double log2_of(const BigInt& x);

/// log2 of a non-negative big rational; -inf for zero.
double log2_of(const BigRational& q);

double to_double(const BigRational& q);
double to_double(const Fraction& q);

BigRational to_big(const Fraction& q);

/// Parses "a/b", "a" or a short decimal such as "0.25" into an exact rational.
/// Throws DomainError on malformed input or zero denominator.
BigRational parse_rational(std::string_view text);

/// Same grammar as parse_rational, but the result must fit the small type.
Fraction parse_fraction(std::string_view text);

/// Exact conversion of a double; only values with small dyadic or integral
/// form are accepted (used to bring CLI reals like 8 or 0.5 into the game).
Fraction fraction_from_double(double x);

/// q^e; Boost.Multiprecision has no pow for rational numbers.
BigRational power(const BigRational& q, unsigned e);

std::string to_string(const BigRational& q);
std::string to_string(const Fraction& q);

/// Throws DomainError when q's numerator or denominator exceeds the small-type cap.
void check_fraction_size(const Fraction& q, std::string_view what);

inline constexpr std::int64_t kFractionCap = std::int64_t{1} << 31;

}  // namespace tailcert
