#include "tailcert/rational.hpp"

#include "tailcert/error.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace tailcert {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw DomainError("malformed rational '" + std::string(whole) + "'");
    }
    BigInt value{std::string(s)};
    return negative ? BigInt(-value) : value;
}

}  // namespace

BigRational power(const BigRational& q, unsigned e) {
    return BigRational(pow(numerator(q), e), pow(denominator(q), e));
}

double log2_of(const BigInt& x) {
    if (x < 0) throw DomainError("log2 of a negative integer");
    if (x == 0) return -std::numeric_limits<double>::infinity();
    const std::size_t top = boost::multiprecision::msb(x);
    if (top < 63) return std::log2(x.convert_to<double>());
    const std::size_t shift = top - 63;
    const auto head = static_cast<std::uint64_t>(BigInt(x >> shift));
    return std::log2(static_cast<double>(head)) + static_cast<double>(shift);
}

double log2_of(const BigRational& q) {
    if (q < 0) throw DomainError("log2 of a negative rational");
    if (q == 0) return -std::numeric_limits<double>::infinity();
    return log2_of(BigInt(boost::multiprecision::numerator(q))) -
           log2_of(BigInt(boost::multiprecision::denominator(q)));
}

double to_double(const BigRational& q) {
    if (q == 0) return 0.0;
    const double sign = q < 0 ? -1.0 : 1.0;
    return sign * std::exp2(log2_of(BigRational(abs(q))));
}

double to_double(const Fraction& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

BigRational to_big(const Fraction& q) {
    return BigRational(BigInt(q.numerator()), BigInt(q.denominator()));
}

BigRational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw DomainError("empty rational");
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(trim(s.substr(0, slash)), s);
        BigInt den = parse_integer(trim(s.substr(slash + 1)), s);
        if (den == 0) throw DomainError("zero denominator in '" + std::string(s) + "'");
        return BigRational(num, den);
    }
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        bool negative = false;
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
            negative = whole.front() == '-';
            whole.remove_prefix(1);
        }
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty())) {
            throw DomainError("malformed rational '" + std::string(s) + "'");
        }
        BigInt num = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
        BigInt den = 1;
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        BigRational q(num, den);
        return negative ? BigRational(-q) : q;
    }
    return BigRational(parse_integer(s, s));
}

void check_fraction_size(const Fraction& q, std::string_view what) {
    const auto num = q.numerator();
    if (num >= kFractionCap || num <= -kFractionCap || q.denominator() >= kFractionCap) {
        throw DomainError(std::string(what) + " " + to_string(q) + " exceeds the exact small-rational range");
    }
}

Fraction parse_fraction(std::string_view text) {
    const BigRational q = parse_rational(text);
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (abs(num) >= kFractionCap || den >= kFractionCap) {
        throw DomainError("rational '" + std::string(trim(text)) + "' exceeds the exact small-rational range");
    }
    return Fraction(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Fraction fraction_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite value cannot be made exact");
    std::int64_t den = 1;
    for (int i = 0; i <= 20; ++i) {
        const double scaled = x * static_cast<double>(den);
        if (std::fabs(scaled) < static_cast<double>(kFractionCap) && scaled == std::floor(scaled)) {
            return Fraction(static_cast<std::int64_t>(scaled), den);
        }
        den *= 2;
    }
    throw DomainError("value " + std::to_string(x) + " has no small exact dyadic form; pass it as a/b");
}

std::string to_string(const BigRational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string to_string(const Fraction& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

}  // namespace tailcert
