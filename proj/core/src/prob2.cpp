#include "tailcert/prob2.hpp"

#include "tailcert/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tailcert {

namespace {
constexpr double kLog2Noise = 1e-9;
}

Prob2::Prob2(double log2p, std::optional<BigRational> exact)
    : log2p_(log2p), exact_(std::move(exact)) {}

Prob2 Prob2::zero() {
    return Prob2(-std::numeric_limits<double>::infinity(), BigRational(0));
}

Prob2 Prob2::one() { return Prob2(0.0, BigRational(1)); }

Prob2 Prob2::from_log2(double log2p) {
    if (std::isnan(log2p)) throw DomainError("probability log2 is NaN");
    if (log2p > kLog2Noise) {
        throw DomainError("probability log2 " + std::to_string(log2p) + " exceeds 0");
    }
    return Prob2(std::min(log2p, 0.0), std::nullopt);
}

Prob2 Prob2::from_exact(BigRational q) {
    if (q < 0 || q > 1) throw DomainError("exact probability " + to_string(q) + " outside [0, 1]");
    const double l = log2_of(q);
    return Prob2(std::min(l, 0.0), std::move(q));
}

double Prob2::value() const { return std::exp2(log2p_); }

std::string Prob2::scientific(int significant) const {
    return scientific_from_log2(log2p_, significant);
}

std::string scientific_from_log2(double log2v, int significant) {
    significant = std::clamp(significant, 1, 17);
    char buf[64];
    if (std::isinf(log2v) && log2v < 0) {
        std::snprintf(buf, sizeof buf, "%.*e", significant - 1, 0.0);
        return buf;
    }
    const double log10v = log2v * std::log10(2.0);
    double exponent = std::floor(log10v);
    double mantissa = std::pow(10.0, log10v - exponent);
    // Rounding can push the mantissa to 10.000; renormalise after formatting.
    std::snprintf(buf, sizeof buf, "%.*f", significant - 1, mantissa);
    if (std::atof(buf) >= 10.0) {
        mantissa /= 10.0;
        exponent += 1.0;
        std::snprintf(buf, sizeof buf, "%.*f", significant - 1, mantissa);
    }
    char out[96];
    std::snprintf(out, sizeof out, "%se%s%02d", buf, exponent < 0 ? "-" : "+",
                  static_cast<int>(std::fabs(exponent)));
    return out;
}

}  // namespace tailcert
