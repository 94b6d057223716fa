#pragma once

#include "tailcert/rational.hpp"

#include <optional>
#include <string>

namespace tailcert {

/// A probability carried as log2 p, optionally with its exact rational value.
///
/// log2() is always populated (possibly -inf). When exact() is present the two
/// agree to within 1e-9 in log2 space; both are validated on construction.
class Prob2 {
public:
    static Prob2 zero();
    static Prob2 one();

    /// Values in (0, 1e-9] are treated as rounding noise from log-sum-exp and
    /// clamped to 0; anything larger throws DomainError.
    static Prob2 from_log2(double log2p);
    static Prob2 from_exact(BigRational q);

    double log2() const noexcept { return log2p_; }
    double value() const;

    bool has_exact() const noexcept { return exact_.has_value(); }
    const std::optional<BigRational>& exact() const noexcept { return exact_; }

    /// Decimal scientific notation computed from log2, so 2^-5000 still prints.
    std::string scientific(int significant = 6) const;

private:
    Prob2(double log2p, std::optional<BigRational> exact);

    double log2p_;
    std::optional<BigRational> exact_;
};

/// Formats 2^log2v as "m.mmmmme-XX" without passing through a double that could underflow.
std::string scientific_from_log2(double log2v, int significant = 6);

/// Lower/upper brackets around an exact probability (truncated oracles).
struct ProbInterval {
    Prob2 lower;
    Prob2 upper;
};

}  // namespace tailcert
