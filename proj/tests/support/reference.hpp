#pragma once
// Brute-force reference values used by the tests. Deliberately naive: path
// enumeration, Pascal rows, explicit convolution. Nothing here calls the
// library's oracle.

#include "tailcert/rational.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace ref {

using tailcert::BigInt;
using tailcert::BigRational;

// Pr[S_n >= t] by enumerating all 2^n sign patterns (n <= 24).
inline BigRational walk_tail_paths(unsigned n, long t) {
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const long ups = __builtin_popcountll(mask);
        if (2 * ups - static_cast<long>(n) >= t) ++hits;
    }
    return BigRational(BigInt(hits), BigInt(1) << n);
}

// Pr[S_n <= -t], counted separately for the symmetry check.
inline BigRational walk_lower_tail_paths(unsigned n, long t) {
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const long ups = __builtin_popcountll(mask);
        if (2 * ups - static_cast<long>(n) <= -t) ++hits;
    }
    return BigRational(BigInt(hits), BigInt(1) << n);
}

inline BigRational prefix_max_paths(unsigned n, long m) {
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        long s = 0;
        for (unsigned i = 0; i < n; ++i) {
            s += (mask >> i & 1) ? 1 : -1;
            if (s >= m) {
                ++hits;
                break;
            }
        }
    }
    return BigRational(BigInt(hits), BigInt(1) << n);
}

inline std::vector<BigInt> pascal_row(unsigned n) {
    std::vector<BigInt> row{1};
    for (unsigned i = 0; i < n; ++i) {
        std::vector<BigInt> next(row.size() + 1, 0);
        for (std::size_t j = 0; j < row.size(); ++j) {
            next[j] += row[j];
            next[j + 1] += row[j];
        }
        row = std::move(next);
    }
    return row;
}

inline BigRational pow_q(const BigRational& q, unsigned e) {
    BigRational out = 1;
    for (unsigned i = 0; i < e; ++i) out *= q;
    return out;
}

// Pr[Bin(n, p) >= t] from a Pascal row.
inline BigRational binom_tail_pascal(unsigned n, const BigRational& p, long t) {
    const auto row = pascal_row(n);
    BigRational sum = 0;
    for (long j = std::max(0L, t); j <= static_cast<long>(n); ++j) {
        sum += BigRational(row[j]) * pow_q(p, static_cast<unsigned>(j)) * pow_q(1 - p, n - static_cast<unsigned>(j));
    }
    return sum;
}

// Pr[Y_1 + ... + Y_n >= t] for i.i.d. geometrics with Pr[Y >= j] = p^j, by
// enumerating every tuple with sum < t.
inline BigRational geometric_sum_tail_enum(unsigned n, const BigRational& p, long t) {
    BigRational below = 0;
    std::function<void(unsigned, long, BigRational)> rec = [&](unsigned i, long s, BigRational w) {
        if (s >= t) return;
        if (i == n) {
            below += w;
            return;
        }
        for (long y = 0; s + y < t; ++y) rec(i + 1, s + y, w * pow_q(p, static_cast<unsigned>(y)) * (1 - p));
    };
    rec(0, 0, BigRational(1));
    return 1 - below;
}

inline std::uint64_t count_compositions(unsigned total, unsigned parts) {
    if (parts == 1) return 1;
    std::uint64_t c = 0;
    for (unsigned first = 0; first <= total; ++first) c += count_compositions(total - first, parts - 1);
    return c;
}

// E[t_r] by iterating the survival distribution of the walk on (-r, r) in doubles.
inline double hitting_mean_iterate(unsigned r, double tol = 1e-12) {
    std::vector<double> mass(2 * r + 1, 0.0);
    mass[r] = 1.0;
    double mean = 0.0;
    for (std::uint64_t step = 0; step < 10'000'000; ++step) {
        double alive = 0.0;
        for (std::size_t i = 1; i + 1 < mass.size(); ++i) alive += mass[i];
        if (alive < tol) break;
        mean += alive;
        std::vector<double> next(mass.size(), 0.0);
        for (std::size_t i = 1; i + 1 < mass.size(); ++i) {
            next[i - 1] += mass[i] / 2;
            next[i + 1] += mass[i] / 2;
        }
        next.front() = 0.0;
        next.back() = 0.0;
        mass = std::move(next);
    }
    return mean;
}

inline double log2_q(const BigRational& q) {
    return std::log2(static_cast<double>(q));
}

}  // namespace ref
