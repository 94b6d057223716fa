#include "tailcert/oracle.hpp"

#include "tailcert/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailcert::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

void require_exact_capacity(std::uint64_t n) {
    if (n > kExactSizeCap) {
        throw CapacityError("exact mode supports n <= " + std::to_string(kExactSizeCap) + ", got n = " +
                            std::to_string(n));
    }
}

void require_probability(const BigRational& p) {
    if (p < 0 || p > 1) throw DomainError("probability " + to_string(p) + " outside [0, 1]");
}

Mode resolve(std::optional<Mode> mode, std::uint64_t n) { return mode.value_or(default_mode(n)); }

BigInt pow2(std::uint64_t e) { return BigInt(1) << e; }

long double log2_sum_exp(const std::vector<long double>& terms) {
    long double peak = -std::numeric_limits<long double>::infinity();
    for (long double v : terms) peak = std::max(peak, v);
    if (std::isinf(peak)) return peak;
    long double acc = 0.0L;
    for (long double v : terms) acc += std::exp2(v - peak);
    return peak + std::log2(acc);
}

long double log2_choose(std::uint64_t n, std::uint64_t j) {
    static const long double ln2 = std::log(2.0L);
    return (std::lgamma(static_cast<long double>(n) + 1.0L) - std::lgamma(static_cast<long double>(j) + 1.0L) -
            std::lgamma(static_cast<long double>(n - j) + 1.0L)) /
           ln2;
}

// log2 of C(n, j) p^j (1-p)^(n-j), handling p in {0, 1}.
long double log2_binom_term(std::uint64_t n, std::uint64_t j, long double log2p, long double log2q) {
    long double term = log2_choose(n, j);
    if (j > 0) term += static_cast<long double>(j) * log2p;
    if (n - j > 0) term += static_cast<long double>(n - j) * log2q;
    return term;
}

BigInt choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c *= (n - k + i);
        c /= i;
    }
    return c;
}

Prob2 binom_tail_exact(std::uint64_t n, const BigRational& p, std::uint64_t t) {
    require_exact_capacity(n);
    if (t == 0) return Prob2::one();
    if (p == 0) return Prob2::zero();
    if (p == 1) return Prob2::one();
    const BigInt a = numerator(p);
    const BigInt b = denominator(p);
    const BigInt c = b - a;
    // T_j = C(n, j) a^j c^(n-j); T_{j+1} = T_j (n-j) a / ((j+1) c), exact at every step.
    BigInt term = pow(c, static_cast<unsigned>(n));
    BigInt sum = 0;
    for (std::uint64_t j = 0; j <= n; ++j) {
        if (j >= t) sum += term;
        if (j == n) break;
        term *= a;
        term *= (n - j);
        term /= c;
        term /= (j + 1);
    }
    return Prob2::from_exact(BigRational(sum, pow(b, static_cast<unsigned>(n))));
}

Prob2 binom_tail_float(std::uint64_t n, double p, std::uint64_t t) {
    constexpr double kNever = -std::numeric_limits<double>::infinity();
    if (t == 0 || p == 1.0) return Prob2::from_log2(0.0);
    if (p == 0.0) return Prob2::from_log2(kNever);
    const long double log2p = std::log2(static_cast<long double>(p));
    const long double log2q = std::log1p(-static_cast<long double>(p)) / std::log(2.0L);
    std::vector<long double> terms;
    terms.reserve(n - t + 1);
    for (std::uint64_t j = t; j <= n; ++j) terms.push_back(log2_binom_term(n, j, log2p, log2q));
    return Prob2::from_log2(static_cast<double>(log2_sum_exp(terms)));
}

// Pr[S_n = m] for the fair walk.
Prob2 walk_point(std::uint64_t n, std::int64_t m, Mode mode) {
    const auto nn = static_cast<std::int64_t>(n);
    if (m < -nn || m > nn || ((nn + m) % 2) != 0) {
        return mode == Mode::exact ? Prob2::zero() : Prob2::from_log2(-std::numeric_limits<double>::infinity());
    }
    const auto j = static_cast<std::uint64_t>((nn + m) / 2);
    if (mode == Mode::exact) {
        require_exact_capacity(n);
        return Prob2::from_exact(BigRational(choose(n, j), pow2(n)));
    }
    return Prob2::from_log2(static_cast<double>(log2_choose(n, j) - static_cast<long double>(n)));
}

Prob2 prefix_max_dp(std::uint64_t n, std::int64_t m, Mode mode) {
    const auto nn = static_cast<std::int64_t>(n);
    // Sums live in [-n, m-1]; index = sum + n. Paths that touch m are absorbed.
    const auto width = static_cast<std::size_t>(nn + m);
    const auto at = [nn](std::int64_t s) { return static_cast<std::size_t>(s + nn); };
    if (mode == Mode::exact) {
        require_exact_capacity(n);
        std::vector<BigInt> cur(width), next(width);
        cur[at(0)] = 1;
        BigInt absorbed = 0;
        for (std::int64_t step = 0; step < nn; ++step) {
            absorbed = absorbed * 2 + cur[at(m - 1)];
            const std::int64_t lo = std::max(-nn, -step - 1);
            for (std::int64_t s = lo; s < m; ++s) {
                BigInt v = 0;
                if (s - 1 >= -nn) v += cur[at(s - 1)];
                if (s + 1 <= m - 1) v += cur[at(s + 1)];
                next[at(s)] = std::move(v);
            }
            std::swap(cur, next);
        }
        return Prob2::from_exact(BigRational(absorbed, pow2(n)));
    }
    std::vector<long double> cur(width, 0.0L), next(width, 0.0L);
    cur[at(0)] = 1.0L;
    long double absorbed = 0.0L;
    for (std::int64_t step = 0; step < nn; ++step) {
        absorbed += 0.5L * cur[at(m - 1)];
        const std::int64_t lo = std::max(-nn, -step - 1);
        for (std::int64_t s = lo; s < m; ++s) {
            long double v = 0.0L;
            if (s - 1 >= -nn) v += 0.5L * cur[at(s - 1)];
            if (s + 1 <= m - 1) v += 0.5L * cur[at(s + 1)];
            next[at(s)] = v;
        }
        std::swap(cur, next);
    }
    return Prob2::from_log2(absorbed > 0 ? static_cast<double>(std::log2(absorbed)) : kNegInf);
}

Prob2 prefix_max_reflection(std::uint64_t n, std::int64_t m, Mode mode) {
    const Prob2 tail = walk_tail(n, m, mode);
    const Prob2 point = walk_point(n, m, mode);
    if (mode == Mode::exact) return Prob2::from_exact(2 * *tail.exact() - *point.exact());
    if (std::isinf(point.log2())) return Prob2::from_log2(std::min(0.0, tail.log2() + 1.0));
    // log2(2P - Q) = log2 P + 1 + log2(1 - Q / 2P), with Q <= P.
    const double ratio = std::exp2(point.log2() - tail.log2() - 1.0);
    return Prob2::from_log2(tail.log2() + 1.0 + std::log1p(-ratio) / std::log(2.0));
}

}  // namespace

Mode default_mode(std::uint64_t n) noexcept { return n <= kExactSizeCap ? Mode::exact : Mode::float_log; }

void TailQuery::validate() const {
    if (n == 0) throw DomainError("tail query needs at least one step");
    const auto nn = static_cast<std::int64_t>(n);
    if (std::holds_alternative<FairWalk>(law)) {
        if (threshold < -nn || threshold > nn) {
            throw RangeError("fair-walk threshold " + std::to_string(threshold) + " outside [-n, n]");
        }
        return;
    }
    const auto& p = std::get<Bernoulli>(law).p;
    if (p < 0 || p > BigRational(1, 2)) throw DomainError("bernoulli p " + to_string(p) + " outside [0, 1/2]");
    if (threshold < 0 || threshold > nn) {
        throw RangeError("bernoulli threshold " + std::to_string(threshold) + " outside [0, n]");
    }
}

Prob2 exact_tail(const TailQuery& query, std::optional<Mode> mode) {
    query.validate();
    if (std::holds_alternative<FairWalk>(query.law)) return walk_tail(query.n, query.threshold, mode);
    return binom_tail(query.n, std::get<Bernoulli>(query.law).p, query.threshold, resolve(mode, query.n));
}

Prob2 binom_tail(std::uint64_t n, const BigRational& p, std::int64_t t, Mode mode) {
    require_probability(p);
    if (t < 0 || t > static_cast<std::int64_t>(n)) {
        throw RangeError("binomial threshold " + std::to_string(t) + " outside [0, " + std::to_string(n) + "]");
    }
    const auto tt = static_cast<std::uint64_t>(t);
    if (mode == Mode::exact) return binom_tail_exact(n, p, tt);
    return binom_tail_float(n, to_double(p), tt);
}

std::vector<double> binom_log2_pmf(std::uint64_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
    std::vector<double> out(n + 1, kNegInf);
    if (p == 0.0 || p == 1.0) {
        out[p == 0.0 ? 0 : n] = 0.0;
        return out;
    }
    const long double log2p = std::log2(static_cast<long double>(p));
    const long double log2q = std::log1p(-static_cast<long double>(p)) / std::log(2.0L);
    for (std::uint64_t j = 0; j <= n; ++j) out[j] = static_cast<double>(log2_binom_term(n, j, log2p, log2q));
    return out;
}

std::vector<BigRational> binom_pmf_exact(std::uint64_t n, const BigRational& p) {
    require_probability(p);
    require_exact_capacity(n);
    std::vector<BigRational> out(n + 1, BigRational(0));
    const BigRational q = 1 - p;
    BigRational pj = 1;
    for (std::uint64_t j = 0; j <= n; ++j) {
        out[j] = BigRational(choose(n, j)) * pj * power(q, static_cast<unsigned>(n - j));
        pj *= p;
    }
    return out;
}

Prob2 walk_tail(std::uint64_t n, std::int64_t t, std::optional<Mode> mode) {
    const auto nn = static_cast<std::int64_t>(n);
    if (t < -nn || t > nn) {
        throw RangeError("walk threshold " + std::to_string(t) + " outside [-" + std::to_string(n) + ", " +
                         std::to_string(n) + "]");
    }
    // S_n = 2H - n for H heads, so S_n >= t iff H >= ceil((n + t) / 2).
    const std::int64_t heads = (nn + t + 1) / 2;
    return binom_tail(n, BigRational(1, 2), heads, resolve(mode, n));
}

Prob2 prefix_max_tail(std::uint64_t n, std::int64_t m, PrefixMaxMethod method, std::optional<Mode> mode) {
    if (m < 1 || m > static_cast<std::int64_t>(n)) {
        throw RangeError("prefix-max level " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
    }
    const Mode resolved = resolve(mode, n);
    return method == PrefixMaxMethod::dp ? prefix_max_dp(n, m, resolved) : prefix_max_reflection(n, m, resolved);
}

void HittingQuery::validate() const {
    if (r == 0) throw DomainError("hitting level r must be >= 1");
    if (horizon && *horizon < r) {
        throw DomainError("horizon " + std::to_string(*horizon) + " is below r = " + std::to_string(r));
    }
}

BigRational hitting_time_mean_exact(const HittingQuery& query) {
    query.validate();
    const auto r = static_cast<std::int64_t>(query.r);
    if (query.horizon) {
        // E[min(t_r, H)] = sum_{s < H} Pr[t_r > s]; survivors counted as paths over 2^s.
        const std::uint64_t horizon = *query.horizon;
        const auto width = static_cast<std::size_t>(2 * r - 1);
        std::vector<BigInt> cur(width), next(width);
        cur[static_cast<std::size_t>(r - 1)] = 1;
        BigInt acc = 0;
        for (std::uint64_t s = 0; s < horizon; ++s) {
            BigInt alive = 0;
            for (const auto& c : cur) alive += c;
            acc += alive << (horizon - s);
            for (std::size_t i = 0; i < width; ++i) {
                BigInt v = 0;
                if (i > 0) v += cur[i - 1];
                if (i + 1 < width) v += cur[i + 1];
                next[i] = std::move(v);
            }
            std::swap(cur, next);
        }
        return BigRational(acc, pow2(horizon));
    }
    // Tridiagonal system -E[i-1]/2 + E[i] - E[i+1]/2 = 1 on i = 0..N-1 with
    // zero boundary values; solved by forward elimination and back substitution.
    const auto size = static_cast<std::size_t>(2 * r - 1);
    const BigRational off(-1, 2);
    std::vector<BigRational> upper(size), rhs(size);
    BigRational prev_upper = 0, prev_rhs = 0;
    for (std::size_t i = 0; i < size; ++i) {
        const BigRational pivot = (i == 0) ? BigRational(1) : BigRational(1 - off * prev_upper);
        upper[i] = (i + 1 < size) ? BigRational(off / pivot) : BigRational(0);
        rhs[i] = (i == 0) ? BigRational(1 / pivot) : BigRational((1 - off * prev_rhs) / pivot);
        prev_upper = upper[i];
        prev_rhs = rhs[i];
    }
    std::vector<BigRational> expect(size);
    for (std::size_t i = size; i-- > 0;) {
        expect[i] = rhs[i] - (i + 1 < size ? BigRational(upper[i] * expect[i + 1]) : BigRational(0));
    }
    return expect[static_cast<std::size_t>(r - 1)];
}

double hitting_time_mean(const HittingQuery& query) { return to_double(hitting_time_mean_exact(query)); }

BigInt compositions_count(std::uint64_t total, std::uint64_t parts) {
    if (parts == 0) throw DomainError("a witness sequence needs at least one part");
    return choose(total + parts - 1, parts - 1);
}

std::uint64_t WitnessSequence::total() const noexcept {
    std::uint64_t s = 0;
    for (auto v : q) s += v;
    return s;
}

std::string witness_encode(const WitnessSequence& w) {
    std::string bits;
    bits.reserve(w.total() + w.parts());
    for (auto v : w.q) {
        bits.append(v, '0');
        bits.push_back('1');
    }
    return bits;
}

WitnessSequence witness_decode(std::string_view bits) {
    if (bits.empty() || bits.back() != '1') throw DomainError("witness encoding must end with '1'");
    WitnessSequence w;
    std::uint64_t zeros = 0;
    for (char c : bits) {
        if (c == '0') {
            ++zeros;
        } else if (c == '1') {
            w.q.push_back(zeros);
            zeros = 0;
        } else {
            throw DomainError("witness encoding may only contain '0' and '1'");
        }
    }
    return w;
}

std::vector<WitnessSequence> enumerate_witnesses(std::uint64_t total, std::uint64_t parts) {
    if (parts == 0) throw DomainError("a witness sequence needs at least one part");
    std::vector<WitnessSequence> out;
    WitnessSequence cur;
    cur.q.assign(parts, 0);
    // Depth-first over the first parts-1 coordinates; the last one takes the remainder.
    auto recurse = [&](auto&& self, std::size_t i, std::uint64_t left) -> void {
        if (i + 1 == parts) {
            cur.q[i] = left;
            out.push_back(cur);
            return;
        }
        for (std::uint64_t v = 0; v <= left; ++v) {
            cur.q[i] = v;
            self(self, i + 1, left - v);
        }
    };
    recurse(recurse, 0, total);
    return out;
}

ProbInterval geometric_sum_tail(std::uint64_t n, const BigRational& p, std::int64_t t,
                                std::optional<std::int64_t> tail_cap) {
    if (!(p > 0 && p < 1)) throw DomainError("geometric parameter " + to_string(p) + " outside (0, 1)");
    const std::int64_t cap = tail_cap.value_or(std::max<std::int64_t>(t, 0) + 64);
    if (cap < t) {
        throw CapacityError("tail_cap " + std::to_string(cap) + " is below threshold " + std::to_string(t));
    }
    if (t <= 0) return {Prob2::one(), Prob2::one()};
    if (n == 0) return {Prob2::zero(), Prob2::zero()};

    const auto tt = static_cast<std::size_t>(t);
    std::vector<BigRational> pow_p(static_cast<std::size_t>(cap) + 1);
    pow_p[0] = 1;
    for (std::size_t j = 1; j < pow_p.size(); ++j) pow_p[j] = pow_p[j - 1] * p;
    const BigRational& p_cap = pow_p.back();
    const BigRational q = 1 - p;

    // alive[s]: no truncation yet and partial sum s < t. reached: no truncation and sum >= t.
    std::vector<BigRational> alive(tt, BigRational(0)), next(tt);
    alive[0] = 1;
    BigRational reached = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        BigRational new_reached = reached * (1 - p_cap);
        for (std::size_t s = 0; s < tt; ++s) {
            if (alive[s] == 0) continue;
            // Values j in [t - s, cap) push the sum over the threshold: mass p^(t-s) - p^cap.
            new_reached += alive[s] * (pow_p[tt - s] - p_cap);
        }
        for (std::size_t s2 = 0; s2 < tt; ++s2) {
            BigRational v = 0;
            for (std::size_t s = 0; s <= s2; ++s) {
                if (alive[s] != 0) v += alive[s] * pow_p[s2 - s] * q;
            }
            next[s2] = std::move(v);
        }
        std::swap(alive, next);
        reached = std::move(new_reached);
    }
    const BigRational truncated = 1 - power(BigRational(1 - p_cap), static_cast<unsigned>(n));
    return {Prob2::from_exact(reached), Prob2::from_exact(reached + truncated)};
}

}  // namespace tailcert::oracle
