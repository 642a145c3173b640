#pragma once

/**
 * @file realquad.hpp
 * @brief Continued fractions of sqrt(d), units of Z[sqrt d] and x^2 - d y^2 = 2.
 *
 * Units of real quadratic orders grow exponentially in the period length, so
 * everything carrying a convergent uses cpp_int. The (P, Q) recurrence itself
 * stays in 64-bit words: P <= floor(sqrt d) and Q <= 2 floor(sqrt d).
 *
 * Convergent identity used throughout:  h_k^2 - d k_k^2 = (-1)^(k+1) Q_(k+1).
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pqc/error.hpp"
#include "pqc/modular.hpp"

namespace pqc {

using bigint = boost::multiprecision::cpp_int;

struct ContinuedFraction {
    std::uint64_t d = 0;
    std::uint64_t a0 = 0;
    std::vector<std::uint64_t> period;
};

/// Fundamental unit x + y sqrt d of the order Z[sqrt d].
struct FundamentalUnit {
    std::uint64_t d = 0;
    bigint x;
    bigint y;
    int unit_norm = 0;
};

/// Minimal positive solution of x^2 - d y^2 = 2.
struct NormTwoSolution {
    std::uint64_t d = 0;
    bigint x;
    bigint y;
};

/// Trial division by every q <= cbrt(n), then a perfect-square test on the
/// cofactor (which has at most two prime factors, both > cbrt(n)).
inline bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    std::uint64_t m = n;
    for (std::uint64_t q = 2; q * q * q <= n; ++q) {
        if (m % q != 0) continue;
        m /= q;
        if (m % q == 0) return false;
    }
    if (m == 1) return true;
    return !exact_sqrt(m).has_value();
}

namespace detail {

constexpr std::uint64_t max_cf_radicand = std::uint64_t{1} << 62;

inline void require_nonsquare(std::uint64_t d, const char* who) {
    if (d < 2) fail(errc::invalid_argument, std::string(who) + ": d must be >= 2");
    if (d >= max_cf_radicand) fail(errc::invalid_argument, std::string(who) + ": d too large");
    if (exact_sqrt(d)) fail(errc::invalid_argument, std::string(who) + ": " + std::to_string(d) + " is a perfect square");
}

inline void require_squarefree(std::uint64_t d, const char* who) {
    require_nonsquare(d, who);
    if (!is_squarefree(d)) fail(errc::invalid_argument, std::string(who) + ": " + std::to_string(d) + " is not squarefree");
}

/// Walks the (P, Q, a) states of sqrt(d) starting after a0.
class cf_walker {
public:
    explicit cf_walker(std::uint64_t d) : d_(d), a0_(static_cast<std::uint64_t>(isqrt(d))), a_(a0_) {}

    std::uint64_t a0() const { return a0_; }
    std::uint64_t P() const { return P_; }
    std::uint64_t Q() const { return Q_; }
    std::uint64_t a() const { return a_; }

    void step() {
        P_ = a_ * Q_ - P_;
        Q_ = (d_ - P_ * P_) / Q_;
        a_ = (a0_ + P_) / Q_;
    }

private:
    std::uint64_t d_;
    std::uint64_t a0_;
    std::uint64_t P_ = 0;
    std::uint64_t Q_ = 1;
    std::uint64_t a_;
};

}  // namespace detail

/// Purely periodic part of sqrt(d) = [a0; period...], period ended by the
/// first repeat of the (P, Q) state.
inline ContinuedFraction cf_sqrt(std::uint64_t d) {
    detail::require_nonsquare(d, "cf_sqrt");
    ContinuedFraction cf{d, 0, {}};
    detail::cf_walker w(d);
    cf.a0 = w.a0();
    w.step();
    const std::uint64_t P1 = w.P(), Q1 = w.Q();
    do {
        cf.period.push_back(w.a());
        w.step();
    } while (w.P() != P1 || w.Q() != Q1);

    if (cf.period.empty() || cf.period.back() != 2 * cf.a0)
        fail(errc::invariant_violation, "cf_sqrt: period of sqrt(" + std::to_string(d) + ") does not end in 2*a0");
    return cf;
}

inline FundamentalUnit fundamental_unit(std::uint64_t d) {
    detail::require_squarefree(d, "fundamental_unit");
    const ContinuedFraction cf = cf_sqrt(d);

    // convergent h_(L-1)/k_(L-1) of [a0; period[0], ..., period[L-2]]
    bigint h_prev = 1, h = cf.a0;
    bigint k_prev = 0, k = 1;
    for (std::size_t i = 0; i + 1 < cf.period.size(); ++i) {
        bigint h_next = cf.period[i] * h + h_prev;
        bigint k_next = cf.period[i] * k + k_prev;
        h_prev = std::move(h);
        h = std::move(h_next);
        k_prev = std::move(k);
        k = std::move(k_next);
    }
    FundamentalUnit unit{d, h, k, cf.period.size() % 2 == 1 ? -1 : 1};
    if (h * h - bigint(d) * k * k != unit.unit_norm)
        fail(errc::invariant_violation, "fundamental_unit: norm check failed for d=" + std::to_string(d));
    return unit;
}

/// Minimal positive (x, y) with x^2 - d y^2 = 2, found as the first convergent
/// whose Q-value is 2 with the right sign, scanning one full period (two
/// when the period is odd, since the sign alternates).
inline std::optional<NormTwoSolution> solve_norm_two(std::uint64_t d) {
    detail::require_squarefree(d, "solve_norm_two");
    if (d < 5) {
        // 2 >= sqrt(d): solutions need not be convergents here
        for (std::uint64_t y = 1; y <= 4; ++y)
            if (auto x = exact_sqrt(static_cast<u128>(d) * y * y + 2))
                return NormTwoSolution{d, bigint(static_cast<std::uint64_t>(*x)), bigint(y)};
        return std::nullopt;
    }

    const std::size_t L = cf_sqrt(d).period.size();
    const std::size_t steps = L % 2 == 1 ? 2 * L : L;

    detail::cf_walker w(d);
    bigint h_prev = 1, h = w.a0();
    bigint k_prev = 0, k = 1;
    for (std::size_t idx = 0; idx < steps; ++idx) {
        // h, k is the convergent of index idx; Q_(idx+1) follows after one step
        w.step();
        if (w.Q() == 2 && (idx + 1) % 2 == 0) {
            if (h * h - bigint(d) * k * k != 2)
                fail(errc::invariant_violation, "solve_norm_two: convergent check failed for d=" + std::to_string(d));
            return NormTwoSolution{d, h, k};
        }
        bigint h_next = w.a() * h + h_prev;
        bigint k_next = w.a() * k + k_prev;
        h_prev = std::move(h);
        h = std::move(h_next);
        k_prev = std::move(k);
        k = std::move(k_next);
    }
    return std::nullopt;
}

// -----------------------------------------------------------------------------
// Checks on the units and the norm-2 generators for p = 7 mod 8
// -----------------------------------------------------------------------------

struct UnitIdentityReport {
    bool base = false;     // (x + y sqrt p)^2 / 2 is the fundamental unit of Z[sqrt p]
    bool doubled = false;  // same for d = 2p
    bool all() const { return base && doubled; }
};

namespace detail {

inline bool half_square_is_unit(std::uint64_t d) {
    auto pi = solve_norm_two(d);
    if (!pi) fail(errc::no_norm_two_solution, "x^2 - " + std::to_string(d) + " y^2 = 2 has no solution");
    const bigint rational = pi->x * pi->x + bigint(d) * pi->y * pi->y;
    if (rational % 2 != 0) return false;
    const FundamentalUnit eps = fundamental_unit(d);
    return eps.x == rational / 2 && eps.y == pi->x * pi->y;
}

}  // namespace detail

/// For p = 7 mod 8 the fundamental units of Z[sqrt p] and Z[sqrt 2p] are half
/// the squares of the norm-2 generators.
inline UnitIdentityReport check_eps_eq_pi_squared_over_two(std::uint64_t p) {
    require_odd_prime(p, "check_eps_eq_pi_squared_over_two");
    if (p % 8 != 7) fail(errc::invalid_argument, "check_eps_eq_pi_squared_over_two: p must be 7 mod 8");
    return {detail::half_square_is_unit(p), detail::half_square_is_unit(2 * p)};
}

struct Lemma34Report {
    std::uint64_t p = 0;
    bool two_pm_sqrt2_squares = false;  // 2 + t, 2 - t are QRs, t^2 = 2 mod p
    bool pi_square = false;             // (x/p) = +1 for x^2 - p y^2 = 2
    bool pi_prime_square = false;       // (x'/p) = +1 for x'^2 - 2p y'^2 = 2
    bool all() const { return two_pm_sqrt2_squares && pi_square && pi_prime_square; }
};

/// Local-square checks at p for p = 15 mod 16: both 2 +- sqrt2 and the
/// norm-2 generators of Z[sqrt p], Z[sqrt 2p] are squares mod p.
inline Lemma34Report lemma34_suite(std::uint64_t p) {
    require_odd_prime(p, "lemma34_suite");
    if (p % 16 != 15) fail(errc::invalid_argument, "lemma34_suite: p must be 15 mod 16");
    Lemma34Report r{p};

    const auto t = sqrt_mod(2, p);
    if (!t) fail(errc::invariant_violation, "2 is not a square mod " + std::to_string(p));
    const auto ti = static_cast<std::int64_t>(*t);
    r.two_pm_sqrt2_squares = jacobi(2 + ti, p) == 1 && jacobi(2 - ti, p) == 1;

    auto residue_is_square = [p](std::uint64_t d) {
        auto sol = solve_norm_two(d);
        if (!sol) fail(errc::no_norm_two_solution, "x^2 - " + std::to_string(d) + " y^2 = 2 has no solution");
        const auto x_mod_p = static_cast<std::uint64_t>(sol->x % p);
        return jacobi(x_mod_p, p) == 1;
    };
    r.pi_square = residue_is_square(p);
    r.pi_prime_square = residue_is_square(2 * p);
    return r;
}

}  // namespace pqc
