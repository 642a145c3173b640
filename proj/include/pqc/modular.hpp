#pragma once

/**
 * @file modular.hpp
 * @brief Modular arithmetic kernel.
 *
 * Deterministic primality for the whole 64-bit range, Jacobi symbols for
 * word and double-word arguments, Tonelli-Shanks square roots, the quartic
 * residue symbols (2/p)_4 and (a/p)_4, and a segmented prime stream that can
 * be restricted to one residue class.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "pqc/error.hpp"

namespace pqc {

using i128 = __int128;
using u128 = unsigned __int128;

template <class T>
concept integer_like = std::is_integral_v<T> || std::is_same_v<T, i128> || std::is_same_v<T, u128>;

// -----------------------------------------------------------------------------
// Small helpers for 128-bit values
// -----------------------------------------------------------------------------

inline std::string to_string(u128 x) {
    if (x == 0) return "0";
    std::string s;
    while (x != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

inline std::string to_string(i128 x) {
    if (x < 0) return "-" + to_string(static_cast<u128>(-(x + 1)) + 1);
    return to_string(static_cast<u128>(x));
}

/// floor(sqrt(n)) for any 128-bit unsigned n.
inline u128 isqrt(u128 n) {
    if (n == 0) return 0;
    u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
    // long double carries 64 mantissa bits; fix up the last few units
    while (r > 0 && (r > (~u128{0}) / r || r * r > n)) --r;
    while ((r + 1) <= (~u128{0}) / (r + 1) && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline std::optional<u128> exact_sqrt(u128 n) {
    u128 r = isqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

constexpr std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

constexpr std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Reduce a signed value into [0, m).
template <integer_like T>
constexpr std::uint64_t reduce_mod(T a, std::uint64_t m) {
    if constexpr (std::is_signed_v<T> || std::is_same_v<T, i128>) {
        i128 r = static_cast<i128>(a) % static_cast<i128>(m);
        if (r < 0) r += m;
        return static_cast<std::uint64_t>(r);
    } else {
        return static_cast<std::uint64_t>(static_cast<u128>(a) % m);
    }
}

// -----------------------------------------------------------------------------
// Symbol values
// -----------------------------------------------------------------------------

/// A Legendre, Jacobi, quartic or spin symbol: one of -1, 0, +1.
class symbol_value {
public:
    constexpr symbol_value() = default;
    constexpr explicit symbol_value(int v) : v_(static_cast<std::int8_t>(v)) {
        if (v < -1 || v > 1) fail(errc::invariant_violation, "symbol value out of range: " + std::to_string(v));
    }

    constexpr int value() const noexcept { return v_; }

    friend constexpr symbol_value operator*(symbol_value a, symbol_value b) noexcept {
        symbol_value r;
        r.v_ = static_cast<std::int8_t>(a.v_ * b.v_);
        return r;
    }
    friend constexpr bool operator==(symbol_value a, symbol_value b) noexcept { return a.v_ == b.v_; }
    friend constexpr bool operator==(symbol_value a, int b) noexcept { return a.v_ == b; }

    friend std::ostream& operator<<(std::ostream& os, symbol_value s) {
        return os << (s.v_ > 0 ? "+1" : s.v_ < 0 ? "-1" : "0");
    }

private:
    std::int8_t v_ = 0;
};

inline constexpr symbol_value symbol_plus{1};
inline constexpr symbol_value symbol_minus{-1};
inline constexpr symbol_value symbol_zero{0};

// -----------------------------------------------------------------------------
// Primality
// -----------------------------------------------------------------------------

/// Deterministic Miller-Rabin; the seven bases are a known certificate set
/// for every n < 2^64.
constexpr bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t q : small) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    if (n < 41 * 41) return true;

    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    constexpr std::uint64_t witnesses[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
    for (std::uint64_t w : witnesses) {
        std::uint64_t a = w % n;
        if (a == 0) continue;
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline void require_odd_prime(std::uint64_t p, const char* who) {
    if (p < 3 || !is_prime(p)) fail(errc::not_prime, std::string(who) + ": " + std::to_string(p) + " is not an odd prime");
}

// -----------------------------------------------------------------------------
// Jacobi symbol
// -----------------------------------------------------------------------------

namespace detail {

template <class U>
constexpr int jacobi_unsigned(U a, U n) {
    // binary algorithm; a already reduced mod n
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const unsigned r = static_cast<unsigned>(n & 7);
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace detail

/// Jacobi symbol (a/n) for odd n >= 1. (a/1) = +1.
template <integer_like A, integer_like N>
constexpr symbol_value jacobi(A a, N n) {
    if (n <= 0 || (n & 1) == 0) fail(errc::invalid_argument, "jacobi: modulus must be odd and positive");
    const u128 un = static_cast<u128>(n);
    u128 ua;
    if constexpr (std::is_signed_v<A> || std::is_same_v<A, i128>) {
        i128 r = static_cast<i128>(a) % static_cast<i128>(un);
        if (r < 0) r += static_cast<i128>(un);
        ua = static_cast<u128>(r);
    } else {
        ua = static_cast<u128>(a) % un;
    }
    if (un <= UINT64_MAX)
        return symbol_value{detail::jacobi_unsigned<std::uint64_t>(static_cast<std::uint64_t>(ua), static_cast<std::uint64_t>(un))};
    return symbol_value{detail::jacobi_unsigned<u128>(ua, un)};
}

// -----------------------------------------------------------------------------
// Square roots mod p
// -----------------------------------------------------------------------------

/// A square root of a modulo the odd prime p, normalised into [0, (p-1)/2].
/// Empty when a is a non-residue.
inline std::optional<std::uint64_t> sqrt_mod(std::int64_t a_signed, std::uint64_t p) {
    require_odd_prime(p, "sqrt_mod");
    const std::uint64_t a = reduce_mod(a_signed, p);
    if (a == 0) return 0;
    if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;

    std::uint64_t r;
    if (p % 4 == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks
        std::uint64_t q = p - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        std::uint64_t z = 2;
        while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
        int m = s;
        std::uint64_t c = powmod(z, q, p);
        std::uint64_t t = powmod(a, q, p);
        r = powmod(a, (q + 1) / 2, p);
        while (t != 1) {
            int i = 0;
            std::uint64_t t2 = t;
            while (t2 != 1) {
                t2 = mulmod(t2, t2, p);
                ++i;
            }
            std::uint64_t b = c;
            for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
    }
    if (mulmod(r, r, p) != a) fail(errc::invariant_violation, "sqrt_mod produced a wrong root");
    return std::min(r, p - r);
}

// -----------------------------------------------------------------------------
// Quartic residue symbols
// -----------------------------------------------------------------------------

namespace detail {

inline symbol_value sign_of_power(std::uint64_t a, std::uint64_t p) {
    const std::uint64_t x = powmod(a, (p - 1) / 4, p);
    if (x == 1) return symbol_plus;
    if (x == p - 1) return symbol_minus;
    fail(errc::invariant_violation, "a^((p-1)/4) is neither 1 nor -1 mod " + std::to_string(p));
}

}  // namespace detail

/// (2/p)_4 for a prime p = 1 mod 8.
inline symbol_value quartic_symbol_2(std::uint64_t p) {
    require_odd_prime(p, "quartic_symbol_2");
    if (p % 8 != 1) fail(errc::invalid_argument, "quartic_symbol_2: p must be 1 mod 8, got " + std::to_string(p));
    return detail::sign_of_power(2, p);
}

/// (a/p)_4 for p = 1 mod 4 prime; only defined when (a/p) = +1.
template <integer_like A>
symbol_value quartic_symbol(A a, std::uint64_t p) {
    require_odd_prime(p, "quartic_symbol");
    if (p % 4 != 1) fail(errc::invalid_argument, "quartic_symbol: p must be 1 mod 4, got " + std::to_string(p));
    const std::uint64_t r = reduce_mod(a, p);
    if (jacobi(r, p) != 1) fail(errc::not_quadratic_residue, "quartic_symbol: argument is not a quadratic residue mod " + std::to_string(p));
    return detail::sign_of_power(r, p);
}

// -----------------------------------------------------------------------------
// Prime streams
// -----------------------------------------------------------------------------

/// Plain sieve of Eratosthenes; flags[i] is true iff i is prime, i <= n.
inline std::vector<bool> sieve_flags(std::uint64_t n) {
    std::vector<bool> flags(n + 1, true);
    flags[0] = false;
    if (n >= 1) flags[1] = false;
    for (std::uint64_t i = 2; i * i <= n; ++i)
        if (flags[i])
            for (std::uint64_t j = i * i; j <= n; j += i) flags[j] = false;
    return flags;
}

/// Ascending primes q with lower <= q < upper and q = residue (mod modulus),
/// produced by a segmented sieve.
class PrimeStream {
public:
    static constexpr std::uint64_t segment_span = 1u << 18;

    PrimeStream(std::uint64_t lower, std::uint64_t upper, std::uint64_t modulus = 1, std::uint64_t residue = 0)
        : lower_(lower), upper_(upper), modulus_(modulus), residue_(residue), seg_lo_(lower) {
        if (modulus == 0) fail(errc::invalid_argument, "PrimeStream: modulus must be >= 1");
        if (residue >= modulus) fail(errc::invalid_argument, "PrimeStream: residue must be < modulus");
        if (upper_ > lower_) {
            const std::uint64_t root = static_cast<std::uint64_t>(isqrt(upper_ - 1));
            const auto flags = sieve_flags(root);
            for (std::uint64_t i = 2; i <= root; ++i)
                if (flags[i]) base_.push_back(i);
        }
    }

    std::optional<std::uint64_t> next() {
        for (;;) {
            while (pos_ < segment_.size()) {
                const std::uint64_t idx = pos_++;
                if (!segment_[idx]) continue;
                const std::uint64_t q = seg_start_ + idx;
                if (q % modulus_ == residue_) return q;
            }
            if (seg_lo_ >= upper_) return std::nullopt;
            fill_segment();
        }
    }

    std::vector<std::uint64_t> collect() {
        std::vector<std::uint64_t> out;
        while (auto q = next()) out.push_back(*q);
        return out;
    }

private:
    void fill_segment() {
        seg_start_ = seg_lo_;
        const std::uint64_t hi = (upper_ - seg_lo_ > segment_span) ? seg_lo_ + segment_span : upper_;
        segment_.assign(hi - seg_start_, 1);
        for (std::uint64_t q = seg_start_; q < std::min<std::uint64_t>(hi, 2); ++q) segment_[q - seg_start_] = 0;
        for (std::uint64_t b : base_) {
            if (b * b >= hi) break;
            std::uint64_t first = std::max(b * b, (seg_start_ + b - 1) / b * b);
            for (std::uint64_t m = first; m < hi; m += b) segment_[m - seg_start_] = 0;
        }
        pos_ = 0;
        seg_lo_ = hi;
    }

    std::uint64_t lower_, upper_, modulus_, residue_;
    std::vector<std::uint64_t> base_;
    std::vector<std::uint8_t> segment_;
    std::uint64_t seg_lo_;
    std::uint64_t seg_start_ = 0;
    std::size_t pos_ = 0;
};

inline std::vector<std::uint64_t> primes_between(std::uint64_t lower, std::uint64_t upper, std::uint64_t modulus = 1,
                                                 std::uint64_t residue = 0) {
    return PrimeStream(lower, upper, modulus, residue).collect();
}

}  // namespace pqc
