#pragma once

/**
 * @file zsqrt2.hpp
 * @brief Arithmetic in Z[sqrt2] and the symbols attached to p = u^2 - 2v^2.
 *
 * basic_zsqrt2<Int> is an element a + b*sqrt2. With a builtin integer type
 * every product and sum is overflow-checked and raises errc::overflow instead
 * of wrapping; with cpp_int the arithmetic is exact.
 *
 * For a prime p = +-1 mod 8 the canonical decomposition p = u^2 - 2v^2 has
 * u, v > 0 and u = 1 mod 4. The invariant (p) = (2u/v) is attached to it when
 * p = 7 mod 8, and the spin symbols [u + v sqrt2], [u + v sqrt2]' are defined
 * for every totally positive element.
 */

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pqc/error.hpp"
#include "pqc/modular.hpp"

namespace pqc {

using bigint = boost::multiprecision::cpp_int;

namespace detail {

template <class T>
T checked_add(const T& x, const T& y) {
    if constexpr (integer_like<T>) {
        T r;
        if (__builtin_add_overflow(x, y, &r)) fail(errc::overflow, "Z[sqrt2] addition overflow");
        return r;
    } else {
        return x + y;
    }
}

template <class T>
T checked_sub(const T& x, const T& y) {
    if constexpr (integer_like<T>) {
        T r;
        if (__builtin_sub_overflow(x, y, &r)) fail(errc::overflow, "Z[sqrt2] subtraction overflow");
        return r;
    } else {
        return x - y;
    }
}

template <class T>
T checked_mul(const T& x, const T& y) {
    if constexpr (integer_like<T>) {
        T r;
        if (__builtin_mul_overflow(x, y, &r)) fail(errc::overflow, "Z[sqrt2] multiplication overflow");
        return r;
    } else {
        return x * y;
    }
}

inline std::string int_string(i128 x) { return to_string(x); }
inline std::string int_string(const bigint& x) { return x.str(); }
template <class T>
    requires std::is_integral_v<T>
std::string int_string(T x) {
    return std::to_string(x);
}

}  // namespace detail

template <class Int>
struct basic_zsqrt2 {
    Int a{};  // rational part
    Int b{};  // coefficient of sqrt2

    friend bool operator==(const basic_zsqrt2&, const basic_zsqrt2&) = default;

    friend std::ostream& operator<<(std::ostream& os, const basic_zsqrt2& x) {
        os << detail::int_string(x.a);
        if (x.b < 0)
            os << "-" << detail::int_string(Int(-x.b));
        else
            os << "+" << detail::int_string(x.b);
        return os << "*sqrt2";
    }
};

using zsqrt2 = basic_zsqrt2<i128>;
using big_zsqrt2 = basic_zsqrt2<bigint>;

template <class Int>
basic_zsqrt2<Int> mul(const basic_zsqrt2<Int>& x, const basic_zsqrt2<Int>& y) {
    using namespace detail;
    const Int two{2};
    return {checked_add(checked_mul(x.a, y.a), checked_mul(two, checked_mul(x.b, y.b))),
            checked_add(checked_mul(x.a, y.b), checked_mul(y.a, x.b))};
}

template <class Int>
basic_zsqrt2<Int> conj(const basic_zsqrt2<Int>& x) {
    return {x.a, detail::checked_sub(Int{0}, x.b)};
}

template <class Int>
Int norm(const basic_zsqrt2<Int>& x) {
    using namespace detail;
    return checked_sub(checked_mul(x.a, x.a), checked_mul(Int{2}, checked_mul(x.b, x.b)));
}

/// a > 0 and a^2 > 2 b^2, i.e. both real embeddings are positive.
template <class Int>
bool totally_positive(const basic_zsqrt2<Int>& x) {
    return x.a > 0 && norm(x) > 0;
}

template <class Int>
basic_zsqrt2<Int> widen(const zsqrt2& x) {
    return {Int(x.a), Int(x.b)};
}

/// x * (1 + sqrt2)^(2k); negative k multiplies by powers of 3 - 2 sqrt2.
template <class Int>
basic_zsqrt2<Int> unit_shift(const basic_zsqrt2<Int>& x, std::int64_t k) {
    basic_zsqrt2<Int> unit = k >= 0 ? basic_zsqrt2<Int>{Int{3}, Int{2}} : basic_zsqrt2<Int>{Int{3}, Int{-2}};
    std::uint64_t e = k >= 0 ? static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(-(k + 1)) + 1;
    basic_zsqrt2<Int> result = x;
    while (e > 0) {
        if (e & 1) result = mul(result, unit);
        e >>= 1;
        if (e > 0) unit = mul(unit, unit);
    }
    return result;
}

// -----------------------------------------------------------------------------
// Norm decompositions p = u^2 - 2 v^2
// -----------------------------------------------------------------------------

struct NormDecomposition {
    std::uint64_t p = 0;
    std::int64_t u = 0;
    std::int64_t v = 0;

    zsqrt2 element() const { return {u, v}; }
    friend bool operator==(const NormDecomposition&, const NormDecomposition&) = default;
};

/// Upper limit on v for the minimal-v search: ceil(4.2 sqrt p).
inline std::uint64_t decomposition_search_bound(std::uint64_t p) {
    return static_cast<std::uint64_t>(std::ceil(4.2L * std::sqrt(static_cast<long double>(p))));
}

namespace detail {

inline void require_split_prime(std::uint64_t p) {
    if (!is_prime(p)) fail(errc::not_prime, "decompose: " + std::to_string(p) + " is not prime");
    if (p % 8 != 1 && p % 8 != 7)
        fail(errc::not_representable, std::to_string(p) + " is not of the form u^2 - 2v^2 (p must be +-1 mod 8)");
}

inline void verify_decomposition(const NormDecomposition& d) {
    const i128 lhs = static_cast<i128>(d.u) * d.u - 2 * static_cast<i128>(d.v) * d.v;
    if (lhs != static_cast<i128>(d.p) || d.u <= 0 || d.v <= 0)
        fail(errc::invariant_violation, "decomposition does not satisfy u^2 - 2v^2 = p for p=" + std::to_string(d.p));
}

}  // namespace detail

/// Positive solution of u^2 - 2v^2 = p with the smallest v.
inline NormDecomposition minimal_decomposition(std::uint64_t p) {
    detail::require_split_prime(p);
    const std::uint64_t bound = decomposition_search_bound(p);
    for (std::uint64_t v = 1; v <= bound; ++v) {
        const u128 s = static_cast<u128>(p) + 2 * static_cast<u128>(v) * v;
        if (auto u = exact_sqrt(s)) {
            NormDecomposition d{p, static_cast<std::int64_t>(*u), static_cast<std::int64_t>(v)};
            detail::verify_decomposition(d);
            return d;
        }
    }
    fail(errc::search_bound_exceeded, "no u^2 - 2v^2 = " + std::to_string(p) + " with v <= " + std::to_string(bound));
}

/// Canonical decomposition: the minimal-v solution, moved once by
/// (1 + sqrt2)^2 when its u is 3 mod 4.
inline NormDecomposition decompose(std::uint64_t p) {
    NormDecomposition d = minimal_decomposition(p);
    if (d.u % 4 == 3) {
        const zsqrt2 shifted = unit_shift(d.element(), 1);
        if (shifted.a > INT64_MAX || shifted.b > INT64_MAX) fail(errc::overflow, "decompose: coefficients exceed 64 bits");
        d.u = static_cast<std::int64_t>(shifted.a);
        d.v = static_cast<std::int64_t>(shifted.b);
    }
    detail::verify_decomposition(d);
    if (d.u % 4 != 1) fail(errc::invariant_violation, "canonical u is not 1 mod 4 for p=" + std::to_string(p));
    if (p % 8 == 7 && (d.v % 2 == 0))
        fail(errc::invariant_violation, "v is even for p = 7 mod 8, p=" + std::to_string(p));
    return d;
}

/// (2u/v) for an arbitrary positive decomposition with v odd.
inline symbol_value invariant_of(i128 u, i128 v) { return jacobi(2 * u, v); }

/// The invariant (p) = (2u/v) for p = 7 mod 8.
inline symbol_value invariant(std::uint64_t p) {
    if (p % 8 != 7) fail(errc::invalid_argument, "invariant: p must be 7 mod 8, got " + std::to_string(p));
    const NormDecomposition d = decompose(p);
    return invariant_of(d.u, d.v);
}

/// (-1)^((p+1)/16) * (p) for p = 15 mod 16.
inline symbol_value twisted_invariant(std::uint64_t p) {
    if (p % 16 != 15) fail(errc::invalid_argument, "twisted_invariant: p must be 15 mod 16, got " + std::to_string(p));
    const symbol_value sign = ((p + 1) / 16) % 2 == 0 ? symbol_plus : symbol_minus;
    return sign * invariant(p);
}

/// Several positive solutions of u^2 - 2v^2 = p drawn from both unit orbits:
/// the minimal one, the canonical one, the canonical one shifted by
/// (1+sqrt2)^2 and (1+sqrt2)^4, and the first two positive elements of the
/// orbit of the conjugate u - v sqrt2.
inline std::vector<zsqrt2> sample_decompositions(std::uint64_t p) {
    const NormDecomposition canon = decompose(p);
    std::vector<zsqrt2> out;
    out.push_back(minimal_decomposition(p).element());
    out.push_back(canon.element());
    out.push_back(unit_shift(canon.element(), 1));
    out.push_back(unit_shift(canon.element(), 2));
    zsqrt2 c = conj(canon.element());
    int found = 0;
    for (int k = 0; k < 8 && found < 2; ++k, c = unit_shift(c, 1)) {
        if (c.a > 0 && c.b > 0) {
            out.push_back(c);
            ++found;
        }
    }
    for (const zsqrt2& x : out)
        if (norm(x) != static_cast<i128>(p)) fail(errc::invariant_violation, "sample decomposition has wrong norm");
    return out;
}

// -----------------------------------------------------------------------------
// Spin symbols
// -----------------------------------------------------------------------------

namespace detail {

inline void require_totally_positive(const zsqrt2& x, const char* who) {
    if (!totally_positive(x)) {
        std::ostringstream os;
        os << who << ": element " << x << " is not totally positive";
        fail(errc::invalid_argument, os.str());
    }
}

}  // namespace detail

/// [u + v sqrt2] = (v/u) for odd u, 0 otherwise.
inline symbol_value spin(const zsqrt2& x) {
    detail::require_totally_positive(x, "spin");
    if (x.a % 2 == 0) return symbol_zero;
    return jacobi(x.b, x.a);
}

/// lambda(u + v sqrt2) = (-1)^((N+1)/16) when N = u^2 - 2v^2 = -1 mod 16, else 1.
inline symbol_value lambda_twist(const zsqrt2& x) {
    detail::require_totally_positive(x, "lambda_twist");
    const i128 n = norm(x);
    if (n % 16 != 15) return symbol_plus;
    return ((n + 1) / 16) % 2 == 0 ? symbol_plus : symbol_minus;
}

inline symbol_value twisted_spin(const zsqrt2& x) { return spin(x) * lambda_twist(x); }

}  // namespace pqc
