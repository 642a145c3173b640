#pragma once

/**
 * @file formclass.hpp
 * @brief Class numbers of imaginary quadratic discriminants by counting
 *        reduced primitive positive-definite forms.
 *
 * A form (a, b, c) of discriminant D = b^2 - 4ac < 0 is reduced when
 * |b| <= a <= c, with b >= 0 whenever |b| = a or a = c. Every proper
 * equivalence class contains exactly one reduced form, and for a
 * fundamental D the classes correspond to the ideal classes of Q(sqrt D).
 */

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pqc/error.hpp"
#include "pqc/modular.hpp"

namespace pqc {

struct ReducedForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    /// Ambiguous classes are the elements of order <= 2: b = 0, a = b or a = c.
    bool ambiguous() const { return b == 0 || a == b || a == c; }

    friend bool operator==(const ReducedForm&, const ReducedForm&) = default;
    friend auto operator<=>(const ReducedForm&, const ReducedForm&) = default;
};

struct FormClassSummary {
    std::int64_t D = 0;
    std::uint64_t h = 0;
    unsigned ord2 = 0;
    std::uint64_t ambiguous = 0;
};

inline unsigned two_adic_valuation(std::uint64_t n) {
    if (n == 0) fail(errc::invalid_argument, "two_adic_valuation(0)");
    return static_cast<unsigned>(__builtin_ctzll(n));
}

inline bool is_reduced_primitive(const ReducedForm& f, std::int64_t D) {
    const std::int64_t abs_b = f.b < 0 ? -f.b : f.b;
    if (f.a <= 0 || f.c <= 0) return false;
    if (f.discriminant() != D) return false;
    if (abs_b > f.a || f.a > f.c) return false;
    if ((abs_b == f.a || f.a == f.c) && f.b < 0) return false;
    return std::gcd(std::gcd(f.a, abs_b), f.c) == 1;
}

namespace detail {

inline void require_negative_discriminant(std::int64_t D) {
    if (D >= 0) fail(errc::invalid_argument, "class_number: discriminant must be negative, got " + std::to_string(D));
    const std::int64_t r = ((D % 4) + 4) % 4;
    if (r != 0 && r != 1) fail(errc::invalid_argument, "class_number: discriminant must be 0 or 1 mod 4, got " + std::to_string(D));
    if (D < -(std::int64_t{1} << 60)) fail(errc::invalid_argument, "class_number: discriminant too large");
}

}  // namespace detail

/// Calls visit(form) for each reduced primitive form of discriminant D,
/// ordered by a, then b.
template <class Visitor>
void for_each_reduced_form(std::int64_t D, Visitor&& visit) {
    detail::require_negative_discriminant(D);
    const std::int64_t absD = -D;
    const std::int64_t parity = absD & 1;
    for (std::int64_t a = 1; 3 * a * a <= absD; ++a) {
        const std::int64_t four_a = 4 * a;
        std::int64_t b = -a + 1;
        if (((b % 2) + 2) % 2 != parity) ++b;
        for (; b <= a; b += 2) {
            const std::int64_t num = b * b + absD;
            if (num % four_a != 0) continue;
            const std::int64_t c = num / four_a;
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            const ReducedForm f{a, b, c};
            if (!is_reduced_primitive(f, D)) fail(errc::invariant_violation, "enumerated form is not reduced");
            visit(f);
        }
    }
}

inline std::vector<ReducedForm> reduced_forms(std::int64_t D) {
    std::vector<ReducedForm> out;
    for_each_reduced_form(D, [&](const ReducedForm& f) { out.push_back(f); });
    return out;
}

inline FormClassSummary class_number(std::int64_t D) {
    FormClassSummary s{D, 0, 0, 0};
    for_each_reduced_form(D, [&](const ReducedForm& f) {
        ++s.h;
        if (f.ambiguous()) ++s.ambiguous;
    });
    s.ord2 = two_adic_valuation(s.h);
    if (s.ambiguous > s.h || (s.ambiguous & (s.ambiguous - 1)) != 0)
        fail(errc::invariant_violation, "ambiguous class count is not a power of two <= h for D=" + std::to_string(D));
    return s;
}

/// h(-8p), the class number of Q(sqrt(-2p)).
inline FormClassSummary h2p(std::uint64_t p) {
    require_odd_prime(p, "h2p");
    if (p > (std::uint64_t{1} << 56)) fail(errc::invalid_argument, "h2p: p too large");
    return class_number(-8 * static_cast<std::int64_t>(p));
}

}  // namespace pqc
