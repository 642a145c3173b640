#pragma once

/**
 * @file criteria.hpp
 * @brief Predicted 2-adic valuations of h(-2p) and of h_K, K = Q(p^(1/4)).
 *
 * Each prediction records the criterion (branch) that produced it and the
 * symbols it consulted. Where no finer criterion is known the value is a
 * lower bound and `exact` is false; h_K is never computed, only predicted.
 */

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pqc/error.hpp"
#include "pqc/modular.hpp"
#include "pqc/zsqrt2.hpp"

namespace pqc {

enum class Branch {
    // ord2 h(-2p)
    h2p_pm3mod8,       // p = +-3 mod 8: 2 || h
    h2p_7mod16,        // p = 7 mod 16: 4 || h
    h2p_15mod16,       // p = 15 mod 16: 8 || h iff (-1)^((p+1)/16) (p) = -1
    h2p_quartic2,      // p = 1 mod 8, (2/p)_4 = -1: 4 || h
    h2p_quartic_u,     // p = 1 mod 8, (2/p)_4 = +1: 8 || h iff (u/p)_4 = -1
    // ord2 h_K
    hK_odd,            // p = 2 or +-3 mod 8
    hK_pm7mod16,       // p = +-7 mod 16 (includes 9 mod 16)
    hK_quartic2,       // p = 1 mod 16: 2 || h_K iff (2/p)_4 = -1
    hK_15mod16,        // p = 15 mod 16: 4 | h_K
    hK_conjecture,     // p = 15 mod 16 assuming 4 || h_K iff (p) = -1
};

constexpr std::string_view to_string(Branch b) noexcept {
    switch (b) {
        case Branch::h2p_pm3mod8: return "Redei-pm3mod8";
        case Branch::h2p_7mod16: return "Hasse-7mod16";
        case Branch::h2p_15mod16: return "LeonardWilliams-15mod16";
        case Branch::h2p_quartic2: return "quartic2-1mod8";
        case Branch::h2p_quartic_u: return "quarticU-1mod8";
        case Branch::hK_odd: return "odd-pm3mod8";
        case Branch::hK_pm7mod16: return "Lemmermeyer-pm7mod16";
        case Branch::hK_quartic2: return "quartic2-1mod16";
        case Branch::hK_15mod16: return "div4-15mod16";
        case Branch::hK_conjecture: return "conjecture-15mod16";
    }
    return "unknown";
}

struct Ord2Prediction {
    unsigned value = 0;
    bool exact = false;  // false: value is only a lower bound
    Branch branch{};
    std::vector<std::pair<std::string, symbol_value>> symbols_used;

    bool consulted(std::string_view name) const {
        for (const auto& [n, s] : symbols_used)
            if (n == name) return true;
        return false;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Ord2Prediction& p) {
    os << (p.exact ? "ord2=" : "ord2>=") << p.value << " branch=" << to_string(p.branch);
    for (const auto& [n, s] : p.symbols_used) os << " " << n << "=" << s;
    return os;
}

namespace symbol_names {
inline constexpr std::string_view quartic2 = "(2/p)_4";
inline constexpr std::string_view quartic_u = "(u/p)_4";
inline constexpr std::string_view invariant = "(p)";
inline constexpr std::string_view sign = "(-1)^((p+1)/16)";
}  // namespace symbol_names

inline symbol_value sign_p_plus_1_over_16(std::uint64_t p) { return ((p + 1) / 16) % 2 == 0 ? symbol_plus : symbol_minus; }

/// ord2 h(-2p) for an odd prime p.
inline Ord2Prediction predict_ord2_h2p(std::uint64_t p) {
    require_odd_prime(p, "predict_ord2_h2p");
    Ord2Prediction r;
    const std::uint64_t m8 = p % 8;
    if (m8 == 3 || m8 == 5) {
        r = {1, true, Branch::h2p_pm3mod8, {}};
    } else if (p % 16 == 7) {
        r = {2, true, Branch::h2p_7mod16, {}};
    } else if (p % 16 == 15) {
        const symbol_value inv = invariant(p);
        const symbol_value sign = sign_p_plus_1_over_16(p);
        const bool eight_exact = (sign * inv) == -1;
        r = {eight_exact ? 3u : 4u, eight_exact, Branch::h2p_15mod16,
             {{std::string(symbol_names::sign), sign}, {std::string(symbol_names::invariant), inv}}};
    } else {
        const symbol_value q2 = quartic_symbol_2(p);
        if (q2 == -1) {
            r = {2, true, Branch::h2p_quartic2, {{std::string(symbol_names::quartic2), q2}}};
        } else {
            // (2/p)_4 = +1 makes (u/p) = +1, so (u/p)_4 is defined here
            const NormDecomposition d = decompose(p);
            const symbol_value qu = quartic_symbol(d.u, p);
            const bool eight_exact = qu == -1;
            r = {eight_exact ? 3u : 4u, eight_exact, Branch::h2p_quartic_u,
                 {{std::string(symbol_names::quartic2), q2}, {std::string(symbol_names::quartic_u), qu}}};
        }
    }
    return r;
}

/// ord2 h_K for K = Q(p^(1/4)); with assume_conjecture the p = 15 mod 16
/// branch uses 4 || h_K iff (p) = -1.
inline Ord2Prediction predict_ord2_hK(std::uint64_t p, bool assume_conjecture) {
    if (!is_prime(p)) fail(errc::not_prime, "predict_ord2_hK: " + std::to_string(p) + " is not prime");
    const std::uint64_t m8 = p % 8, m16 = p % 16;
    if (p == 2 || m8 == 3 || m8 == 5) return {0, true, Branch::hK_odd, {}};
    if (m16 == 7 || m16 == 9) return {1, true, Branch::hK_pm7mod16, {}};
    if (m16 == 1) {
        const symbol_value q2 = quartic_symbol_2(p);
        return {q2 == -1 ? 1u : 2u, q2 == -1, Branch::hK_quartic2, {{std::string(symbol_names::quartic2), q2}}};
    }
    // m16 == 15
    if (!assume_conjecture) return {2, false, Branch::hK_15mod16, {}};
    const symbol_value inv = invariant(p);
    return {inv == -1 ? 2u : 3u, inv == -1, Branch::hK_conjecture, {{std::string(symbol_names::invariant), inv}}};
}

/// ord2 h(-2p) = ord2 h_K + 1, checked where both sides are known exactly
/// (p = +-3 mod 8 or p = 7 mod 16). Empty elsewhere.
inline std::optional<bool> relation_check(std::uint64_t p) {
    require_odd_prime(p, "relation_check");
    const std::uint64_t m8 = p % 8;
    if (!(m8 == 3 || m8 == 5 || p % 16 == 7)) return std::nullopt;
    const Ord2Prediction a = predict_ord2_h2p(p);
    const Ord2Prediction b = predict_ord2_hK(p, false);
    return a.exact && b.exact && a.value == b.value + 1;
}

}  // namespace pqc
