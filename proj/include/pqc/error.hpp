#pragma once

/**
 * @file error.hpp
 * @brief Error type shared by every pqc module.
 *
 * Two families of failure exist. Input errors mean the caller asked for
 * something outside an operation's domain (a composite "prime", a residue
 * class where a symbol is undefined). Internal errors mean an invariant the
 * mathematics guarantees did not hold, which always points at a bug or at an
 * arithmetic overflow.
 */

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqc {

enum class errc {
    invalid_argument,       // generic domain violation
    not_prime,
    not_representable,      // p is not a norm from Z[sqrt2]
    not_quadratic_residue,  // quartic symbol requested where (a/p) != +1
    overflow,
    search_bound_exceeded,
    invariant_violation,
    no_norm_two_solution,
};

constexpr bool is_internal(errc c) noexcept {
    switch (c) {
        case errc::overflow:
        case errc::search_bound_exceeded:
        case errc::invariant_violation:
        case errc::no_norm_two_solution:
            return true;
        default:
            return false;
    }
}

constexpr std::string_view to_string(errc c) noexcept {
    switch (c) {
        case errc::invalid_argument: return "InvalidArgument";
        case errc::not_prime: return "NotPrime";
        case errc::not_representable: return "NotRepresentable";
        case errc::not_quadratic_residue: return "NotQuadraticResidue";
        case errc::overflow: return "Overflow";
        case errc::search_bound_exceeded: return "SearchBoundExceeded";
        case errc::invariant_violation: return "InvariantViolation";
        case errc::no_norm_two_solution: return "NoNormTwoSolution";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    bool internal() const noexcept { return is_internal(code_); }

private:
    errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace pqc
