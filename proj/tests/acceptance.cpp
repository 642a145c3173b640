// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "pqc/pqc.hpp"

using namespace pqc;

namespace {

// Pinned targets and tolerances.
constexpr std::uint64_t census_limit = 1000000;
constexpr std::uint64_t expected_15mod32 = 4927;
constexpr std::uint64_t expected_inv_minus = 2416;
constexpr std::uint64_t expected_inv_plus = 2511;
constexpr double census_max_seconds = 10.0;
constexpr std::uint64_t oracle_limit = 100000;
constexpr double oracle_max_seconds = 120.0;
constexpr double half_band_lo = 0.47, half_band_hi = 0.53;
constexpr double sixteenth_band_lo = 0.055, sixteenth_band_hi = 0.070;
constexpr std::uint64_t lemma34_limit = 100000;
constexpr std::uint64_t invariant_independence_limit = 10000;
constexpr std::uint64_t spin_seed = 1;
constexpr std::size_t spin_count = 1000;
constexpr std::uint64_t unit_identity_limit = 10000;

int failures = 0;

void report(int n, bool ok, const std::string& name, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << "criterion " << n << ' ' << (ok ? "PASS" : "FAIL") << ' ' << name << ": " << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string suite_detail(const SuiteResult& s) {
    std::ostringstream os;
    os << s.name << " checked=" << s.checked << " failed=" << s.failed;
    for (const auto& w : s.witnesses) os << " [" << w << "]";
    return os.str();
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

}  // namespace

int main() {
    const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

    // 1, 2, 6: census at 10^6
    auto t0 = std::chrono::steady_clock::now();
    const CensusReport c = census(census_limit);
    const double census_s = seconds_since(t0);
    report(1, c.count_15mod32 == expected_15mod32 && census_s < census_max_seconds, "census count p=15 mod 32 below 10^6",
           "count_15mod32=" + std::to_string(c.count_15mod32) + " expected=" + std::to_string(expected_15mod32) +
               " time=" + fmt(census_s) + "s limit=" + fmt(census_max_seconds) + "s");
    {
        const bool ok = c.count_inv_minus == expected_inv_minus && c.count_inv_plus == expected_inv_plus;
        std::string detail = "count_inv_minus=" + std::to_string(c.count_inv_minus) + " expected=" +
                             std::to_string(expected_inv_minus) + " count_inv_plus=" + std::to_string(c.count_inv_plus) +
                             " expected=" + std::to_string(expected_inv_plus) + " (assuming 4||h_K <=> (p)=-1)";
        if (!ok) {
            detail += " primes with (p)=-1:";
            for (std::uint64_t p : c.primes_15mod32_inv_minus) detail += " " + std::to_string(p);
        }
        report(2, ok, "conjecture-linked counts", detail);
    }

    // 3, 4, 5, 9: exact class-number oracle below 10^5
    t0 = std::chrono::steady_clock::now();
    const OracleCampaignReport o = oracle_campaign(oracle_limit, jobs);
    const double oracle_s = seconds_since(t0);
    report(3, o.agreement.passed() && oracle_s < oracle_max_seconds, "oracle agreement below 10^5",
           suite_detail(o.agreement) + " exact=" + std::to_string(o.exact_branches) + " bound=" +
               std::to_string(o.bound_branches) + " time=" + fmt(oracle_s) + "s limit=" + fmt(oracle_max_seconds) + "s");
    report(4, o.eight_criterion.passed() && o.eight_criterion.checked > 0, "ord2 h(-2p) = 3 criterion for p = 15 mod 16",
           suite_detail(o.eight_criterion));
    report(5, o.relation.passed() && o.relation.checked > 0, "ord2 h(-2p) = ord2 h_K + 1", suite_detail(o.relation));

    // 6
    {
        const bool ok = in_band(c.density_inv_minus_mod16, half_band_lo, half_band_hi) &&
                        in_band(c.density_twisted_mod16, half_band_lo, half_band_hi) &&
                        in_band(c.density_quartic_1mod16, sixteenth_band_lo, sixteenth_band_hi);
        report(6, ok, "density bands at 10^6",
               "inv_minus=" + fmt(c.density_inv_minus_mod16) + " twisted_minus=" + fmt(c.density_twisted_mod16) + " in [" +
                   fmt(half_band_lo) + "," + fmt(half_band_hi) + "]; quartic_1mod16=" + fmt(c.density_quartic_1mod16) +
                   " in [" + fmt(sixteenth_band_lo) + "," + fmt(sixteenth_band_hi) + "]");
    }

    // 7
    {
        const SuiteResult l34 = lemma34_campaign(lemma34_limit, jobs);
        const SuiteResult independence = invariant_independence_campaign(invariant_independence_limit);
        const SuiteResult spin = spin_invariance_campaign(spin_seed, spin_count);
        const bool ok = l34.passed() && independence.passed() && spin.passed() && l34.checked > 0 && independence.checked > 0 &&
                        spin.checked == spin_count;
        report(7, ok, "lemma suites", suite_detail(l34) + "; " + suite_detail(independence) + "; " + suite_detail(spin));
    }

    // 8
    {
        const SuiteResult u = unit_identity_campaign(unit_identity_limit, jobs);
        report(8, u.passed() && u.checked > 0, "unit identity below 10^4", suite_detail(u));
    }

    report(9, o.genus.passed() && o.genus.checked > 0, "two ambiguous classes and 2 | h(-8p) below 10^5", suite_detail(o.genus));

    std::cout << "acceptance " << (failures == 0 ? "PASS" : "FAIL") << " (" << failures << " failed)" << std::endl;
    return failures == 0 ? 0 : 1;
}
