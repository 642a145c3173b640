#pragma once

/**
 * @file batch.hpp
 * @brief Verification campaigns over prime ranges.
 *
 * scan() produces one ScanRecord per odd prime, optionally checked against
 * the exact class-number oracle. census() and density_table() count the
 * residue-class and symbol statistics; the lemma and oracle campaigns rerun
 * the proved statements over whole ranges and collect witnesses of failure.
 *
 * Work is split into contiguous blocks of primes. Workers fill
 * pre-assigned slots and results are emitted in prime order, so output does
 * not depend on the number of workers.
 */

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pqc/criteria.hpp"
#include "pqc/error.hpp"
#include "pqc/formclass.hpp"
#include "pqc/modular.hpp"
#include "pqc/realquad.hpp"
#include "pqc/zsqrt2.hpp"

namespace pqc {

// -----------------------------------------------------------------------------
// Parallel helper
// -----------------------------------------------------------------------------

namespace detail {

/// out[i] = fn(items[i]), computed by up to `jobs` threads over contiguous
/// chunks. The exception thrown for the smallest index wins.
template <class T, class Fn>
auto ordered_map(const std::vector<T>& items, unsigned jobs, Fn&& fn) {
    using R = std::decay_t<decltype(fn(items.front()))>;
    std::vector<std::optional<R>> slots(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(items.size(), 1))));

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                slots[i].emplace(fn(items[i]));
            } catch (...) {
                errors[i] = std::current_exception();
                return;
            }
        }
    };
    if (jobs == 1) {
        work(0, items.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (items.size() + jobs - 1) / jobs;
        for (unsigned j = 0; j < jobs; ++j) {
            const std::size_t lo = j * chunk, hi = std::min(items.size(), lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back(work, lo, hi);
        }
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

template <class Fn>
auto with_prime_context(std::uint64_t p, Fn&& fn) {
    try {
        return fn();
    } catch (const error& e) {
        throw error(e.code(), "p=" + std::to_string(p) + ": " + e.detail());
    }
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Scan records
// -----------------------------------------------------------------------------

inline constexpr int scan_schema_version = 1;
inline constexpr const char* scan_csv_columns = "p,res32,u,v,inv,q2,h2p_pred,h2p_exactflag,h2p_actual,hK_pred,hK_exactflag,hK_conj";

struct ScanRecord {
    std::uint64_t p = 0;
    unsigned res32 = 0;
    std::optional<std::int64_t> u, v;  // p = +-1 mod 8
    std::optional<int> inv;            // p = 7 mod 8
    std::optional<int> q2;             // p = 1 mod 8
    unsigned h2p_pred = 0;
    bool h2p_exact = false;
    std::optional<unsigned> h2p_actual;  // p <= exact_limit
    unsigned hK_pred = 0;
    bool hK_exact = false;
    std::optional<unsigned> hK_conj;  // conjecture mode

    /// Exact prediction disagreeing with the oracle, or a violated lower bound.
    bool flagged() const {
        if (!h2p_actual) return false;
        return h2p_exact ? h2p_pred != *h2p_actual : h2p_pred > *h2p_actual;
    }

    friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

/// Branch tags are a function of the stored fields, so they need no column.
inline Branch h2p_branch_of(const ScanRecord& r) {
    const std::uint64_t m8 = r.p % 8;
    if (m8 == 3 || m8 == 5) return Branch::h2p_pm3mod8;
    if (r.p % 16 == 7) return Branch::h2p_7mod16;
    if (r.p % 16 == 15) return Branch::h2p_15mod16;
    return r.q2 && *r.q2 == -1 ? Branch::h2p_quartic2 : Branch::h2p_quartic_u;
}

inline Branch hK_branch_of(const ScanRecord& r) {
    const std::uint64_t m8 = r.p % 8, m16 = r.p % 16;
    if (r.p == 2 || m8 == 3 || m8 == 5) return Branch::hK_odd;
    if (m16 == 7 || m16 == 9) return Branch::hK_pm7mod16;
    if (m16 == 1) return Branch::hK_quartic2;
    return Branch::hK_15mod16;
}

using H2pPredictor = std::function<Ord2Prediction(std::uint64_t)>;

struct ResidueClass {
    std::uint64_t modulus = 1;
    std::uint64_t residue = 0;
};

struct ScanOptions {
    std::uint64_t exact_limit = 0;  // run the class-number oracle for p <= exact_limit
    bool conjecture = false;
    unsigned jobs = 1;
    std::vector<ResidueClass> classes;  // keep p if it lies in any class; empty keeps all
    H2pPredictor h2p_predictor;         // defaults to predict_ord2_h2p
    std::optional<std::filesystem::path> cache_path;
};

inline ScanRecord make_record(std::uint64_t p, const ScanOptions& opts) {
    return detail::with_prime_context(p, [&] {
        require_odd_prime(p, "scan");
        ScanRecord r;
        r.p = p;
        r.res32 = static_cast<unsigned>(p % 32);
        const std::uint64_t m8 = p % 8;
        if (m8 == 1 || m8 == 7) {
            const NormDecomposition d = decompose(p);
            r.u = d.u;
            r.v = d.v;
            if (m8 == 7) r.inv = invariant_of(d.u, d.v).value();
            if (m8 == 1) r.q2 = quartic_symbol_2(p).value();
        }
        const Ord2Prediction h2 = opts.h2p_predictor ? opts.h2p_predictor(p) : predict_ord2_h2p(p);
        r.h2p_pred = h2.value;
        r.h2p_exact = h2.exact;
        if (p <= opts.exact_limit) r.h2p_actual = h2p(p).ord2;
        const Ord2Prediction hk = predict_ord2_hK(p, false);
        r.hK_pred = hk.value;
        r.hK_exact = hk.exact;
        if (opts.conjecture) r.hK_conj = predict_ord2_hK(p, true).value;
        return r;
    });
}

// -----------------------------------------------------------------------------
// CSV / JSON / table encodings
// -----------------------------------------------------------------------------

inline void write_csv_header(std::ostream& os) {
    os << "schema=" << scan_schema_version << '\n' << scan_csv_columns << '\n';
}

inline std::string to_csv_row(const ScanRecord& r) {
    std::ostringstream os;
    auto opt = [&os](const auto& o) {
        if (o) os << *o;
    };
    os << r.p << ',' << r.res32 << ',';
    opt(r.u);
    os << ',';
    opt(r.v);
    os << ',';
    opt(r.inv);
    os << ',';
    opt(r.q2);
    os << ',' << r.h2p_pred << ',' << (r.h2p_exact ? 1 : 0) << ',';
    opt(r.h2p_actual);
    os << ',' << r.hK_pred << ',' << (r.hK_exact ? 1 : 0) << ',';
    opt(r.hK_conj);
    return os.str();
}

namespace detail {

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
    if (s.empty()) return false;
    std::istringstream is(s);
    is >> out;
    return !is.fail() && is.eof();
}

template <class T>
bool parse_optional(const std::string& s, std::optional<T>& out) {
    if (s.empty()) {
        out.reset();
        return true;
    }
    T v{};
    if (!parse_number(s, v)) return false;
    out = v;
    return true;
}

inline bool parse_flag(const std::string& s, bool& out) {
    if (s == "1") out = true;
    else if (s == "0") out = false;
    else return false;
    return true;
}

}  // namespace detail

inline std::optional<ScanRecord> parse_csv_row(const std::string& line) {
    const auto f = detail::split_commas(line);
    if (f.size() != 12) return std::nullopt;
    ScanRecord r;
    using namespace detail;
    if (!parse_number(f[0], r.p) || !parse_number(f[1], r.res32) || !parse_optional(f[2], r.u) ||
        !parse_optional(f[3], r.v) || !parse_optional(f[4], r.inv) || !parse_optional(f[5], r.q2) ||
        !parse_number(f[6], r.h2p_pred) || !parse_flag(f[7], r.h2p_exact) || !parse_optional(f[8], r.h2p_actual) ||
        !parse_number(f[9], r.hK_pred) || !parse_flag(f[10], r.hK_exact) || !parse_optional(f[11], r.hK_conj))
        return std::nullopt;
    if (r.res32 != r.p % 32) return std::nullopt;
    return r;
}

inline nlohmann::ordered_json to_json(const ScanRecord& r) {
    nlohmann::ordered_json j;
    auto opt = [](const auto& o) { return o ? nlohmann::ordered_json(*o) : nlohmann::ordered_json(nullptr); };
    j["p"] = r.p;
    j["res32"] = r.res32;
    j["u"] = opt(r.u);
    j["v"] = opt(r.v);
    j["inv"] = opt(r.inv);
    j["q2"] = opt(r.q2);
    j["h2p_pred"] = r.h2p_pred;
    j["h2p_exactflag"] = r.h2p_exact ? 1 : 0;
    j["h2p_actual"] = opt(r.h2p_actual);
    j["hK_pred"] = r.hK_pred;
    j["hK_exactflag"] = r.hK_exact ? 1 : 0;
    j["hK_conj"] = opt(r.hK_conj);
    j["h2p_branch"] = std::string(to_string(h2p_branch_of(r)));
    j["hK_branch"] = std::string(to_string(hK_branch_of(r)));
    return j;
}

inline std::string to_table_row(const ScanRecord& r) {
    auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string("-"); };
    auto pred = [](unsigned v, bool exact) { return (exact ? "=" : ">=") + std::to_string(v); };
    char buf[256];
    std::snprintf(buf, sizeof buf, "%12llu %5u %14s %14s %4s %4s %6s %6s %6s %6s%s",
                  static_cast<unsigned long long>(r.p), r.res32, opt(r.u).c_str(), opt(r.v).c_str(), opt(r.inv).c_str(),
                  opt(r.q2).c_str(), pred(r.h2p_pred, r.h2p_exact).c_str(), opt(r.h2p_actual).c_str(),
                  pred(r.hK_pred, r.hK_exact).c_str(), opt(r.hK_conj).c_str(), r.flagged() ? " FLAG" : "");
    return buf;
}

inline std::string table_header() {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%12s %5s %14s %14s %4s %4s %6s %6s %6s %6s", "p", "res32", "u", "v", "inv", "q2",
                  "h2p", "actual", "hK", "hKconj");
    return buf;
}

// -----------------------------------------------------------------------------
// Resumable cache
// -----------------------------------------------------------------------------

/// CSV file of completed records keyed by p. Lines not terminated by LF are
/// discarded (and truncated away) on load; only one writer appends.
class ScanCache {
public:
    ScanCache(std::filesystem::path path, const ScanOptions& opts) : path_(std::move(path)) { load(opts); }

    const ScanRecord* find(std::uint64_t p) const {
        auto it = records_.find(p);
        return it == records_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return records_.size(); }

    void append(const std::vector<ScanRecord>& batch) {
        if (batch.empty()) return;
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) fail(errc::invalid_argument, "cannot write cache " + path_.string());
        for (const ScanRecord& r : batch) {
            out << to_csv_row(r) << '\n';
            records_.emplace(r.p, r);
        }
        out.flush();
    }

private:
    void load(const ScanOptions& opts) {
        std::string content;
        if (std::filesystem::exists(path_)) {
            std::ifstream in(path_, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            content = ss.str();
        }
        // keep only complete lines
        const std::size_t last_lf = content.rfind('\n');
        const std::size_t valid_len = last_lf == std::string::npos ? 0 : last_lf + 1;
        content.resize(valid_len);

        std::vector<std::string> lines;
        std::size_t start = 0;
        while (start < content.size()) {
            const std::size_t end = content.find('\n', start);
            lines.push_back(content.substr(start, end - start));
            start = end + 1;
        }

        if (lines.size() < 2) {
            std::ofstream out(path_, std::ios::binary | std::ios::trunc);
            if (!out) fail(errc::invalid_argument, "cannot create cache " + path_.string());
            write_csv_header(out);
            return;
        }
        if (lines[0] != "schema=" + std::to_string(scan_schema_version) || lines[1] != scan_csv_columns)
            fail(errc::invalid_argument, "cache " + path_.string() + " has a different schema");
        for (std::size_t i = 2; i < lines.size(); ++i) {
            auto r = parse_csv_row(lines[i]);
            if (!r) fail(errc::invalid_argument, "cache " + path_.string() + ": malformed line " + std::to_string(i + 1));
            const bool wants_actual = r->p <= opts.exact_limit;
            if (wants_actual != r->h2p_actual.has_value() || opts.conjecture != r->hK_conj.has_value())
                fail(errc::invalid_argument, "cache " + path_.string() + " was written with different scan options (p=" +
                                                 std::to_string(r->p) + ")");
            records_.emplace(r->p, *r);
        }
        if (std::filesystem::file_size(path_) != valid_len) std::filesystem::resize_file(path_, valid_len);
    }

    std::filesystem::path path_;
    std::map<std::uint64_t, ScanRecord> records_;
};

// -----------------------------------------------------------------------------
// scan
// -----------------------------------------------------------------------------

inline std::vector<std::uint64_t> scan_primes(std::uint64_t from, std::uint64_t to, const std::vector<ResidueClass>& classes) {
    if (from > to) return {};
    for (const auto& c : classes)
        if (c.modulus == 0 || c.residue >= c.modulus) fail(errc::invalid_argument, "residue class needs 0 <= class < mod");
    std::vector<std::uint64_t> out;
    PrimeStream stream(std::max<std::uint64_t>(from, 3), to + 1);
    while (auto q = stream.next()) {
        const bool keep = classes.empty() ||
                          std::any_of(classes.begin(), classes.end(), [&](const ResidueClass& c) { return *q % c.modulus == c.residue; });
        if (keep) out.push_back(*q);
    }
    return out;
}

/// Emits one record per odd prime in [from, to] (inclusive), ascending.
inline void scan(std::uint64_t from, std::uint64_t to, const ScanOptions& opts,
                 const std::function<void(const ScanRecord&)>& sink) {
    if (from > to) return;
    if (opts.exact_limit > to) fail(errc::invalid_argument, "exact limit exceeds the range upper bound");
    const auto primes = scan_primes(from, to, opts.classes);

    std::optional<ScanCache> cache;
    if (opts.cache_path) cache.emplace(*opts.cache_path, opts);

    constexpr std::size_t block = 4096;
    for (std::size_t lo = 0; lo < primes.size(); lo += block) {
        const std::size_t hi = std::min(primes.size(), lo + block);
        std::vector<std::uint64_t> todo;
        for (std::size_t i = lo; i < hi; ++i)
            if (!cache || !cache->find(primes[i])) todo.push_back(primes[i]);
        const auto fresh = detail::ordered_map(todo, opts.jobs, [&](std::uint64_t p) { return make_record(p, opts); });
        if (cache) cache->append(fresh);

        std::size_t k = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            if (k < fresh.size() && fresh[k].p == primes[i])
                sink(fresh[k++]);
            else
                sink(*cache->find(primes[i]));
        }
    }
}

inline std::vector<ScanRecord> scan(std::uint64_t from, std::uint64_t to, const ScanOptions& opts) {
    std::vector<ScanRecord> out;
    scan(from, to, opts, [&](const ScanRecord& r) { out.push_back(r); });
    return out;
}

// -----------------------------------------------------------------------------
// census
// -----------------------------------------------------------------------------

struct CensusReport {
    std::uint64_t X = 0;
    std::uint64_t count_primes = 0;
    std::uint64_t count_15mod32 = 0;
    std::uint64_t count_inv_minus = 0;  // among p = 15 mod 32
    std::uint64_t count_inv_plus = 0;   // among p = 15 mod 32
    std::uint64_t count_15mod16 = 0;
    std::uint64_t count_inv_minus_mod16 = 0;
    std::uint64_t count_twisted_minus_mod16 = 0;
    std::uint64_t count_quartic_1mod16 = 0;  // p = 1 mod 16 and (2/p)_4 = -1
    double density_inv_minus_mod16 = 0;
    double density_twisted_mod16 = 0;
    double density_quartic_1mod16 = 0;
    std::vector<std::uint64_t> primes_15mod32_inv_minus;
};

namespace detail {

inline double ratio(std::uint64_t num, std::uint64_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

/// Per-prime tallies shared by census() and density_table().
struct CensusTally {
    std::uint64_t primes = 0, n15mod16 = 0, inv_minus16 = 0, twisted_minus16 = 0, quartic = 0;
    std::uint64_t n15mod32 = 0, inv_minus32_15 = 0, n31mod32 = 0, eight_15mod32 = 0, eight_31mod32 = 0;

    void add(std::uint64_t p, std::vector<std::uint64_t>* inv_minus_15mod32 = nullptr) {
        ++primes;
        if (p % 16 == 1 && quartic_symbol_2(p) == -1) ++quartic;
        if (p % 16 != 15) return;
        const symbol_value inv = invariant(p);
        const symbol_value twisted = sign_p_plus_1_over_16(p) * inv;
        ++n15mod16;
        if (inv == -1) ++inv_minus16;
        if (twisted == -1) ++twisted_minus16;
        if (p % 32 == 15) {
            ++n15mod32;
            if (inv == -1) {
                ++inv_minus32_15;
                if (inv_minus_15mod32) inv_minus_15mod32->push_back(p);
            }
            if (twisted == -1) ++eight_15mod32;
        } else {
            ++n31mod32;
            if (twisted == -1) ++eight_31mod32;
        }
    }
};

}  // namespace detail

/// Counts over all primes p <= X. count_inv_minus equals the number of
/// p = 15 mod 32 with 4 || h_K only under the conjectured equivalence.
inline CensusReport census(std::uint64_t X) {
    if (X < 100) fail(errc::invalid_argument, "census: limit must be >= 100");
    CensusReport r;
    r.X = X;
    detail::CensusTally t;
    PrimeStream stream(2, X + 1);
    while (auto p = stream.next()) detail::with_prime_context(*p, [&] { t.add(*p, &r.primes_15mod32_inv_minus); });
    r.count_primes = t.primes;
    r.count_15mod32 = t.n15mod32;
    r.count_inv_minus = t.inv_minus32_15;
    r.count_inv_plus = t.n15mod32 - t.inv_minus32_15;
    r.count_15mod16 = t.n15mod16;
    r.count_inv_minus_mod16 = t.inv_minus16;
    r.count_twisted_minus_mod16 = t.twisted_minus16;
    r.count_quartic_1mod16 = t.quartic;
    r.density_inv_minus_mod16 = detail::ratio(t.inv_minus16, t.n15mod16);
    r.density_twisted_mod16 = detail::ratio(t.twisted_minus16, t.n15mod16);
    r.density_quartic_1mod16 = detail::ratio(t.quartic, t.primes);
    return r;
}

// -----------------------------------------------------------------------------
// density table
// -----------------------------------------------------------------------------

struct DensityRow {
    std::uint64_t checkpoint = 0;
    std::uint64_t primes = 0;
    std::uint64_t n15mod16 = 0;
    double inv_minus = 0;          // (p) = -1 among p = 15 mod 16
    double twisted_minus = 0;      // (-1)^((p+1)/16) (p) = -1 among p = 15 mod 16
    double quartic_1mod16 = 0;     // p = 1 mod 16 and (2/p)_4 = -1, among all primes
    std::uint64_t n15mod32 = 0;
    double eight_15mod32 = 0;      // 8 || h(-2p) among p = 15 mod 32
    std::uint64_t n31mod32 = 0;
    double eight_31mod32 = 0;      // 8 || h(-2p) among p = 31 mod 32
};

inline constexpr const char* density_csv_columns =
    "X,primes,n15mod16,inv_minus,twisted_minus,quartic_1mod16,n15mod32,eight_15mod32,n31mod32,eight_31mod32";

/// Empirical ratios over p <= c for each checkpoint c; 8 || h(-2p) is taken
/// from the criterion for p = 15 mod 16, not from the oracle.
inline std::vector<DensityRow> density_table(std::uint64_t X, std::vector<std::uint64_t> checkpoints) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        fail(errc::invalid_argument, "density_table: checkpoints must be ascending");
    if (!checkpoints.empty() && checkpoints.back() > X) fail(errc::invalid_argument, "density_table: checkpoint exceeds limit");
    std::vector<DensityRow> rows;
    detail::CensusTally t;
    auto emit = [&](std::uint64_t c) {
        DensityRow row;
        row.checkpoint = c;
        row.primes = t.primes;
        row.n15mod16 = t.n15mod16;
        row.inv_minus = detail::ratio(t.inv_minus16, t.n15mod16);
        row.twisted_minus = detail::ratio(t.twisted_minus16, t.n15mod16);
        row.quartic_1mod16 = detail::ratio(t.quartic, t.primes);
        row.n15mod32 = t.n15mod32;
        row.eight_15mod32 = detail::ratio(t.eight_15mod32, t.n15mod32);
        row.n31mod32 = t.n31mod32;
        row.eight_31mod32 = detail::ratio(t.eight_31mod32, t.n31mod32);
        rows.push_back(row);
    };
    std::size_t next = 0;
    PrimeStream stream(2, X + 1);
    while (auto p = stream.next()) {
        while (next < checkpoints.size() && checkpoints[next] < *p) emit(checkpoints[next++]);
        if (next == checkpoints.size()) break;
        detail::with_prime_context(*p, [&] { t.add(*p); });
    }
    while (next < checkpoints.size()) emit(checkpoints[next++]);
    return rows;
}

inline std::string to_csv_row(const DensityRow& r) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.6f,%.6f,%.6f,%llu,%.6f,%llu,%.6f", static_cast<unsigned long long>(r.checkpoint),
                  static_cast<unsigned long long>(r.primes), static_cast<unsigned long long>(r.n15mod16), r.inv_minus,
                  r.twisted_minus, r.quartic_1mod16, static_cast<unsigned long long>(r.n15mod32), r.eight_15mod32,
                  static_cast<unsigned long long>(r.n31mod32), r.eight_31mod32);
    return buf;
}

// -----------------------------------------------------------------------------
// Campaigns
// -----------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::vector<std::string> witnesses{};  // first few failures, for diagnostics

    bool passed() const { return failed == 0; }

    void record(bool ok, const std::string& witness) {
        ++checked;
        if (ok) return;
        ++failed;
        if (witnesses.size() < 20) witnesses.push_back(witness);
    }
};

inline std::ostream& operator<<(std::ostream& os, const SuiteResult& s) {
    os << "suite=" << s.name << " checked=" << s.checked << " failed=" << s.failed << " status=" << (s.passed() ? "PASS" : "FAIL");
    for (const auto& w : s.witnesses) os << "\n  witness: " << w;
    return os;
}

/// 2 +- sqrt2 and the norm-2 generators are squares mod p, p = 15 mod 16, p < X.
inline SuiteResult lemma34_campaign(std::uint64_t X, unsigned jobs = 1) {
    SuiteResult s{"lemma34"};
    const auto primes = primes_between(3, X, 16, 15);
    const auto reports = detail::ordered_map(primes, jobs, [](std::uint64_t p) {
        return detail::with_prime_context(p, [&] { return lemma34_suite(p); });
    });
    for (const auto& r : reports)
        s.record(r.all(), "p=" + std::to_string(r.p) + " (" + std::to_string(r.two_pm_sqrt2_squares) + "," +
                              std::to_string(r.pi_square) + "," + std::to_string(r.pi_prime_square) + ")");
    return s;
}

/// (2u/v) agrees across decompositions from both unit orbits, p = 7 mod 8, p < X.
inline SuiteResult invariant_independence_campaign(std::uint64_t X) {
    SuiteResult s{"invariant_independence"};
    for (std::uint64_t p : primes_between(3, X, 8, 7)) {
        detail::with_prime_context(p, [&] {
            const symbol_value expected = invariant(p);
            for (const zsqrt2& x : sample_decompositions(p)) {
                std::ostringstream w;
                w << "p=" << p << " element " << x;
                s.record(invariant_of(x.a, x.b) == expected, w.str());
            }
        });
    }
    return s;
}

/// Seeded totally positive elements a + b sqrt2 with 1 <= a <= 10^6.
inline std::vector<zsqrt2> spin_samples(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<zsqrt2> out;
    out.reserve(count);
    while (out.size() < count) {
        const std::int64_t a = static_cast<std::int64_t>(rng() % 1000000) + 1;
        const auto b_max = static_cast<std::int64_t>(isqrt(static_cast<u128>((static_cast<i128>(a) * a - 1) / 2)));
        const std::int64_t b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * b_max + 1)) - b_max;
        const zsqrt2 x{a, b};
        if (!totally_positive(x)) fail(errc::invariant_violation, "spin sample is not totally positive");
        out.push_back(x);
    }
    return out;
}

/// [(1+sqrt2)^8 x]' = [x]' on seeded samples.
inline SuiteResult spin_invariance_campaign(std::uint64_t seed, std::size_t count = 1000) {
    SuiteResult s{"spin_invariance"};
    for (const zsqrt2& x : spin_samples(seed, count)) {
        std::ostringstream w;
        w << "element " << x;
        s.record(twisted_spin(unit_shift(x, 4)) == twisted_spin(x), w.str());
    }
    return s;
}

/// epsilon = pi^2/2 for Z[sqrt p] and Z[sqrt 2p], p = 7 mod 8, p < X.
inline SuiteResult unit_identity_campaign(std::uint64_t X, unsigned jobs = 1) {
    SuiteResult s{"unit_identity"};
    const auto primes = primes_between(3, X, 8, 7);
    const auto reports = detail::ordered_map(primes, jobs, [](std::uint64_t p) {
        return detail::with_prime_context(p, [&] { return check_eps_eq_pi_squared_over_two(p); });
    });
    for (std::size_t i = 0; i < primes.size(); ++i)
        s.record(reports[i].all(), "p=" + std::to_string(primes[i]));
    return s;
}

struct LemmaCampaignReport {
    SuiteResult lemma34, invariant_independence, spin;
    bool passed() const { return lemma34.passed() && invariant_independence.passed() && spin.passed(); }
};

inline LemmaCampaignReport lemma_campaign(std::uint64_t X, std::uint64_t seed = 1, unsigned jobs = 1) {
    if (X < 100) fail(errc::invalid_argument, "lemma_campaign: limit must be >= 100");
    return {lemma34_campaign(X, jobs), invariant_independence_campaign(X), spin_invariance_campaign(seed, 1000)};
}

struct OracleCampaignReport {
    SuiteResult agreement{"oracle_agreement"};  // exact branches equal, bounds hold
    SuiteResult eight_criterion{"eight_criterion"};  // ord2 = 3 iff (-1)^((p+1)/16)(p) = -1, p = 15 mod 16
    SuiteResult conjecture_form{"conjecture_form"};  // the same, split by p mod 32
    SuiteResult relation{"relation"};           // ord2 h(-2p) = ord2 h_K + 1 where asserted
    SuiteResult genus{"genus"};                 // two ambiguous classes and 2 | h(-8p)
    std::uint64_t exact_branches = 0;
    std::uint64_t bound_branches = 0;

    bool passed() const {
        return agreement.passed() && eight_criterion.passed() && conjecture_form.passed() && relation.passed() && genus.passed();
    }
};

/// Runs the class-number oracle for every odd prime p < X and checks every
/// prediction and structural claim against it.
inline OracleCampaignReport oracle_campaign(std::uint64_t X, unsigned jobs = 1, const H2pPredictor& predictor = {}) {
    struct Row {
        std::uint64_t p;
        FormClassSummary actual;
        Ord2Prediction pred;
        std::optional<symbol_value> twisted, inv;
        std::optional<bool> relation;
        Ord2Prediction hK;
    };
    const auto primes = primes_between(3, X);
    const auto rows = detail::ordered_map(primes, jobs, [&](std::uint64_t p) {
        return detail::with_prime_context(p, [&] {
            Row r{p, h2p(p), predictor ? predictor(p) : predict_ord2_h2p(p), {}, {}, relation_check(p), predict_ord2_hK(p, false)};
            if (p % 16 == 15) {
                r.inv = invariant(p);
                r.twisted = sign_p_plus_1_over_16(p) * *r.inv;
            }
            return r;
        });
    });

    OracleCampaignReport rep;
    for (const Row& r : rows) {
        const std::string tag = "p=" + std::to_string(r.p) + " ord2=" + std::to_string(r.actual.ord2);
        const unsigned ord2 = r.actual.ord2;
        (r.pred.exact ? rep.exact_branches : rep.bound_branches)++;
        rep.agreement.record(r.pred.exact ? r.pred.value == ord2 : r.pred.value <= ord2,
                             tag + " predicted " + (r.pred.exact ? "=" : ">=") + std::to_string(r.pred.value));
        rep.genus.record(r.actual.ambiguous == 2 && r.actual.h % 2 == 0,
                         tag + " h=" + std::to_string(r.actual.h) + " ambiguous=" + std::to_string(r.actual.ambiguous));
        if (r.twisted) {
            rep.eight_criterion.record((ord2 == 3) == (*r.twisted == -1), tag);
            if (r.p % 32 == 15)
                rep.conjecture_form.record((*r.inv == -1) == (ord2 >= 4), tag + " (p)=" + std::to_string(r.inv->value()));
            else
                rep.conjecture_form.record((*r.inv == -1) == (ord2 == 3), tag + " (p)=" + std::to_string(r.inv->value()));
        }
        if (r.relation)
            rep.relation.record(*r.relation && r.hK.exact && ord2 == r.hK.value + 1,
                                tag + " hK=" + std::to_string(r.hK.value));
    }
    return rep;
}

}  // namespace pqc
