#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "pqc/batch.hpp"

using namespace pqc;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name) : path(fs::temp_directory_path() / ("pqc_test_" + name + "_" + std::to_string(::getpid()))) {
        fs::remove(path);
    }
    ~TempFile() { fs::remove(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Predictor that is wrong by one for p = 7 mod 16.
Ord2Prediction corrupted(std::uint64_t p) {
    Ord2Prediction r = predict_ord2_h2p(p);
    if (p % 16 == 7) ++r.value;
    return r;
}

}  // namespace

TEST(Scan, SmallRangeAgreesWithOracle) {
    ScanOptions opts;
    opts.exact_limit = 100;
    const auto recs = scan(3, 100, opts);
    EXPECT_EQ(recs.size(), 24u);
    for (const auto& r : recs) {
        EXPECT_FALSE(r.flagged()) << r.p;
        EXPECT_TRUE(r.h2p_actual.has_value());
    }
    EXPECT_EQ(recs.front().p, 3u);
    EXPECT_EQ(recs.back().p, 97u);
}

TEST(Scan, SinglePrime31) {
    const auto recs = scan(31, 31, {});
    ASSERT_EQ(recs.size(), 1u);
    const auto& r = recs[0];
    EXPECT_EQ(r.inv, -1);
    EXPECT_EQ(r.h2p_pred, 3u);
    EXPECT_TRUE(r.h2p_exact);
    EXPECT_EQ(r.u, 33);
    EXPECT_EQ(r.v, 23);
    EXPECT_FALSE(r.h2p_actual);
    EXPECT_FALSE(r.hK_conj);
}

TEST(Scan, EmptyAndInvalidRanges) {
    EXPECT_TRUE(scan(100, 3, {}).empty());
    EXPECT_TRUE(scan(24, 28, {}).empty());
    ScanOptions opts;
    opts.exact_limit = 200;
    EXPECT_THROW(scan(3, 100, opts), error);
}

TEST(Scan, FieldPresenceFollowsResidue) {
    ScanOptions opts;
    opts.exact_limit = 3000;
    opts.conjecture = true;
    for (const auto& r : scan(3, 3000, opts)) {
        const auto m8 = r.p % 8;
        EXPECT_EQ(r.res32, r.p % 32);
        EXPECT_EQ(r.u.has_value(), m8 == 1 || m8 == 7) << r.p;
        EXPECT_EQ(r.v.has_value(), m8 == 1 || m8 == 7) << r.p;
        EXPECT_EQ(r.inv.has_value(), m8 == 7) << r.p;
        EXPECT_EQ(r.q2.has_value(), m8 == 1) << r.p;
        EXPECT_TRUE(r.h2p_actual.has_value());
        EXPECT_TRUE(r.hK_conj.has_value());
        EXPECT_FALSE(r.flagged()) << r.p;
    }
}

TEST(Scan, ExactOracleOnlyUpToLimit) {
    ScanOptions opts;
    opts.exact_limit = 50;
    for (const auto& r : scan(3, 200, opts)) EXPECT_EQ(r.h2p_actual.has_value(), r.p <= 50) << r.p;
}

TEST(Scan, ResidueClassFilter) {
    ScanOptions opts;
    opts.classes = {{16, 15}, {16, 7}};
    const auto recs = scan(3, 5000, opts);
    std::size_t want = 0;
    for (std::uint64_t p = 3; p <= 5000; ++p)
        if ((p % 16 == 15 || p % 16 == 7) && oracle::is_prime_trial(p)) ++want;
    EXPECT_EQ(recs.size(), want);
    for (const auto& r : recs) EXPECT_TRUE(r.p % 16 == 15 || r.p % 16 == 7);
    opts.classes = {{16, 16}};
    EXPECT_THROW(scan(3, 100, opts), error);
}

TEST(Scan, DeterministicAcrossWorkerCounts) {
    ScanOptions serial;
    serial.exact_limit = 20000;
    serial.conjecture = true;
    ScanOptions parallel = serial;
    parallel.jobs = 4;
    const auto a = scan(3, 20000, serial), b = scan(3, 20000, parallel);
    EXPECT_EQ(a, b);
}

TEST(Scan, ErrorsNameThePrime) {
    ScanOptions opts;
    opts.h2p_predictor = [](std::uint64_t p) -> Ord2Prediction {
        if (p == 101) fail(errc::overflow, "injected");
        return predict_ord2_h2p(p);
    };
    opts.jobs = 3;
    try {
        scan(3, 500, opts);
        FAIL() << "expected an error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::overflow);
        EXPECT_NE(std::string(e.what()).find("p=101"), std::string::npos) << e.what();
    }
}

TEST(Scan, CorruptedPredictorIsFlagged) {
    ScanOptions opts;
    opts.exact_limit = 200;
    opts.h2p_predictor = corrupted;
    std::size_t flagged = 0;
    for (const auto& r : scan(3, 200, opts)) {
        EXPECT_EQ(r.flagged(), r.p % 16 == 7) << r.p;
        flagged += r.flagged();
    }
    EXPECT_GT(flagged, 0u);
}

TEST(Csv, HeaderIsExact) {
    std::ostringstream os;
    write_csv_header(os);
    EXPECT_EQ(os.str(), "schema=1\np,res32,u,v,inv,q2,h2p_pred,h2p_exactflag,h2p_actual,hK_pred,hK_exactflag,hK_conj\n");
}

TEST(Csv, Row31) {
    EXPECT_EQ(to_csv_row(scan(31, 31, {})[0]), "31,31,33,23,-1,,3,1,,2,0,");
    EXPECT_EQ(to_csv_row(scan(5, 5, {})[0]), "5,5,,,,,1,1,,0,1,");
}

TEST(Csv, RoundTrip) {
    ScanOptions opts;
    opts.exact_limit = 2000;
    opts.conjecture = true;
    for (bool conj : {false, true}) {
        opts.conjecture = conj;
        for (const auto& r : scan(3, 4000, opts)) {
            const auto back = parse_csv_row(to_csv_row(r));
            ASSERT_TRUE(back) << r.p;
            ASSERT_EQ(*back, r);
        }
    }
    EXPECT_FALSE(parse_csv_row("31,31,33"));
    EXPECT_FALSE(parse_csv_row("31,30,33,23,-1,,3,1,,2,0,"));
    EXPECT_FALSE(parse_csv_row("31,31,33,23,x,,3,1,,2,0,"));
}

TEST(Json, FieldNamesMatchCsvColumns) {
    const auto j = to_json(scan(31, 31, {})[0]);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    std::string joined;
    for (std::size_t i = 0; i < 12; ++i) joined += (i ? "," : "") + keys[i];
    EXPECT_EQ(joined, scan_csv_columns);
    EXPECT_EQ(j["inv"], -1);
    EXPECT_TRUE(j["q2"].is_null());
    EXPECT_EQ(j["h2p_branch"], "LeonardWilliams-15mod16");
    EXPECT_EQ(j["hK_branch"], "div4-15mod16");
}

TEST(Branches, DerivedFromRecordMatchPredictors) {
    for (const auto& r : scan(3, 5000, {})) {
        EXPECT_EQ(h2p_branch_of(r), predict_ord2_h2p(r.p).branch) << r.p;
        EXPECT_EQ(hK_branch_of(r), predict_ord2_hK(r.p, false).branch) << r.p;
    }
}

TEST(Cache, ResumesWithoutRecomputing) {
    TempFile tmp("resume");
    std::atomic<int> calls{0};
    ScanOptions opts;
    opts.exact_limit = 1000;
    opts.cache_path = tmp.path;
    opts.h2p_predictor = [&](std::uint64_t p) {
        ++calls;
        return predict_ord2_h2p(p);
    };
    const auto first = scan(3, 1000, opts);
    EXPECT_EQ(calls.load(), static_cast<int>(first.size()));

    opts.exact_limit = 3000;
    calls = 0;
    const auto full = scan(3, 3000, opts);
    EXPECT_EQ(calls.load(), static_cast<int>(full.size() - first.size()));

    ScanOptions plain;
    plain.exact_limit = 3000;
    EXPECT_EQ(full, scan(3, 3000, plain));

    calls = 0;
    EXPECT_EQ(scan(3, 3000, opts), full);
    EXPECT_EQ(calls.load(), 0);
}

TEST(Cache, PartialLineIsDiscarded) {
    TempFile tmp("partial");
    ScanOptions opts;
    opts.cache_path = tmp.path;
    const auto recs = scan(3, 200, opts);
    {
        std::ofstream out(tmp.path, std::ios::binary | std::ios::app);
        out << "211,19,";
    }
    ScanCache cache(tmp.path, opts);
    EXPECT_EQ(cache.size(), recs.size());
    EXPECT_EQ(cache.find(211), nullptr);
    EXPECT_EQ(slurp(tmp.path).back(), '\n');
    EXPECT_EQ(scan(3, 300, opts), scan(3, 300, ScanOptions{}));
}

TEST(Cache, RejectsSchemaAndOptionMismatch) {
    TempFile tmp("schema");
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "schema=2\n" << scan_csv_columns << "\n";
    }
    ScanOptions opts;
    opts.cache_path = tmp.path;
    EXPECT_THROW(scan(3, 100, opts), error);

    fs::remove(tmp.path);
    scan(3, 100, opts);
    opts.conjecture = true;
    EXPECT_THROW(scan(3, 100, opts), error);
}

TEST(Census, SmallLimitMatchesNaiveLoop) {
    const CensusReport r = census(1000);
    std::uint64_t n15_32 = 0, minus = 0, n15_16 = 0, minus16 = 0, twisted16 = 0, quartic = 0, primes = 0;
    for (std::uint64_t p = 2; p <= 1000; ++p) {
        if (!oracle::is_prime_trial(p)) continue;
        ++primes;
        if (p % 16 == 1 && !oracle::is_x2_plus_64y2(p)) ++quartic;
        if (p % 16 != 15) continue;
        // invariant from the first decomposition found by scanning u
        const auto d = oracle::all_decompositions(static_cast<std::int64_t>(p), 100000).front();
        const int inv = oracle::jacobi_by_factoring(2 * d.first, static_cast<std::uint64_t>(d.second));
        const int sign = ((p + 1) / 16) % 2 == 0 ? 1 : -1;
        ++n15_16;
        minus16 += inv == -1;
        twisted16 += sign * inv == -1;
        if (p % 32 == 15) {
            ++n15_32;
            minus += inv == -1;
        }
    }
    EXPECT_EQ(r.count_primes, primes);
    EXPECT_EQ(r.count_15mod32, n15_32);
    EXPECT_EQ(r.count_inv_minus, minus);
    EXPECT_EQ(r.count_inv_minus + r.count_inv_plus, r.count_15mod32);
    EXPECT_EQ(r.count_15mod16, n15_16);
    EXPECT_EQ(r.count_inv_minus_mod16, minus16);
    EXPECT_EQ(r.count_twisted_minus_mod16, twisted16);
    EXPECT_EQ(r.count_quartic_1mod16, quartic);
    EXPECT_DOUBLE_EQ(r.density_inv_minus_mod16, static_cast<double>(minus16) / n15_16);
    EXPECT_EQ(r.primes_15mod32_inv_minus.size(), r.count_inv_minus);
    EXPECT_THROW(census(99), error);
}

TEST(Density, RowsMatchCensusAtCheckpoints) {
    const auto rows = density_table(3000, {100, 1000, 3000});
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) {
        const CensusReport c = census(row.checkpoint);
        EXPECT_EQ(row.primes, c.count_primes);
        EXPECT_EQ(row.n15mod16, c.count_15mod16);
        EXPECT_EQ(row.n15mod32, c.count_15mod32);
        EXPECT_DOUBLE_EQ(row.inv_minus, c.density_inv_minus_mod16);
        EXPECT_DOUBLE_EQ(row.twisted_minus, c.density_twisted_mod16);
        EXPECT_DOUBLE_EQ(row.quartic_1mod16, c.density_quartic_1mod16);
    }
}

TEST(Density, EightDividesRatiosAgreeWithOracle) {
    const auto rows = density_table(1000, {1000});
    std::uint64_t n15 = 0, e15 = 0, n31 = 0, e31 = 0;
    for (std::uint64_t p = 15; p <= 1000; p += 16) {
        if (!oracle::is_prime_trial(p)) continue;
        const bool eight = h2p(p).ord2 == 3;
        if (p % 32 == 15) {
            ++n15;
            e15 += eight;
        } else {
            ++n31;
            e31 += eight;
        }
    }
    EXPECT_EQ(rows[0].n15mod32, n15);
    EXPECT_EQ(rows[0].n31mod32, n31);
    EXPECT_DOUBLE_EQ(rows[0].eight_15mod32, static_cast<double>(e15) / n15);
    EXPECT_DOUBLE_EQ(rows[0].eight_31mod32, static_cast<double>(e31) / n31);
}

TEST(Density, CheckpointErrorsAndFormat) {
    EXPECT_THROW(density_table(1000, {500, 100}), error);
    EXPECT_THROW(density_table(1000, {2000}), error);
    const auto rows = density_table(100, {10, 100});
    EXPECT_EQ(to_csv_row(rows[0]), "10,4,0,0.000000,0.000000,0.000000,0,0.000000,0,0.000000");
}

TEST(Lemmas, CampaignPassesAt1000And10000) {
    for (std::uint64_t X : {1000, 10000}) {
        const auto rep = lemma_campaign(X, 1, 2);
        EXPECT_TRUE(rep.passed()) << rep.lemma34 << rep.invariant_independence << rep.spin;
        EXPECT_GT(rep.lemma34.checked, 0u);
        EXPECT_GT(rep.invariant_independence.checked, 0u);
        EXPECT_EQ(rep.spin.checked, 1000u);
    }
}

TEST(Lemmas, SpinSamplesAreSeededAndTotallyPositive) {
    const auto a = spin_samples(1, 1000), b = spin_samples(1, 1000), c = spin_samples(2, 1000);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (const auto& x : a) EXPECT_TRUE(totally_positive(x));
}

TEST(Campaign, UnitIdentityAndOracleBelow5000) {
    EXPECT_TRUE(unit_identity_campaign(5000, 2).passed());
    const auto rep = oracle_campaign(5000, 2);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.exact_branches + rep.bound_branches, rep.agreement.checked);
    EXPECT_EQ(rep.genus.checked, primes_between(3, 5000).size());
}

TEST(Campaign, CorruptedPredictorFails) {
    const auto rep = oracle_campaign(2000, 2, corrupted);
    EXPECT_FALSE(rep.passed());
    EXPECT_GT(rep.agreement.failed, 0u);
    ASSERT_FALSE(rep.agreement.witnesses.empty());
    EXPECT_NE(rep.agreement.witnesses[0].find("p=7 "), std::string::npos) << rep.agreement.witnesses[0];
}

TEST(OrderedMap, PreservesOrderAndPropagatesFirstError) {
    std::vector<int> xs(1000);
    std::iota(xs.begin(), xs.end(), 0);
    const auto ys = detail::ordered_map(xs, 7, [](int x) { return x * x; });
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(ys[i], i * i);
    EXPECT_THROW(detail::ordered_map(xs, 4, [](int x) {
                     if (x == 500) throw std::runtime_error("boom");
                     return x;
                 }),
                 std::runtime_error);
}
