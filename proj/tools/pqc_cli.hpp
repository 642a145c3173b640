#pragma once

// Command-line front end. Data goes to `out`, diagnostics to `err`.
//
// Exit codes: 0 success, 1 verification mismatch or flagged record,
// 2 invalid input, 3 internal error (overflow, search bound exceeded, ...).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pqc/pqc.hpp"

namespace pqc::cli {

enum exit_code : int { ok = 0, mismatch = 1, invalid_input = 2, internal_failure = 3 };

/// Test seams. A corrupted predictor must surface as exit code 1.
struct Hooks {
    H2pPredictor h2p_predictor;
};

namespace detail {

inline std::string sym(symbol_value s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

inline std::string symbols_list(const Ord2Prediction& p) {
    std::string s;
    for (const auto& [name, value] : p.symbols_used) {
        if (!s.empty()) s += ';';
        s += name + ":" + sym(value);
    }
    return s;
}

inline void print_prediction(std::ostream& out, const std::string& prefix, const Ord2Prediction& p) {
    out << prefix << "_pred=" << p.value << '\n'
        << prefix << "_exact=" << (p.exact ? 1 : 0) << '\n'
        << prefix << "_branch=" << to_string(p.branch) << '\n'
        << prefix << "_symbols=" << symbols_list(p) << '\n';
}

inline int cmd_decompose(std::uint64_t p, std::ostream& out) {
    if (p < 3 || !is_prime(p) || (p % 8 != 1 && p % 8 != 7))
        fail(errc::not_representable, std::to_string(p) + " is not an odd prime = +-1 mod 8");
    const NormDecomposition d = decompose(p);
    out << "p=" << p << "\nu=" << d.u << "\nv=" << d.v << '\n';
    if (p % 8 == 7) out << "invariant=" << sym(invariant_of(d.u, d.v)) << '\n';
    return ok;
}

inline int cmd_symbols(std::uint64_t p, std::ostream& out) {
    require_odd_prime(p, "symbols");
    out << "p=" << p << "\njacobi_2_p=" << sym(jacobi(2, p)) << '\n';
    if (p % 8 == 1) out << "quartic2=" << sym(quartic_symbol_2(p)) << '\n';
    if (p % 8 == 1 || p % 8 == 7) {
        const NormDecomposition d = decompose(p);
        out << "u=" << d.u << "\nv=" << d.v << '\n';
        if (p % 8 == 1 && jacobi(d.u, p) == 1) out << "quartic_u=" << sym(quartic_symbol(d.u, p)) << '\n';
        if (p % 8 == 7) out << "invariant=" << sym(invariant_of(d.u, d.v)) << '\n';
        if (p % 16 == 15) out << "twisted_invariant=" << sym(twisted_invariant(p)) << '\n';
        out << "spin=" << sym(spin(d.element())) << "\ntwisted_spin=" << sym(twisted_spin(d.element())) << '\n';
    }
    return ok;
}

inline int cmd_classnum(std::optional<std::uint64_t> p, std::optional<std::int64_t> disc, bool list_forms, std::ostream& out) {
    if (p.has_value() == disc.has_value()) fail(errc::invalid_argument, "classnum takes either a prime or --disc");
    const FormClassSummary s = p ? h2p(*p) : class_number(*disc);
    out << "D=" << s.D << "\nh=" << s.h << "\nord2=" << s.ord2 << "\nambiguous=" << s.ambiguous << '\n';
    if (list_forms)
        for (const ReducedForm& f : reduced_forms(s.D)) out << "form=" << f.a << ',' << f.b << ',' << f.c << '\n';
    return ok;
}

inline int cmd_predict(std::uint64_t p, bool conjecture, const Hooks& hooks, std::ostream& out) {
    if (!is_prime(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
    out << "p=" << p << '\n';
    if (p != 2) print_prediction(out, "h2p", hooks.h2p_predictor ? hooks.h2p_predictor(p) : predict_ord2_h2p(p));
    print_prediction(out, "hK", predict_ord2_hK(p, conjecture));
    if (p != 2)
        if (auto rel = relation_check(p)) out << "relation=" << (*rel ? 1 : 0) << '\n';
    return ok;
}

struct ScanArgs {
    std::uint64_t from = 0, to = 0, exact_limit = 0;
    std::vector<std::uint64_t> mods, classes;
    bool conjecture = false;
    std::string format = "csv";
    std::string out_path, cache_path;
    unsigned jobs = 1;
};

inline int cmd_scan(const ScanArgs& a, const Hooks& hooks, std::ostream& stdout_stream) {
    if (a.mods.size() != a.classes.size()) fail(errc::invalid_argument, "--mod and --class must be given in pairs");
    if (a.jobs == 0) fail(errc::invalid_argument, "--jobs must be >= 1");
    ScanOptions opts;
    opts.exact_limit = a.exact_limit;
    opts.conjecture = a.conjecture;
    opts.jobs = a.jobs;
    opts.h2p_predictor = hooks.h2p_predictor;
    for (std::size_t i = 0; i < a.mods.size(); ++i) opts.classes.push_back({a.mods[i], a.classes[i]});
    if (!a.cache_path.empty()) opts.cache_path = a.cache_path;

    std::ofstream file;
    if (!a.out_path.empty()) {
        file.open(a.out_path, std::ios::binary | std::ios::trunc);
        if (!file) fail(errc::invalid_argument, "cannot open " + a.out_path);
    }
    std::ostream& out = a.out_path.empty() ? stdout_stream : file;

    std::uint64_t flagged = 0, count = 0;
    if (a.format == "csv") write_csv_header(out);
    if (a.format == "json") out << "[";
    if (a.format == "table") out << table_header() << '\n';
    scan(a.from, a.to, opts, [&](const ScanRecord& r) {
        if (r.flagged()) ++flagged;
        if (a.format == "csv") out << to_csv_row(r) << '\n';
        if (a.format == "json") out << (count == 0 ? "\n" : ",\n") << to_json(r).dump();
        if (a.format == "table") out << to_table_row(r) << '\n';
        ++count;
    });
    if (a.format == "json") out << (count == 0 ? "]\n" : "\n]\n");
    out.flush();
    return flagged == 0 ? ok : mismatch;
}

inline int cmd_census(std::uint64_t limit, std::ostream& out) {
    const CensusReport r = census(limit);
    out << "X=" << r.X << "\nprimes=" << r.count_primes << "\ncount_15mod32=" << r.count_15mod32
        << "\ncount_inv_minus=" << r.count_inv_minus << "\ncount_inv_plus=" << r.count_inv_plus
        << "\n# assuming 4||h_K <=> (p)=-1: count_inv_minus counts p=15 mod 32 with 4||h_K, count_inv_plus those with 8|h_K"
        << "\ncount_15mod16=" << r.count_15mod16 << "\ncount_inv_minus_mod16=" << r.count_inv_minus_mod16
        << "\ncount_twisted_minus_mod16=" << r.count_twisted_minus_mod16 << "\ncount_quartic_1mod16=" << r.count_quartic_1mod16;
    char buf[160];
    std::snprintf(buf, sizeof buf, "\ndensity_inv_minus_mod16=%.6f\ndensity_twisted_mod16=%.6f\ndensity_quartic_1mod16=%.6f\n",
                  r.density_inv_minus_mod16, r.density_twisted_mod16, r.density_quartic_1mod16);
    out << buf;
    return ok;
}

inline int cmd_density(std::uint64_t limit, const std::vector<std::uint64_t>& checkpoints, std::ostream& out) {
    out << density_csv_columns << '\n';
    for (const DensityRow& row : density_table(limit, checkpoints)) out << to_csv_row(row) << '\n';
    return ok;
}

inline int cmd_verify(std::uint64_t limit, std::uint64_t seed, unsigned jobs, const Hooks& hooks, std::ostream& out) {
    if (limit < 100) fail(errc::invalid_argument, "verify: --limit must be >= 100");
    if (jobs == 0) fail(errc::invalid_argument, "--jobs must be >= 1");
    const OracleCampaignReport oracle = oracle_campaign(limit, jobs, hooks.h2p_predictor);
    const LemmaCampaignReport lemmas = lemma_campaign(limit, seed, jobs);
    const SuiteResult units = unit_identity_campaign(limit, jobs);
    const SuiteResult* suites[] = {&oracle.agreement, &oracle.eight_criterion, &oracle.conjecture_form,
                                   &oracle.relation,  &oracle.genus,           &lemmas.lemma34,
                                   &lemmas.invariant_independence, &lemmas.spin, &units};
    bool all = true;
    for (const SuiteResult* s : suites) {
        out << *s << '\n';
        all = all && s->passed();
    }
    out << "result=" << (all ? "PASS" : "FAIL") << '\n';
    return all ? ok : mismatch;
}

}  // namespace detail

/// Runs one command line. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {}) {
    CLI::App app{"Class-number 2-adic criteria for Q(p^(1/4)) and Q(sqrt(-2p))", "pqc"};
    app.require_subcommand(1);

    std::uint64_t prime = 0;
    auto* dec = app.add_subcommand("decompose", "canonical p = u^2 - 2v^2 and the invariant (p)");
    dec->add_option("p", prime, "prime = +-1 mod 8")->required();

    auto* syms = app.add_subcommand("symbols", "residue, quartic and spin symbols attached to p");
    syms->add_option("p", prime, "odd prime")->required();

    std::optional<std::uint64_t> cls_p;
    std::optional<std::int64_t> cls_disc;
    bool list_forms = false;
    auto* cls = app.add_subcommand("classnum", "exact class number by reduced forms");
    auto* cls_p_opt = cls->add_option("p", cls_p, "odd prime; uses D = -8p");
    cls->add_option("--disc", cls_disc, "negative discriminant")->excludes(cls_p_opt);
    cls->add_flag("--forms", list_forms, "list the reduced forms");

    bool conjecture = false;
    auto* pred = app.add_subcommand("predict", "predicted ord2 of h(-2p) and h_K");
    pred->add_option("p", prime, "prime")->required();
    pred->add_flag("--conjecture", conjecture, "assume 4||h_K <=> (p) = -1");

    detail::ScanArgs sa;
    auto* scn = app.add_subcommand("scan", "per-prime records over a range");
    scn->add_option("--from", sa.from, "lower end (inclusive)")->required();
    scn->add_option("--to", sa.to, "upper end (inclusive)")->required();
    scn->add_option("--mod", sa.mods, "residue class modulus (repeatable, paired with --class)");
    scn->add_option("--class", sa.classes, "residue class (repeatable)");
    scn->add_option("--exact-limit", sa.exact_limit, "run the class-number oracle for p <= E");
    scn->add_flag("--conjecture", sa.conjecture, "add conjectural h_K predictions");
    scn->add_option("--format", sa.format, "output format")->check(CLI::IsMember({"csv", "json", "table"}));
    scn->add_option("--out", sa.out_path, "write to a file instead of standard output");
    scn->add_option("--jobs", sa.jobs, "worker threads");
    scn->add_option("--cache", sa.cache_path, "resumable CSV cache");

    std::uint64_t limit = 0;
    auto* cen = app.add_subcommand("census", "counts for p = 15 mod 32 and related densities");
    cen->add_option("--limit", limit, "X")->required();

    std::vector<std::uint64_t> checkpoints;
    auto* den = app.add_subcommand("density", "empirical density table");
    den->add_option("--limit", limit, "X")->required();
    den->add_option("--checkpoints", checkpoints, "ascending checkpoints")->delimiter(',')->required();

    std::uint64_t seed = 1;
    unsigned jobs = 1;
    auto* ver = app.add_subcommand("verify", "oracle agreement and lemma campaigns below X");
    ver->add_option("--limit", limit, "X")->required();
    ver->add_option("--seed", seed, "seed for the spin sample");
    ver->add_option("--jobs", jobs, "worker threads");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? ok : invalid_input;
    }

    try {
        if (*dec) return detail::cmd_decompose(prime, out);
        if (*syms) return detail::cmd_symbols(prime, out);
        if (*cls) return detail::cmd_classnum(cls_p, cls_disc, list_forms, out);
        if (*pred) return detail::cmd_predict(prime, conjecture, hooks, out);
        if (*scn) return detail::cmd_scan(sa, hooks, out);
        if (*cen) return detail::cmd_census(limit, out);
        if (*den) return detail::cmd_density(limit, checkpoints, out);
        if (*ver) return detail::cmd_verify(limit, seed, jobs, hooks, out);
    } catch (const error& e) {
        err << "pqc: " << e.what() << '\n';
        return e.internal() ? internal_failure : invalid_input;
    } catch (const std::exception& e) {
        err << "pqc: internal error: " << e.what() << '\n';
        return internal_failure;
    }
    return invalid_input;
}

}  // namespace pqc::cli
