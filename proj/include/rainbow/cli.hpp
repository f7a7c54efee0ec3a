#pragma once

// Command-line front end.  run_cli() is the whole program minus main(), so the
// tests drive exactly what the binary does.
//
// Exit codes: 0 = the property asked about holds, 1 = it is violated (or the
// search budget ran out), 2 = usage, parse or I/O error.  Reports go to `out`
// and are byte-deterministic; wall times go to `err`.

#include "construct.hpp"
#include "core.hpp"
#include "io.hpp"
#include "search.hpp"
#include "verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace rainbow::cli {

enum ExitCode : int { kHolds = 0, kViolated = 1, kUsage = 2 };

namespace detail {

inline std::string seconds(std::chrono::steady_clock::duration d)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", std::chrono::duration<double>(d).count());
    return buf;
}

inline void emit(const std::string& content, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-")
        out << content;
    else
        write_file(path, content);
}

inline FileFormat output_format(const std::string& flag, const std::string& path)
{
    if (flag == "json")
        return FileFormat::json;
    if (flag == "matrix")
        return FileFormat::matrix;
    return path.empty() ? FileFormat::matrix : format_for_path(path);
}

inline std::string format_witness(const Witness& w)
{
    std::string s = "(";
    for (std::size_t i = 0; i < w.vertices.size(); ++i)
        s += (i ? "," : "") + std::to_string(w.vertices[i]);
    s += ") edges";
    for (const auto& e : w.edges)
        s += " " + std::to_string(e.u) + "-" + std::to_string(e.v) + ":" + std::to_string(e.color);
    return s;
}

inline void print_report(std::ostream& out, const RainbowReport& r)
{
    if (r.mode == ScanMode::exhaustive)
        out << "mode: exhaustive\n";
    else
        out << "mode: sampled samples=" << r.sample_count << " seed=" << r.seed << "\n";
    out << "subsets_examined: " << r.subsets_examined << "\n";
    out << "subsets_completed: " << r.subsets_completed << "\n";
    if (r.mode == ScanMode::exhaustive)
        out << "pruned_prefixes: " << r.pruned_prefixes << "\n";
    out << "witness: " << (r.witness ? format_witness(*r.witness) : std::string("none")) << "\n";
}

inline void print_balance(std::ostream& out, const BalanceProfile& profile)
{
    out << "balanced: " << (profile.uniform_t ? "yes" : "no") << "\n";
    out << "uniform_t: " << (profile.uniform_t ? std::to_string(*profile.uniform_t) : std::string("none")) << "\n";
    const auto bad = profile.unbalanced_vertices();
    if (bad.empty())
        return;
    out << "balance_violations: " << bad.size() << "\n";
    constexpr std::size_t shown = 20;
    for (std::size_t i = 0; i < std::min(bad.size(), shown); ++i) {
        out << "  vertex " << bad[i] << ":";
        for (std::size_t c = 1; c <= profile.ell; ++c)
            out << " " << profile.count(bad[i], c);
        out << "\n";
    }
    if (bad.size() > shown)
        out << "  ... " << bad.size() - shown << " more\n";
}

inline PatternGraph pattern_from_name(const std::string& name)
{
    if (name == "k4" || name == "K4")
        return PatternGraph::clique(4);
    if (name == "c6" || name == "C6")
        return PatternGraph::cycle(6);
    if (name == "2k3" || name == "2K3")
        return PatternGraph::disjoint_triangles(2);
    if (name.size() > 1 && (name[0] == 'k' || name[0] == 'K')
        && std::all_of(name.begin() + 1, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        return PatternGraph::clique(std::stoul(name.substr(1)));
    return PatternGraph::parse(name);
}

} // namespace detail

struct Args {
    std::string name, in, out, format, mode = "exhaustive", pattern, expect = "absent", strategy = "local_search",
                                             repair;
    std::size_t q = 0, k = 0, n = 0, ell = 0, cap = kDefaultVertexCap;
    std::uint64_t samples = 1'000'000, seed = 0, max_restarts = 20, max_steps = 2000;
    unsigned threads = 0;
    bool has_seed = false;
    bool count = false;
};

inline int cmd_cert(const Args& a, std::ostream& out)
{
    if (a.name != "k13")
        throw Error(ErrorKind::UnknownCertificate, "'" + a.name + "' (known: k13)");
    CertificateFile file{k13_certificate(), 4};
    file.meta = {{"name", "k13"}, {"description", "balanced 6-coloring of K_13, every color twice at every vertex, no rainbow K_4"}};
    detail::emit(format_certificate(file, detail::output_format(a.format, a.out)), a.out, out);
    return kHolds;
}

inline int cmd_power(const Args& a, std::ostream& out)
{
    const CertificateFile input = load_certificate(a.in);
    CertificateFile result{lex_power(input.coloring, a.k, a.cap), input.q};
    result.meta = {{"construction", "lexicographic power"},
                   {"k", a.k},
                   {"base_n", input.coloring.n()},
                   {"base_meta", input.meta}};
    detail::emit(format_certificate(result, detail::output_format(a.format, a.out)), a.out, out);
    return kHolds;
}

inline int cmd_verify(const Args& a, std::ostream& out, std::ostream& err)
{
    const auto started = std::chrono::steady_clock::now();
    const CertificateFile input = load_certificate(a.in);
    const std::size_t q = a.q ? a.q : input.q.value_or(4);
    const auto& c = input.coloring;

    const bool sampled = a.mode == "sample";
    if (!sampled && a.mode != "exhaustive")
        throw Error(ErrorKind::InvalidConfig, "--mode must be exhaustive or sample");
    if (sampled && !a.has_seed)
        throw Error(ErrorKind::InvalidConfig, "--mode sample requires an explicit --seed");

    const auto profile = balance_profile(c);
    const RainbowReport report = sampled ? sample_verify(c, q, a.samples, a.seed, a.threads)
                                         : find_rainbow_clique(c, q, a.threads);
    out << "coloring: n=" << c.n() << " ell=" << c.ell() << "\n";
    detail::print_balance(out, profile);
    out << "clique_size: " << q << "\n";
    detail::print_report(out, report);
    if (a.count)
        out << "rainbow_count: " << count_rainbow_cliques(c, q, a.threads) << "\n";
    const bool balanced = profile.uniform_t.has_value();
    out << "rainbow_free: " << (report.found ? "no" : sampled ? "no witness in sample" : "yes") << "\n";
    const bool accepted = balanced && !report.found;
    out << "verdict: " << (accepted ? "accepted" : "rejected") << "\n";
    err << "wall_time_s: " << detail::seconds(std::chrono::steady_clock::now() - started) << "\n";
    return accepted ? kHolds : kViolated;
}

inline int cmd_pattern(const Args& a, std::ostream& out, std::ostream& err)
{
    const auto started = std::chrono::steady_clock::now();
    if (a.expect != "absent" && a.expect != "present")
        throw Error(ErrorKind::InvalidConfig, "--expect must be absent or present");
    const CertificateFile input = load_certificate(a.in);
    const PatternGraph pattern = detail::pattern_from_name(a.pattern);
    const RainbowReport report = find_rainbow_pattern(input.coloring, pattern);
    out << "coloring: n=" << input.coloring.n() << " ell=" << input.coloring.ell() << "\n";
    out << "pattern: " << pattern.name() << " (m=" << pattern.m() << ", edges=" << pattern.edges().size() << ")\n";
    out << "maps_examined: " << report.subsets_examined << "\n";
    out << "maps_completed: " << report.subsets_completed << "\n";
    out << "pruned_prefixes: " << report.pruned_prefixes << "\n";
    out << "found: " << (report.found ? "yes" : "no") << "\n";
    out << "witness: " << (report.witness ? detail::format_witness(*report.witness) : std::string("none")) << "\n";
    err << "wall_time_s: " << detail::seconds(std::chrono::steady_clock::now() - started) << "\n";
    const bool want_present = a.expect == "present";
    return report.found == want_present ? kHolds : kViolated;
}

inline int cmd_search(const Args& a, std::ostream& out, std::ostream& err)
{
    if (!a.has_seed)
        throw Error(ErrorKind::InvalidConfig, "search requires an explicit --seed");
    SearchConfig config;
    config.n = a.n;
    config.ell = a.ell;
    config.q = a.q;
    config.seed = a.seed;
    config.max_restarts = a.max_restarts;
    config.max_steps_per_restart = a.max_steps;
    config.threads = a.threads;
    if (a.strategy == "local_search")
        config.strategy = Strategy::local_search;
    else if (a.strategy == "backtracking")
        config.strategy = Strategy::backtracking;
    else
        throw Error(ErrorKind::InvalidConfig, "--strategy must be local_search or backtracking");
    if (!a.repair.empty())
        config.initial = load_certificate(a.repair).coloring;

    const SearchOutcome outcome = run_search(config);
    out << "strategy: " << to_string(config.strategy) << "\n";
    out << "instance: n=" << config.n << " ell=" << config.ell << " q=" << config.q << " seed=" << config.seed << "\n";
    out << "status: " << to_string(outcome.status) << "\n";
    if (outcome.status == SearchStatus::trivial_instance) {
        out << "notice: " << outcome.notice << "\n";
        return kUsage;
    }
    out << "restarts_used: " << outcome.stats.restarts_used << "\n";
    out << "steps_used: " << outcome.stats.steps_used << "\n";
    if (outcome.stats.best_objective)
        out << "best_objective: " << *outcome.stats.best_objective << "\n";
    if (config.strategy == Strategy::backtracking)
        out << "max_depth: " << outcome.stats.max_depth << "\n";
    if (outcome.stats.winning_restart)
        out << "winning_restart: " << *outcome.stats.winning_restart << "\n";
    err << "wall_time_s: " << outcome.stats.wall_seconds << "\n";
    if (outcome.status != SearchStatus::found)
        return kViolated;
    CertificateFile file{*outcome.coloring, config.q};
    file.meta = {{"search", std::string(to_string(config.strategy))},
                 {"seed", config.seed},
                 {"winning_restart", *outcome.stats.winning_restart}};
    const std::string body = format_certificate(file, detail::output_format(a.format, a.out));
    if (a.out.empty() || a.out == "-") {
        out << body;
    } else {
        write_file(a.out, body);
        out << "wrote: " << a.out << "\n";
    }
    return kHolds;
}

inline int cmd_export(const Args& a, std::ostream& out)
{
    const CertificateFile input = load_certificate(a.in);
    std::string body;
    if (a.format == "dot")
        body = export_dot(input.coloring);
    else if (a.format == "tikz")
        body = export_tikz(input.coloring);
    else
        throw Error(ErrorKind::InvalidConfig, "--format must be dot or tikz");
    detail::emit(body, a.out, out);
    return kHolds;
}

inline int run_cli(std::vector<std::string> argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Balanced edge-colorings of complete graphs without rainbow cliques", "rainbow"};
    app.require_subcommand(1);
    Args a;

    auto* cert = app.add_subcommand("cert", "Write an embedded certificate");
    cert->add_option("name", a.name, "Certificate name (k13)")->required();
    cert->add_option("--format", a.format, "matrix or json (default: by --out extension)")
        ->check(CLI::IsMember({"matrix", "json"}));
    cert->add_option("--out", a.out, "Output path (default: stdout)");

    auto* power = app.add_subcommand("power", "Lexicographic power of a coloring");
    power->add_option("in", a.in, "Input coloring")->required();
    power->add_option("--k", a.k, "Exponent k >= 1")->required();
    power->add_option("--out", a.out, "Output path (default: stdout)");
    power->add_option("--format", a.format, "matrix or json")->check(CLI::IsMember({"matrix", "json"}));
    power->add_option("--cap", a.cap, "Vertex limit for the result")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Check balance and absence of rainbow K_q");
    verify->add_option("in", a.in, "Input coloring")->required();
    verify->add_option("--q", a.q, "Clique size (default: file q, else 4)");
    verify->add_option("--mode", a.mode, "exhaustive or sample")->capture_default_str();
    verify->add_option("--samples", a.samples, "Random q-subsets in sample mode")->capture_default_str();
    verify->add_option("--seed", a.seed, "Seed for sample mode");
    verify->add_option("--threads", a.threads, "Worker threads (0 = all cores)")->capture_default_str();
    verify->add_flag("--count", a.count, "Also print the exact number of rainbow K_q");

    auto* pattern = app.add_subcommand("pattern", "Search for a rainbow copy of a pattern graph");
    pattern->add_option("in", a.in, "Input coloring")->required();
    pattern->add_option("--pattern", a.pattern, "k4, c6, 2k3, kQ, or an edge list like 1-2,2-3")->required();
    pattern->add_option("--expect", a.expect, "absent or present: which outcome exits 0")->capture_default_str();

    auto* search = app.add_subcommand("search", "Search for a balanced coloring without rainbow K_q");
    search->add_option("--n", a.n, "Vertex count")->required();
    search->add_option("--ell", a.ell, "Color count")->required();
    search->add_option("--q", a.q, "Clique size")->required();
    search->add_option("--strategy", a.strategy, "local_search or backtracking")->capture_default_str();
    search->add_option("--seed", a.seed, "Seed (required)");
    search->add_option("--max-restarts", a.max_restarts, "Local-search restarts")->capture_default_str();
    search->add_option("--max-steps", a.max_steps, "Moves per restart, or DFS nodes")->capture_default_str();
    search->add_option("--repair", a.repair, "Start every restart from this coloring");
    search->add_option("--threads", a.threads, "Concurrent restarts (0 = all cores)")->capture_default_str();
    search->add_option("--out", a.out, "Where to write a found coloring (default: stdout)");
    search->add_option("--format", a.format, "matrix or json")->check(CLI::IsMember({"matrix", "json"}));

    auto* exp = app.add_subcommand("export", "Draw a coloring as DOT or TikZ");
    exp->add_option("in", a.in, "Input coloring")->required();
    exp->add_option("--format", a.format, "dot or tikz")->required()->check(CLI::IsMember({"dot", "tikz"}));
    exp->add_option("--out", a.out, "Output path (default: stdout)");

    try {
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kHolds;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kHolds;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    for (auto* sub : {verify, search})
        if (sub->parsed())
            a.has_seed = sub->count("--seed") > 0;

    try {
        if (cert->parsed())
            return cmd_cert(a, out);
        if (power->parsed())
            return cmd_power(a, out);
        if (verify->parsed())
            return cmd_verify(a, out, err);
        if (pattern->parsed())
            return cmd_pattern(a, out, err);
        if (search->parsed())
            return cmd_search(a, out, err);
        if (exp->parsed())
            return cmd_export(a, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace rainbow::cli
