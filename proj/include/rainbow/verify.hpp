#pragma once

// Rainbow-subgraph detection and certificate verification.
//
// All scans keep the set of colors used so far in a 64-bit mask, so every
// verification entry point rejects colorings with more than 64 colors.

#include "core.hpp"
#include "random.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace rainbow {

inline constexpr std::size_t kMaxScanColors = 64;

/// Exact binomial coefficient; saturates at uint64 max.
constexpr std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
        if (r > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

inline unsigned resolve_threads(unsigned threads) noexcept
{
    if (threads != 0)
        return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(task) for task in [0, tasks) over `threads` workers pulling
/// indices from a shared counter.  Callers merge per-task results, so the
/// outcome never depends on which worker ran which task.
template <typename Body>
void parallel_tasks(std::size_t tasks, unsigned threads, Body&& body)
{
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(tasks, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++)
            body(t);
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
}

struct WitnessEdge {
    std::size_t u = 0; // 1-based
    std::size_t v = 0;
    Color color = 0;

    friend bool operator==(const WitnessEdge&, const WitnessEdge&) = default;
};

struct Witness {
    std::vector<std::size_t> vertices; // 1-based
    std::vector<WitnessEdge> edges;

    friend bool operator==(const Witness&, const Witness&) = default;
};

enum class ScanMode { exhaustive, sampled };

struct RainbowReport {
    bool found = false;
    std::optional<Witness> witness;
    // Exhaustive clique scans: q-subsets accounted for, either reached in full
    // or discarded as an extension of a pruned prefix.  A complete scan with
    // no witness accounts for exactly C(n, q).  Sampled scans: subsets drawn.
    // Pattern scans: injective vertex maps accounted for.
    std::uint64_t subsets_examined = 0;
    std::uint64_t subsets_completed = 0; // reached at full size
    std::uint64_t pruned_prefixes = 0;   // partial selections abandoned on a repeated color
    ScanMode mode = ScanMode::exhaustive;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const RainbowReport&, const RainbowReport&) = default;
};

/// Small pattern graph H on vertices 1..m.
class PatternGraph {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    static PatternGraph make(std::size_t m, std::vector<Edge> edges, std::string name = "custom")
    {
        if (m < 2 || edges.empty())
            throw Error(ErrorKind::PatternInvalid, "pattern needs at least one edge");
        std::set<Edge> seen;
        std::vector<bool> touched(m, false);
        for (auto& [u, v] : edges) {
            if (u < 1 || v < 1 || u > m || v > m)
                throw Error(ErrorKind::PatternInvalid, "edge " + std::to_string(u) + "-" + std::to_string(v)
                                                           + " outside 1.." + std::to_string(m));
            if (u == v)
                throw Error(ErrorKind::PatternInvalid, "loop at " + std::to_string(u));
            const std::size_t a = std::min(u, v) - 1, b = std::max(u, v) - 1;
            if (!seen.emplace(a, b).second)
                throw Error(ErrorKind::PatternInvalid, "duplicate edge " + std::to_string(a + 1) + "-"
                                                           + std::to_string(b + 1));
            touched[a] = touched[b] = true;
        }
        for (std::size_t p = 0; p < m; ++p)
            if (!touched[p])
                throw Error(ErrorKind::PatternInvalid, "isolated pattern vertex " + std::to_string(p + 1));
        return PatternGraph(m, std::move(edges), std::move(name));
    }

    static PatternGraph clique(std::size_t q)
    {
        std::vector<Edge> edges;
        for (std::size_t u = 1; u <= q; ++u)
            for (std::size_t v = u + 1; v <= q; ++v)
                edges.emplace_back(u, v);
        return make(q, std::move(edges), "K" + std::to_string(q));
    }

    static PatternGraph cycle(std::size_t m)
    {
        if (m < 3)
            throw Error(ErrorKind::PatternInvalid, "cycle needs at least 3 vertices");
        std::vector<Edge> edges;
        for (std::size_t u = 1; u <= m; ++u)
            edges.emplace_back(u, u % m + 1);
        return make(m, std::move(edges), "C" + std::to_string(m));
    }

    /// Vertex-disjoint union of `count` triangles.
    static PatternGraph disjoint_triangles(std::size_t count)
    {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t a = 3 * i + 1;
            edges.insert(edges.end(), {{a, a + 1}, {a, a + 2}, {a + 1, a + 2}});
        }
        return make(3 * count, std::move(edges), std::to_string(count) + "K3");
    }

    /// Edge list such as "1-2,2-3,3-1"; m is the largest vertex named.
    static PatternGraph parse(const std::string& text)
    {
        std::vector<Edge> edges;
        std::size_t m = 0;
        std::size_t pos = 0;
        auto read_number = [&]() -> std::size_t {
            const std::size_t start = pos;
            std::size_t value = 0;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
                if (value > 1'000'000)
                    throw Error(ErrorKind::PatternInvalid, "vertex label too large in '" + text + "'");
                ++pos;
            }
            if (pos == start)
                throw Error(ErrorKind::PatternInvalid, "expected a vertex number at offset " + std::to_string(pos)
                                                           + " in '" + text + "'");
            return value;
        };
        while (pos < text.size()) {
            const std::size_t u = read_number();
            if (pos >= text.size() || text[pos] != '-')
                throw Error(ErrorKind::PatternInvalid, "expected '-' at offset " + std::to_string(pos) + " in '"
                                                           + text + "'");
            ++pos;
            const std::size_t v = read_number();
            edges.emplace_back(u, v);
            m = std::max({m, u, v});
            if (pos < text.size()) {
                if (text[pos] != ',')
                    throw Error(ErrorKind::PatternInvalid, "expected ',' at offset " + std::to_string(pos) + " in '"
                                                               + text + "'");
                if (++pos == text.size())
                    throw Error(ErrorKind::PatternInvalid, "trailing ',' in '" + text + "'");
            }
        }
        return make(m, std::move(edges), text);
    }

    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    PatternGraph(std::size_t m, std::vector<Edge> edges, std::string name)
        : m_(m), edges_(std::move(edges)), name_(std::move(name))
    {
    }

    std::size_t m_;
    std::vector<Edge> edges_;
    std::string name_;
};

/// True iff every listed edge matches the coloring, lies inside the witness
/// vertex set, and no two listed edges share a color.
inline bool witness_is_valid(const EdgeColoring& coloring, const Witness& witness)
{
    if (witness.edges.empty())
        return false;
    std::vector<bool> used(coloring.ell() + 1, false);
    for (const auto& e : witness.edges) {
        if (std::find(witness.vertices.begin(), witness.vertices.end(), e.u) == witness.vertices.end()
            || std::find(witness.vertices.begin(), witness.vertices.end(), e.v) == witness.vertices.end())
            return false;
        if (e.u == e.v || e.u < 1 || e.v < 1 || e.u > coloring.n() || e.v > coloring.n())
            return false;
        if (coloring.color(e.u, e.v) != e.color || used[e.color])
            return false;
        used[e.color] = true;
    }
    return true;
}

/// Witness listing every pair of the given 1-based vertices.
inline Witness clique_witness(const EdgeColoring& coloring, std::vector<std::size_t> vertices)
{
    std::sort(vertices.begin(), vertices.end());
    Witness w;
    w.vertices = vertices;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            w.edges.push_back({vertices[i], vertices[j], coloring.color(vertices[i], vertices[j])});
    return w;
}

namespace detail {

inline void check_scan_colors(const EdgeColoring& coloring)
{
    if (coloring.ell() > kMaxScanColors)
        throw Error(ErrorKind::TooManyColors, std::to_string(coloring.ell()) + " colors; scans support at most "
                                                  + std::to_string(kMaxScanColors));
}

inline void check_clique_size(const EdgeColoring& coloring, std::size_t q)
{
    if (q < 2)
        throw Error(ErrorKind::QTooSmall, "q = " + std::to_string(q) + " < 2");
    if (q > coloring.n())
        throw Error(ErrorKind::QTooLarge, "q = " + std::to_string(q) + " > n = " + std::to_string(coloring.n()));
    check_scan_colors(coloring);
}

constexpr std::uint64_t color_bit(Color c) noexcept { return std::uint64_t{1} << (c - 1); }

struct CliqueTally {
    std::uint64_t covered = 0;
    std::uint64_t completed = 0;
    std::uint64_t pruned = 0;
    std::uint64_t rainbow = 0;
    std::vector<std::size_t> first; // 0-based, ascending; empty if none

    void add(const CliqueTally& o) noexcept
    {
        covered += o.covered;
        completed += o.completed;
        pruned += o.pruned;
        rainbow += o.rainbow;
    }
};

// Nested ascending loops over q-subsets whose least vertex is fixed; a partial
// subset is abandoned as soon as a new vertex repeats a color.
class CliqueScan {
public:
    CliqueScan(const EdgeColoring& coloring, std::size_t q, bool stop_at_first)
        : coloring_(coloring), q_(q), stop_(stop_at_first), chosen_(q)
    {
        const std::size_t n = coloring.n();
        tails_.assign((n + 1) * (q + 1), 0);
        for (std::size_t r = 0; r <= n; ++r)
            for (std::size_t d = 0; d <= q; ++d)
                tails_[r * (q + 1) + d] = binomial(r, d);
    }

    CliqueTally run_from(std::size_t least)
    {
        tally_ = {};
        chosen_[0] = least;
        if (q_ == 1) {
            record();
        } else {
            extend(1, least + 1, 0);
        }
        return std::move(tally_);
    }

private:
    // Returns true when the scan should stop.
    bool extend(std::size_t depth, std::size_t start, std::uint64_t mask)
    {
        const std::size_t n = coloring_.n();
        const std::size_t last = n - (q_ - depth);
        for (std::size_t w = start; w <= last; ++w) {
            const auto row = coloring_.row(w);
            std::uint64_t m = mask;
            bool clash = false;
            for (std::size_t i = 0; i < depth; ++i) {
                const std::uint64_t bit = color_bit(row[chosen_[i]]);
                if (m & bit) {
                    clash = true;
                    break;
                }
                m |= bit;
            }
            if (clash) {
                ++tally_.pruned;
                tally_.covered += tails_[(n - 1 - w) * (q_ + 1) + (q_ - depth - 1)];
                continue;
            }
            chosen_[depth] = w;
            if (depth + 1 == q_) {
                if (record())
                    return true;
            } else if (extend(depth + 1, w + 1, m)) {
                return true;
            }
        }
        return false;
    }

    bool record()
    {
        ++tally_.covered;
        ++tally_.completed;
        ++tally_.rainbow;
        if (tally_.first.empty())
            tally_.first.assign(chosen_.begin(), chosen_.end());
        return stop_;
    }

    const EdgeColoring& coloring_;
    std::size_t q_;
    bool stop_;
    std::vector<std::size_t> chosen_;
    std::vector<std::uint64_t> tails_;
    CliqueTally tally_;
};

// Splits the scan on the least vertex, then merges as a sequential scan would:
// totals over every least vertex up to the first one holding a witness.
inline CliqueTally scan_cliques(const EdgeColoring& coloring, std::size_t q, bool stop_at_first, unsigned threads)
{
    const std::size_t tasks = coloring.n() - q + 1;
    std::vector<CliqueTally> parts(tasks);
    std::atomic<std::size_t> best{tasks};
    parallel_tasks(tasks, threads, [&](std::size_t u) {
        if (stop_at_first && u > best.load())
            return;
        CliqueScan scan(coloring, q, stop_at_first);
        parts[u] = scan.run_from(u);
        if (stop_at_first && !parts[u].first.empty()) {
            std::size_t cur = best.load();
            while (u < cur && !best.compare_exchange_weak(cur, u)) {
            }
        }
    });
    CliqueTally total;
    for (std::size_t u = 0; u < tasks; ++u) {
        total.add(parts[u]);
        if (total.first.empty() && !parts[u].first.empty()) {
            total.first = parts[u].first;
            if (stop_at_first)
                break;
        }
    }
    return total;
}

} // namespace detail

/// Exhaustive search for a rainbow K_q; the witness is the lexicographically
/// least rainbow q-subset.  Result is independent of `threads` (0 = all cores).
inline RainbowReport find_rainbow_clique(const EdgeColoring& coloring, std::size_t q, unsigned threads = 1)
{
    detail::check_clique_size(coloring, q);
    const auto tally = detail::scan_cliques(coloring, q, true, threads);
    RainbowReport report;
    report.found = !tally.first.empty();
    report.subsets_examined = tally.covered;
    report.subsets_completed = tally.completed;
    report.pruned_prefixes = tally.pruned;
    if (report.found) {
        std::vector<std::size_t> vs;
        for (auto v : tally.first)
            vs.push_back(v + 1);
        report.witness = clique_witness(coloring, std::move(vs));
    }
    return report;
}

/// Exact number of q-subsets whose C(q,2) edges carry pairwise distinct colors.
inline std::uint64_t count_rainbow_cliques(const EdgeColoring& coloring, std::size_t q, unsigned threads = 1)
{
    detail::check_clique_size(coloring, q);
    return detail::scan_cliques(coloring, q, false, threads).rainbow;
}

/// Backtracking embedding of `pattern` into K_n with pairwise distinct colors
/// on the pattern edges.  Pattern vertices are placed in order 1..m onto host
/// vertices tried in ascending order; the witness is the lexicographically
/// least rainbow image tuple, listed in pattern-vertex order.
inline RainbowReport find_rainbow_pattern(const EdgeColoring& coloring, const PatternGraph& pattern)
{
    detail::check_scan_colors(coloring);
    const std::size_t m = pattern.m();
    const std::size_t n = coloring.n();
    if (m > n)
        throw Error(ErrorKind::PatternTooLarge, "pattern has " + std::to_string(m) + " vertices, host has "
                                                    + std::to_string(n));
    RainbowReport report;
    if (coloring.ell() < pattern.edges().size())
        return report;

    // back[p] = pattern vertices < p adjacent to p (0-based).
    std::vector<std::vector<std::size_t>> back(m);
    for (auto [u, v] : pattern.edges()) {
        const std::size_t a = std::min(u, v) - 1, b = std::max(u, v) - 1;
        back[b].push_back(a);
    }
    // Maps sharing a placed prefix of length d: (n-d)!/(n-m)!.
    std::vector<std::uint64_t> tails(m + 1, 1);
    for (std::size_t d = m; d-- > 0;)
        tails[d] = tails[d + 1] * (n - d);

    std::vector<std::size_t> image(m);
    std::vector<bool> used(n, false);
    bool found = false;
    auto place = [&](auto&& self, std::size_t p, std::uint64_t mask) -> void {
        for (std::size_t h = 0; h < n && !found; ++h) {
            if (used[h])
                continue;
            const auto row = coloring.row(h);
            std::uint64_t next = mask;
            bool clash = false;
            for (auto prev : back[p]) {
                const std::uint64_t bit = detail::color_bit(row[image[prev]]);
                if (next & bit) {
                    clash = true;
                    break;
                }
                next |= bit;
            }
            if (clash) {
                ++report.pruned_prefixes;
                report.subsets_examined += tails[p + 1];
                continue;
            }
            image[p] = h;
            if (p + 1 == m) {
                ++report.subsets_completed;
                ++report.subsets_examined;
                found = true;
                return;
            }
            used[h] = true;
            self(self, p + 1, next);
            used[h] = false;
        }
    };
    place(place, 0, 0);

    report.found = found;
    if (found) {
        Witness w;
        for (auto h : image)
            w.vertices.push_back(h + 1);
        for (auto [u, v] : pattern.edges()) {
            const std::size_t hu = image[u - 1] + 1, hv = image[v - 1] + 1;
            w.edges.push_back({hu, hv, coloring.color(hu, hv)});
        }
        report.witness = std::move(w);
    }
    return report;
}

/// Uniformly random q-subsets drawn in fixed-size chunks; chunk c uses
/// SplitMix64::stream(seed, c).  The first witness in global draw order is
/// reported, so the result depends only on (coloring, q, samples, seed).
inline RainbowReport sample_verify(const EdgeColoring& coloring, std::size_t q, std::uint64_t samples,
                                   std::uint64_t seed, unsigned threads = 1)
{
    detail::check_clique_size(coloring, q);
    if (samples < 1)
        throw Error(ErrorKind::InvalidConfig, "sample count must be at least 1");
    constexpr std::uint64_t chunk = 1 << 16;
    const std::size_t chunks = static_cast<std::size_t>((samples + chunk - 1) / chunk);
    const std::size_t n = coloring.n();

    struct Part {
        std::uint64_t drawn = 0;
        std::vector<std::size_t> first;
    };
    std::vector<Part> parts(chunks);
    std::atomic<std::size_t> best{chunks};
    parallel_tasks(chunks, threads, [&](std::size_t c) {
        if (c > best.load())
            return;
        auto rng = SplitMix64::stream(seed, c);
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = std::min(samples, begin + chunk);
        std::vector<std::size_t> pick(q);
        Part& part = parts[c];
        for (std::uint64_t s = begin; s < end; ++s) {
            // Floyd's algorithm.
            std::size_t size = 0;
            for (std::size_t j = n - q; j < n; ++j) {
                const auto t = static_cast<std::size_t>(rng.below(j + 1));
                const bool taken = std::find(pick.begin(), pick.begin() + size, t) != pick.begin() + size;
                pick[size++] = taken ? j : t;
            }
            ++part.drawn;
            std::uint64_t mask = 0;
            bool rainbow = true;
            for (std::size_t i = 1; i < q && rainbow; ++i) {
                const auto row = coloring.row(pick[i]);
                for (std::size_t k = 0; k < i; ++k) {
                    const std::uint64_t bit = detail::color_bit(row[pick[k]]);
                    if (mask & bit) {
                        rainbow = false;
                        break;
                    }
                    mask |= bit;
                }
            }
            if (rainbow) {
                part.first = pick;
                std::size_t cur = best.load();
                while (c < cur && !best.compare_exchange_weak(cur, c)) {
                }
                return;
            }
        }
    });

    RainbowReport report;
    report.mode = ScanMode::sampled;
    report.sample_count = samples;
    report.seed = seed;
    for (std::size_t c = 0; c < chunks; ++c) {
        report.subsets_examined += parts[c].drawn;
        report.subsets_completed += parts[c].drawn;
        if (!parts[c].first.empty()) {
            report.found = true;
            std::vector<std::size_t> vs;
            for (auto v : parts[c].first)
                vs.push_back(v + 1);
            report.witness = clique_witness(coloring, std::move(vs));
            break;
        }
    }
    return report;
}

struct CertificateVerdict {
    bool balanced = false;
    std::optional<std::uint32_t> uniform_t;
    bool rainbow_free = false;
    std::size_t clique_size = 0;
    RainbowReport report;
    BalanceProfile profile;

    [[nodiscard]] bool accepted() const noexcept { return balanced && rainbow_free; }
};

inline CertificateVerdict verify_certificate(const EdgeColoring& coloring, std::size_t q, unsigned threads = 1)
{
    CertificateVerdict verdict;
    verdict.clique_size = q;
    verdict.profile = balance_profile(coloring);
    verdict.uniform_t = verdict.profile.uniform_t;
    verdict.balanced = verdict.uniform_t.has_value();
    verdict.report = find_rainbow_clique(coloring, q, threads);
    verdict.rainbow_free = !verdict.report.found;
    return verdict;
}

} // namespace rainbow
