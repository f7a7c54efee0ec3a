#pragma once

// Budgeted search for balanced ell-colorings of K_n without a rainbow K_q.
//
// local_search minimizes
//     F = W_b * sum_{v,c} |counts[v][c] - t| + W_r * #rainbow K_q
// by single-edge recolorings (steepest descent, ties broken by the seeded
// generator, sideways moves up to a plateau limit, then restart).
// backtracking_search is a DFS over the edges in lexicographic order with
// per-vertex count bounds, rainbow rejection and lex-leader symmetry breaking.

#include "core.hpp"
#include "random.hpp"
#include "verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rainbow {

enum class Strategy { local_search, backtracking };
enum class SearchStatus { found, exhausted_budget, exhausted_space, trivial_instance };

constexpr std::string_view to_string(Strategy s) noexcept
{
    return s == Strategy::local_search ? "local_search" : "backtracking";
}

constexpr std::string_view to_string(SearchStatus s) noexcept
{
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted_budget: return "exhausted_budget";
    case SearchStatus::exhausted_space: return "exhausted_space";
    case SearchStatus::trivial_instance: return "trivial_instance";
    }
    return "unknown";
}

struct ObjectiveWeights {
    std::int64_t balance = 1;
    std::int64_t rainbow = 1;
};

struct SearchConfig {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t q = 0;
    Strategy strategy = Strategy::local_search;
    std::uint64_t seed = 0;
    std::uint64_t max_restarts = 20;
    // Local search: moves per restart.  Backtracking: total DFS nodes.
    std::uint64_t max_steps_per_restart = 2000;
    std::optional<EdgeColoring> initial;
    ObjectiveWeights weights;
    std::uint64_t plateau_limit = 200;
    unsigned threads = 1;
};

struct SearchStats {
    std::uint64_t restarts_used = 0;
    std::uint64_t steps_used = 0;
    std::optional<std::int64_t> best_objective; // local search only
    std::optional<std::uint64_t> winning_restart;
    std::size_t max_depth = 0; // backtracking: most edges assigned at once
    double wall_seconds = 0.0;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::exhausted_budget;
    std::optional<EdgeColoring> coloring;
    SearchStats stats;
    std::string notice;
};

struct Objective {
    std::int64_t balance_deviation = 0;
    std::int64_t rainbow_cliques = 0;

    [[nodiscard]] std::int64_t total(const ObjectiveWeights& w) const noexcept
    {
        return w.balance * balance_deviation + w.rainbow * rainbow_cliques;
    }
};

/// Full (non-incremental) objective of a coloring; requires ell | n-1.
inline Objective evaluate_objective(const EdgeColoring& coloring, std::size_t q)
{
    if ((coloring.n() - 1) % coloring.ell() != 0)
        throw Error(ErrorKind::InvalidConfig, "balance target undefined: ell does not divide n-1");
    const auto t = static_cast<std::int64_t>((coloring.n() - 1) / coloring.ell());
    const auto profile = balance_profile(coloring);
    Objective obj;
    for (auto c : profile.counts)
        obj.balance_deviation += std::abs(static_cast<std::int64_t>(c) - t);
    obj.rainbow_cliques = static_cast<std::int64_t>(count_rainbow_cliques(coloring, q));
    return obj;
}

/// Checks the configuration; returns a trivial_instance outcome when C(q,2) > ell.
inline std::optional<SearchOutcome> validate_config(const SearchConfig& config)
{
    auto reject = [](const std::string& why) { throw Error(ErrorKind::InvalidConfig, why); };
    if (config.n < 2)
        reject("n must be at least 2");
    if (config.ell < 1 || config.ell > kMaxScanColors)
        reject("ell must lie in 1.." + std::to_string(kMaxScanColors));
    if (config.q < 2 || config.q > config.n)
        reject("q must lie in 2..n");
    if ((config.n - 1) % config.ell != 0)
        reject(std::to_string(config.ell) + " does not divide n-1 = " + std::to_string(config.n - 1)
               + "; no balanced coloring exists");
    if (config.initial && (config.initial->n() != config.n || config.initial->ell() != config.ell))
        reject("initial coloring does not match n and ell");
    if (binomial(config.q, 2) > config.ell) {
        SearchOutcome out;
        out.status = SearchStatus::trivial_instance;
        out.notice = "C(" + std::to_string(config.q) + ",2) = " + std::to_string(binomial(config.q, 2)) + " > ell = "
                     + std::to_string(config.ell) + ": no rainbow K_" + std::to_string(config.q)
                     + " can exist; every balanced coloring qualifies";
        return out;
    }
    return std::nullopt;
}

/// Balanced starting coloring from a randomly grouped 1-factorization (n even)
/// or circulant 2-factorization (n odd, t even) under a random vertex
/// relabeling; otherwise uniformly random colors.
inline EdgeColoring random_start(std::size_t n, std::size_t ell, SplitMix64& rng)
{
    std::vector<Color> cells(n * n, 0);
    auto set = [&](std::size_t i, std::size_t j, Color c) {
        cells[i * n + j] = c;
        cells[j * n + i] = c;
    };
    const std::size_t t = (n - 1) / ell;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    if (n % 2 == 0 && (n - 1) % ell == 0) {
        // Round robin: round r pairs (n-1, r) and (r+k, r-k) mod n-1.
        const std::size_t m = n - 1;
        std::vector<std::size_t> rounds(m);
        std::iota(rounds.begin(), rounds.end(), 0);
        rng.shuffle(rounds);
        for (std::size_t slot = 0; slot < m; ++slot) {
            const std::size_t r = rounds[slot];
            const auto c = static_cast<Color>(slot / t + 1);
            set(perm[m], perm[r], c);
            for (std::size_t k = 1; k < n / 2; ++k)
                set(perm[(r + k) % m], perm[(r + m - k) % m], c);
        }
    } else if (n % 2 == 1 && (n - 1) % ell == 0 && t % 2 == 0) {
        const std::size_t classes = (n - 1) / 2;
        std::vector<std::size_t> diffs(classes);
        std::iota(diffs.begin(), diffs.end(), 1);
        rng.shuffle(diffs);
        for (std::size_t slot = 0; slot < classes; ++slot) {
            const auto c = static_cast<Color>(slot / (t / 2) + 1);
            for (std::size_t i = 0; i < n; ++i)
                set(perm[i], perm[(i + diffs[slot]) % n], c);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                set(i, j, static_cast<Color>(rng.below(ell) + 1));
    }
    return EdgeColoring::from_cells(n, ell, std::move(cells));
}

/// Mutable local-search state with incremental objective bookkeeping.
class LocalSearchState {
public:
    struct Move {
        std::size_t u = 0; // 0-based, u < v
        std::size_t v = 0;
        Color to = 0;
        std::int64_t delta = 0;
    };

    LocalSearchState(const EdgeColoring& start, std::size_t q, ObjectiveWeights weights)
        : n_(start.n()), ell_(start.ell()), q_(q), weights_(weights), cells_(start.cells()),
          counts_(n_ * ell_, 0), notin_(ell_ + 1)
    {
        if ((n_ - 1) % ell_ != 0)
            throw Error(ErrorKind::InvalidConfig, "ell does not divide n-1");
        if (ell_ > kMaxScanColors)
            throw Error(ErrorKind::TooManyColors, "local search supports at most 64 colors");
        t_ = static_cast<std::int64_t>((n_ - 1) / ell_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j)
                    ++counts_[i * ell_ + cell(i, j) - 1];
        for (auto c : counts_)
            balance_ += std::abs(static_cast<std::int64_t>(c) - t_);
        rainbow_ = static_cast<std::int64_t>(count_rainbow_cliques(start, q_));
        others_.resize(q_);
    }

    [[nodiscard]] std::int64_t objective() const noexcept { return weights_.balance * balance_ + weights_.rainbow * rainbow_; }
    [[nodiscard]] std::int64_t balance_deviation() const noexcept { return balance_; }
    [[nodiscard]] std::int64_t rainbow_cliques() const noexcept { return rainbow_; }

    [[nodiscard]] EdgeColoring coloring() const { return EdgeColoring::from_cells(n_, ell_, cells_); }

    /// Every recoloring move attaining the minimum delta, in (u, v, color) order.
    std::vector<Move> best_moves()
    {
        std::vector<Move> best;
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = u + 1; v < n_; ++v) {
                rainbow_through(u, v);
                const Color from = cell(u, v);
                for (std::size_t b = 1; b <= ell_; ++b) {
                    if (b == from)
                        continue;
                    const auto to = static_cast<Color>(b);
                    const std::int64_t delta = weights_.balance * (balance_delta(u, from, to) + balance_delta(v, from, to))
                                               + weights_.rainbow * (notin_[to] - notin_[from]);
                    if (best.empty() || delta < best.front().delta)
                        best.assign(1, Move{u, v, to, delta});
                    else if (delta == best.front().delta)
                        best.push_back(Move{u, v, to, delta});
                }
            }
        }
        return best;
    }

    void apply(const Move& move)
    {
        const Color from = cell(move.u, move.v);
        rainbow_through(move.u, move.v);
        rainbow_ += notin_[move.to] - notin_[from];
        balance_ += balance_delta(move.u, from, move.to) + balance_delta(move.v, from, move.to);
        for (auto x : {move.u, move.v}) {
            --counts_[x * ell_ + from - 1];
            ++counts_[x * ell_ + move.to - 1];
        }
        cells_[move.u * n_ + move.v] = move.to;
        cells_[move.v * n_ + move.u] = move.to;
    }

private:
    [[nodiscard]] Color cell(std::size_t i, std::size_t j) const noexcept { return cells_[i * n_ + j]; }

    [[nodiscard]] std::int64_t balance_delta(std::size_t x, Color from, Color to) const noexcept
    {
        const auto a = static_cast<std::int64_t>(counts_[x * ell_ + from - 1]);
        const auto b = static_cast<std::int64_t>(counts_[x * ell_ + to - 1]);
        return std::abs(a - 1 - t_) - std::abs(a - t_) + std::abs(b + 1 - t_) - std::abs(b - t_);
    }

    // notin_[c] = number of q-subsets through {u, v} whose other edges are
    // pairwise distinct and avoid color c, i.e. that are rainbow when uv has color c.
    void rainbow_through(std::size_t u, std::size_t v)
    {
        std::fill(notin_.begin(), notin_.end(), 0);
        others_[0] = u;
        others_[1] = v;
        extend_others(2, 0, 0);
    }

    void extend_others(std::size_t depth, std::size_t start, std::uint64_t mask)
    {
        if (depth == q_) {
            for (std::size_t c = 1; c <= ell_; ++c)
                if (!(mask & (std::uint64_t{1} << (c - 1))))
                    ++notin_[c];
            return;
        }
        for (std::size_t w = start; w + (q_ - depth) <= n_; ++w) {
            if (w == others_[0] || w == others_[1])
                continue;
            std::uint64_t m = mask;
            bool clash = false;
            for (std::size_t i = 0; i < depth; ++i) {
                const std::uint64_t bit = std::uint64_t{1} << (cell(w, others_[i]) - 1);
                if (m & bit) {
                    clash = true;
                    break;
                }
                m |= bit;
            }
            if (clash)
                continue;
            others_[depth] = w;
            extend_others(depth + 1, w + 1, m);
        }
    }

    std::size_t n_;
    std::size_t ell_;
    std::size_t q_;
    ObjectiveWeights weights_;
    std::vector<Color> cells_;
    std::vector<std::uint32_t> counts_;
    std::int64_t t_ = 0;
    std::int64_t balance_ = 0;
    std::int64_t rainbow_ = 0;
    std::vector<std::int64_t> notin_;
    std::vector<std::size_t> others_;
};

namespace detail {

struct RestartResult {
    bool found = false;
    std::uint64_t steps = 0;
    std::int64_t best = 0;
    std::optional<EdgeColoring> coloring;
};

inline RestartResult run_restart(const SearchConfig& config, std::uint64_t restart)
{
    auto rng = SplitMix64::stream(config.seed, restart);
    const EdgeColoring start = config.initial ? *config.initial : random_start(config.n, config.ell, rng);
    LocalSearchState state(start, config.q, config.weights);
    RestartResult result;
    result.best = state.objective();
    std::uint64_t plateau = 0;
    while (state.objective() > 0 && result.steps < config.max_steps_per_restart) {
        const auto moves = state.best_moves();
        if (moves.empty())
            break;
        const std::int64_t delta = moves.front().delta;
        if (delta > 0)
            break;
        if (delta == 0) {
            if (plateau >= config.plateau_limit)
                break;
            ++plateau;
        } else {
            plateau = 0;
        }
        state.apply(moves[rng.below(moves.size())]);
        ++result.steps;
        result.best = std::min(result.best, state.objective());
    }
    if (state.objective() == 0) {
        result.found = true;
        result.coloring = state.coloring();
    }
    return result;
}

inline void seal_found(SearchOutcome& out, std::size_t q)
{
    if (!verify_certificate(*out.coloring, q).accepted())
        throw std::logic_error("search produced a coloring that fails verification");
}

} // namespace detail

/// Restarts run concurrently with streams derived from (seed, restart index);
/// the lowest-indexed successful restart wins, so results do not depend on
/// config.threads.
inline SearchOutcome local_search(const SearchConfig& config)
{
    const auto started = std::chrono::steady_clock::now();
    if (auto trivial = validate_config(config))
        return *trivial;
    if (config.strategy != Strategy::local_search)
        throw Error(ErrorKind::InvalidConfig, "local_search called with a different strategy");

    const auto restarts = static_cast<std::size_t>(config.max_restarts);
    std::vector<detail::RestartResult> results(restarts);
    std::atomic<std::size_t> best{restarts};
    parallel_tasks(restarts, config.threads, [&](std::size_t r) {
        if (r > best.load())
            return;
        results[r] = detail::run_restart(config, r);
        if (results[r].found) {
            std::size_t cur = best.load();
            while (r < cur && !best.compare_exchange_weak(cur, r)) {
            }
        }
    });

    SearchOutcome out;
    out.status = SearchStatus::exhausted_budget;
    for (std::size_t r = 0; r < restarts; ++r) {
        const auto& res = results[r];
        out.stats.restarts_used = r + 1;
        out.stats.steps_used += res.steps;
        out.stats.best_objective = out.stats.best_objective ? std::min(*out.stats.best_objective, res.best) : res.best;
        if (res.found) {
            out.status = SearchStatus::found;
            out.coloring = res.coloring;
            out.stats.winning_restart = r;
            detail::seal_found(out, config.q);
            break;
        }
    }
    out.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

namespace detail {

class Backtracker {
public:
    Backtracker(const SearchConfig& config)
        : n_(config.n), ell_(config.ell), q_(config.q), t_((config.n - 1) / config.ell),
          budget_(config.max_steps_per_restart), cells_(n_ * n_, 0), counts_(n_ * ell_, 0), subset_(q_)
    {
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v)
                edges_.emplace_back(u, v);
    }

    SearchStatus run()
    {
        if (dfs(0))
            return SearchStatus::found;
        return out_of_budget_ ? SearchStatus::exhausted_budget : SearchStatus::exhausted_space;
    }

    [[nodiscard]] std::uint64_t nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t max_depth() const noexcept { return max_depth_; }
    [[nodiscard]] EdgeColoring coloring() const { return EdgeColoring::from_cells(n_, ell_, cells_); }

private:
    bool dfs(std::size_t e)
    {
        max_depth_ = std::max(max_depth_, e);
        if (e == edges_.size())
            return true;
        const auto [u, v] = edges_[e];
        // Row of vertex 1 non-decreasing; colors first appear in increasing order.
        std::size_t lo = 1;
        if (u == 0 && v >= 2)
            lo = cells_[v - 1];
        const std::size_t hi = std::min(ell_, max_color_ + 1);
        for (std::size_t c = lo; c <= hi; ++c) {
            if (counts_[u * ell_ + c - 1] >= t_ || counts_[v * ell_ + c - 1] >= t_)
                continue;
            if (nodes_ >= budget_) {
                out_of_budget_ = true;
                return false;
            }
            ++nodes_;
            assign(u, v, static_cast<Color>(c), +1);
            if (!closes_rainbow(u, v)) {
                const std::size_t saved = max_color_;
                max_color_ = std::max(max_color_, c);
                if (dfs(e + 1))
                    return true;
                max_color_ = saved;
            }
            assign(u, v, static_cast<Color>(c), -1);
            if (out_of_budget_)
                return false;
        }
        return false;
    }

    void assign(std::size_t u, std::size_t v, Color c, int sign)
    {
        const Color stored = sign > 0 ? c : Color{0};
        cells_[u * n_ + v] = stored;
        cells_[v * n_ + u] = stored;
        counts_[u * ell_ + c - 1] += static_cast<std::uint32_t>(sign);
        counts_[v * ell_ + c - 1] += static_cast<std::uint32_t>(sign);
    }

    // A q-subset becomes complete exactly when its last edge in lexicographic
    // order, (second largest, largest), is assigned: the rest lie in {0..u-1}.
    bool closes_rainbow(std::size_t u, std::size_t v)
    {
        subset_[0] = u;
        subset_[1] = v;
        return extend(2, 0, std::uint64_t{1} << (cells_[u * n_ + v] - 1));
    }

    bool extend(std::size_t depth, std::size_t start, std::uint64_t mask)
    {
        if (depth == q_)
            return true;
        for (std::size_t w = start; w + (q_ - depth) <= subset_[0]; ++w) {
            std::uint64_t m = mask;
            bool clash = false;
            for (std::size_t i = 0; i < depth; ++i) {
                const std::uint64_t bit = std::uint64_t{1} << (cells_[w * n_ + subset_[i]] - 1);
                if (m & bit) {
                    clash = true;
                    break;
                }
                m |= bit;
            }
            if (clash)
                continue;
            subset_[depth] = w;
            if (extend(depth + 1, w + 1, m))
                return true;
        }
        return false;
    }

    std::size_t n_;
    std::size_t ell_;
    std::size_t q_;
    std::size_t t_;
    std::uint64_t budget_;
    std::vector<Color> cells_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::size_t> subset_;
    std::size_t max_color_ = 0;
    std::uint64_t nodes_ = 0;
    std::size_t max_depth_ = 0;
    bool out_of_budget_ = false;
};

} // namespace detail

/// Exhaustive DFS; exhausted_space means the symmetry-reduced space holds no solution.
/// An initial coloring is ignored.
inline SearchOutcome backtracking_search(const SearchConfig& config)
{
    const auto started = std::chrono::steady_clock::now();
    if (auto trivial = validate_config(config))
        return *trivial;
    if (config.strategy != Strategy::backtracking)
        throw Error(ErrorKind::InvalidConfig, "backtracking_search called with a different strategy");

    detail::Backtracker dfs(config);
    SearchOutcome out;
    out.status = dfs.run();
    out.stats.restarts_used = 1;
    out.stats.steps_used = dfs.nodes();
    out.stats.max_depth = dfs.max_depth();
    if (out.status == SearchStatus::found) {
        out.coloring = dfs.coloring();
        out.stats.winning_restart = 0;
        detail::seal_found(out, config.q);
    }
    out.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

inline SearchOutcome run_search(const SearchConfig& config)
{
    return config.strategy == Strategy::local_search ? local_search(config) : backtracking_search(config);
}

} // namespace rainbow
