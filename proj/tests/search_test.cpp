#include "oracles.hpp"

#include <rainbow/construct.hpp>
#include <rainbow/search.hpp>

#include <gtest/gtest.h>

using namespace rainbow;

namespace {

SearchConfig k13_config(std::uint64_t seed)
{
    SearchConfig config;
    config.n = 13;
    config.ell = 6;
    config.q = 4;
    config.seed = seed;
    return config;
}

EdgeColoring perturb(const EdgeColoring& base, std::size_t edges, SplitMix64& rng)
{
    auto c = base;
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t u = 1; u <= base.n(); ++u)
        for (std::size_t v = u + 1; v <= base.n(); ++v)
            all.emplace_back(u, v);
    rng.shuffle(all);
    for (std::size_t i = 0; i < edges; ++i) {
        const auto [u, v] = all[i];
        const int old = c.color(u, v);
        int next = static_cast<int>(rng.below(base.ell() - 1)) + 1;
        if (next >= old)
            ++next;
        c = oracle::recolor(c, u, v, next);
    }
    return c;
}

// Every balanced coloring, no symmetry reduction; true iff one has no rainbow K_q.
bool exists_by_enumeration(std::size_t n, std::size_t ell, std::size_t q, std::uint64_t& leaves)
{
    const std::size_t t = (n - 1) / ell;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    EdgeColoring::Matrix m(n, std::vector<int>(n, 0));
    std::vector<std::vector<std::size_t>> cnt(n, std::vector<std::size_t>(ell + 1, 0));
    auto dfs = [&](auto&& self, std::size_t e) -> bool {
        if (e == edges.size()) {
            ++leaves;
            return oracle::rainbow_clique_count(EdgeColoring::from_matrix(n, ell, m), q) == 0;
        }
        const auto [u, v] = edges[e];
        for (std::size_t c = 1; c <= ell; ++c) {
            if (cnt[u][c] == t || cnt[v][c] == t)
                continue;
            m[u][v] = m[v][u] = static_cast<int>(c);
            ++cnt[u][c];
            ++cnt[v][c];
            const bool hit = self(self, e + 1);
            --cnt[u][c];
            --cnt[v][c];
            m[u][v] = m[v][u] = 0;
            if (hit)
                return true;
        }
        return false;
    };
    return dfs(dfs, 0);
}

} // namespace

TEST(SearchConfig, Validation)
{
    auto cfg = k13_config(1);
    cfg.ell = 5;
    try {
        validate_config(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
        EXPECT_NE(std::string(e.what()).find("does not divide"), std::string::npos);
    }

    SearchConfig nine;
    nine.n = 9;
    nine.ell = 4;
    nine.q = 3;
    EXPECT_FALSE(validate_config(nine)); // C(3,2) = 3 <= 4
    nine.ell = 2;
    const auto trivial = validate_config(nine);
    ASSERT_TRUE(trivial);
    EXPECT_EQ(trivial->status, SearchStatus::trivial_instance);

    cfg = k13_config(1);
    cfg.initial = new_coloring(3, 1, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    EXPECT_THROW(validate_config(cfg), Error);
    cfg = k13_config(1);
    cfg.q = 14;
    EXPECT_THROW(validate_config(cfg), Error);
}

TEST(SearchConfig, TrivialInstanceFromBothStrategies)
{
    SearchConfig cfg;
    cfg.n = 5;
    cfg.ell = 2;
    cfg.q = 3;
    EXPECT_EQ(local_search(cfg).status, SearchStatus::trivial_instance);
    cfg.strategy = Strategy::backtracking;
    EXPECT_EQ(backtracking_search(cfg).status, SearchStatus::trivial_instance);
}

TEST(RandomStart, BalancedWhenAFactorizationApplies)
{
    SplitMix64 rng(9);
    for (auto [n, ell] : std::vector<std::pair<std::size_t, std::size_t>>{{13, 6}, {13, 3}, {8, 7}, {10, 3}, {16, 5}, {9, 2}})
        for (int i = 0; i < 10; ++i)
            ASSERT_TRUE(is_balanced(random_start(n, ell, rng))) << n << " " << ell;
    // n odd with t odd has no balanced coloring; the start is still valid.
    const auto c = random_start(7, 6, rng);
    EXPECT_EQ(c.n(), 7u);
    EXPECT_FALSE(is_balanced(c));
}

TEST(Objective, ZeroExactlyWhenVerified)
{
    EXPECT_EQ(evaluate_objective(k13_certificate(), 4).total({}), 0);
    SplitMix64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = trial % 2 ? oracle::random_coloring(8, 7, rng) : perturb(k13_certificate(), 1 + rng.below(3), rng);
        const std::size_t q = c.n() == 8 ? 3 + rng.below(2) : 4;
        const auto obj = evaluate_objective(c, q);
        ASSERT_EQ(obj.total({}) == 0, verify_certificate(c, q).accepted());
    }
    // One recolored edge shifts two colors by one at each endpoint.
    const auto one = oracle::recolor(k13_certificate(), 1, 2, 3);
    EXPECT_EQ(evaluate_objective(one, 4).balance_deviation, 4);
}

TEST(LocalSearchState, IncrementalObjectiveTracksFullRecompute)
{
    SplitMix64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t q = 3 + rng.below(2);
        const auto start = oracle::random_coloring(9, 8, rng);
        LocalSearchState state(start, q, {2, 3});
        for (int step = 0; step < 15; ++step) {
            const auto moves = state.best_moves();
            ASSERT_FALSE(moves.empty());
            const auto move = moves[rng.below(moves.size())];
            const auto before = state.objective();
            state.apply(move);
            const auto full = evaluate_objective(state.coloring(), q);
            ASSERT_EQ(state.balance_deviation(), full.balance_deviation);
            ASSERT_EQ(state.rainbow_cliques(), full.rainbow_cliques);
            ASSERT_EQ(state.objective(), full.total({2, 3}));
            ASSERT_EQ(state.objective() - before, move.delta);
        }
    }
}

TEST(LocalSearch, CertificateNeedsNoSteps)
{
    auto cfg = k13_config(5);
    cfg.initial = k13_certificate();
    const auto out = local_search(cfg);
    ASSERT_EQ(out.status, SearchStatus::found);
    EXPECT_EQ(out.stats.steps_used, 0u);
    EXPECT_EQ(*out.coloring, k13_certificate());
}

TEST(LocalSearch, RepairsThreeEdgePerturbation)
{
    SplitMix64 rng(33);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto cfg = k13_config(seed);
        cfg.initial = perturb(k13_certificate(), 3, rng);
        const auto out = local_search(cfg);
        ASSERT_EQ(out.status, SearchStatus::found) << seed;
        EXPECT_TRUE(verify_certificate(*out.coloring, 4).accepted());
        EXPECT_TRUE(out.stats.winning_restart);
        EXPECT_EQ(*out.stats.best_objective, 0);
    }
}

TEST(LocalSearch, RadiusOneIsRepairedInOneStep)
{
    const auto base = k13_certificate();
    int cases = 0;
    for (std::size_t u = 1; u <= 13; ++u)
        for (std::size_t v = u + 1; v <= 13; ++v)
            for (int c = 1; c <= 6; ++c) {
                if (c == base.color(u, v))
                    continue;
                auto cfg = k13_config(static_cast<std::uint64_t>(cases));
                cfg.max_restarts = 1;
                cfg.initial = oracle::recolor(base, u, v, c);
                const auto out = local_search(cfg);
                ASSERT_EQ(out.status, SearchStatus::found);
                ASSERT_EQ(out.stats.steps_used, 1u);
                ++cases;
            }
    EXPECT_EQ(cases, 390);
}

TEST(LocalSearch, ObjectiveNeverIncreasesWithinRestart)
{
    SplitMix64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        LocalSearchState state(random_start(13, 6, rng), 4, {});
        auto last = state.objective();
        for (int step = 0; step < 200 && state.objective() > 0; ++step) {
            const auto moves = state.best_moves();
            if (moves.front().delta > 0)
                break;
            state.apply(moves[rng.below(moves.size())]);
            ASSERT_LE(state.objective(), last);
            last = state.objective();
        }
    }
}

TEST(LocalSearch, SevenVerticesSixColorsIsInfeasible)
{
    SearchConfig cfg;
    cfg.n = 7;
    cfg.ell = 6;
    cfg.q = 4;
    cfg.strategy = Strategy::backtracking;
    cfg.max_steps_per_restart = 10'000'000;
    // Certify first: the symmetry-reduced DFS exhausts, and so does plain
    // enumeration (a 1-regular color class on 7 vertices cannot exist).
    ASSERT_EQ(backtracking_search(cfg).status, SearchStatus::exhausted_space);
    std::uint64_t leaves = 0;
    ASSERT_FALSE(exists_by_enumeration(7, 6, 4, leaves));
    EXPECT_EQ(leaves, 0u);

    cfg.strategy = Strategy::local_search;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        cfg.seed = seed;
        const auto out = local_search(cfg);
        EXPECT_EQ(out.status, SearchStatus::exhausted_budget);
        EXPECT_GT(*out.stats.best_objective, 0);
        EXPECT_FALSE(out.coloring);
    }
}

TEST(LocalSearch, DeterministicAcrossThreadCounts)
{
    SplitMix64 rng(8);
    auto cfg = k13_config(99);
    cfg.initial = perturb(k13_certificate(), 4, rng);
    cfg.max_steps_per_restart = 40;
    const auto a = local_search(cfg);
    cfg.threads = 4;
    const auto b = local_search(cfg);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.coloring, b.coloring);
    EXPECT_EQ(a.stats.steps_used, b.stats.steps_used);
    EXPECT_EQ(a.stats.restarts_used, b.stats.restarts_used);
    EXPECT_EQ(a.stats.winning_restart, b.stats.winning_restart);
    EXPECT_EQ(a.stats.best_objective, b.stats.best_objective);

    auto cold = k13_config(7);
    cold.max_restarts = 6;
    const auto c1 = local_search(cold);
    cold.threads = 3;
    const auto c2 = local_search(cold);
    EXPECT_EQ(c1.stats.steps_used, c2.stats.steps_used);
    EXPECT_EQ(c1.stats.best_objective, c2.stats.best_objective);
}

TEST(Backtracking, FourVerticesThreeColorsExhausts)
{
    std::uint64_t leaves = 0;
    EXPECT_FALSE(exists_by_enumeration(4, 3, 3, leaves));
    EXPECT_EQ(leaves, 6u); // the 3! labelled 1-factorizations of K_4

    SearchConfig cfg;
    cfg.n = 4;
    cfg.ell = 3;
    cfg.q = 3;
    cfg.strategy = Strategy::backtracking;
    const auto out = backtracking_search(cfg);
    EXPECT_EQ(out.status, SearchStatus::exhausted_space);
    EXPECT_FALSE(out.coloring);
}

TEST(Backtracking, AgreesWithUnreducedEnumeration)
{
    for (auto [n, ell, q] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
             {4, 3, 3}, {6, 5, 3}, {7, 3, 3}, {7, 6, 4}, {5, 4, 3}}) {
        std::uint64_t leaves = 0;
        const bool exists = exists_by_enumeration(n, ell, q, leaves);
        SearchConfig cfg;
        cfg.n = n;
        cfg.ell = ell;
        cfg.q = q;
        cfg.strategy = Strategy::backtracking;
        cfg.max_steps_per_restart = 100'000'000;
        const auto out = backtracking_search(cfg);
        ASSERT_NE(out.status, SearchStatus::exhausted_budget);
        EXPECT_EQ(out.status == SearchStatus::found, exists) << n << " " << ell << " " << q;
    }
}

TEST(Backtracking, FoundPathReturnsVerifiedColoring)
{
    // Bypass the pigeonhole guard so that any balanced coloring is a solution.
    SearchConfig cfg;
    cfg.n = 9;
    cfg.ell = 2;
    cfg.q = 3;
    cfg.max_steps_per_restart = 1'000'000;
    detail::Backtracker dfs(cfg);
    ASSERT_EQ(dfs.run(), SearchStatus::found);
    const auto c = dfs.coloring();
    EXPECT_TRUE(is_balanced(c));
    // Symmetry breaking: row of vertex 1 is 1^t 2^t.
    EXPECT_EQ(c.to_matrix()[0], (std::vector<int>{0, 1, 1, 1, 1, 2, 2, 2, 2}));
}

TEST(Backtracking, BudgetIsRespectedAndDeterministic)
{
    auto cfg = k13_config(1);
    cfg.strategy = Strategy::backtracking;
    cfg.max_steps_per_restart = 200'000;
    const auto a = backtracking_search(cfg);
    const auto b = backtracking_search(cfg);
    ASSERT_TRUE(a.status == SearchStatus::exhausted_budget || a.status == SearchStatus::found);
    if (a.status == SearchStatus::found) {
        EXPECT_TRUE(verify_certificate(*a.coloring, 4).accepted());
    } else {
        EXPECT_EQ(a.stats.steps_used, 200'000u);
    }
    EXPECT_EQ(a.stats.steps_used, b.stats.steps_used);
    EXPECT_EQ(a.stats.max_depth, b.stats.max_depth);
}
