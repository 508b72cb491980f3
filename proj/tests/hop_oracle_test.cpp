#include "test_support.hpp"

#include "ncx/error.hpp"
#include "ncx/hop_oracle.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace ncx;
using namespace ncx::testing;

TEST(HopMap, ChainTargetC) {
    auto g = chain_graph();
    auto m = build_hop_map(g, g.instance("c"), 2);
    EXPECT_EQ(m.hop(g.instance("c")), 0u);
    EXPECT_EQ(m.hop(g.instance("b")), 1u);
    EXPECT_EQ(m.hop(g.instance("a")), 2u);
    EXPECT_EQ(m.size(), 3u);
}

TEST(HopMap, RadiusZeroIsTargetOnly) {
    auto g = chain_graph();
    auto m = build_hop_map(g, g.instance("b"), 0);
    EXPECT_EQ(m.size(), 1u);
    EXPECT_EQ(m.hop(g.instance("b")), 0u);
    EXPECT_EQ(m.hop(g.instance("a")), kUnreachable);
}

TEST(HopMap, BeyondRadiusIsUnreachable) {
    auto g = chain_graph();
    auto m = build_hop_map(g, g.instance("c"), 1);
    EXPECT_EQ(m.hop(g.instance("a")), kUnreachable);
}

TEST(KHopIndex, EdgelessGraph) {
    auto g = graph_from("x\tinstance\ny\tinstance\nz\tinstance\n", "");
    auto ix = build_khop_index(g, 3);
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 0; j < 3; ++j)
            EXPECT_EQ(ix.hop(InstanceId{i}, InstanceId{j}), i == j ? 0u : kUnreachable);
}

TEST(KHopIndex, RadiusZeroAnswersOnlySelf) {
    auto g = chain_graph();
    auto ix = build_khop_index(g, 0);
    EXPECT_EQ(ix.report().entries, 3u);
    EXPECT_EQ(ix.hop(g.instance("a"), g.instance("a")), 0u);
    EXPECT_EQ(ix.hop(g.instance("a"), g.instance("b")), kUnreachable);
}

TEST(KHopIndex, BudgetExceededAdvisesPerTargetMode) {
    auto rg = random_graph(40, 0.3, 5);
    try {
        build_khop_index(rg.graph, 3, 64);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::limit);
        EXPECT_NE(std::string(e.what()).find("per-target"), std::string::npos);
    }
}

// BFS maps agree with Floyd–Warshall truncated at the radius, for the cache
// and the precomputed table alike.
TEST(HopOracleProperty, MatchesFloydWarshall) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 5 + seed % 20;
        auto rg = random_graph(n, 0.15, seed);
        auto dist = floyd_warshall(rg.adj);
        for (HopCount radius : {0u, 1u, 2u, 3u}) {
            HopCache cache(rg.graph, radius, 4);
            auto table = build_khop_index(rg.graph, radius);
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t s = 0; s < n; ++s) {
                    const HopCount want = dist[s][t] <= radius ? dist[s][t] : kUnreachable;
                    const auto u = vid(rg.graph, s), v = vid(rg.graph, t);
                    ASSERT_EQ(cache.hop(u, v), want) << "seed " << seed << " r " << radius;
                    ASSERT_EQ(table.hop(u, v), want);
                }
        }
    }
}

TEST(HopCache, EvictsLeastRecentlyUsed) {
    auto rg = random_graph(10, 0.3, 3);
    HopCache cache(rg.graph, 2, 2);
    cache.map_for(InstanceId{0});
    cache.map_for(InstanceId{1});
    cache.map_for(InstanceId{0});
    cache.map_for(InstanceId{2});
    EXPECT_EQ(cache.cached(), 2u);
    auto m0 = cache.map_for(InstanceId{0});
    EXPECT_EQ(m0->target(), InstanceId{0});
}

TEST(HopCache, ConcurrentReadersAgree) {
    auto rg = random_graph(60, 0.08, 9);
    auto dist = floyd_warshall(rg.adj);
    HopCache cache(rg.graph, 2, 8);
    std::vector<std::jthread> workers;
    std::atomic<int> mismatches{0};
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            for (int rep = 0; rep < 200; ++rep) {
                const std::size_t t = (rep * 7 + w) % 60, s = (rep * 13 + w * 3) % 60;
                const HopCount want = dist[s][t] <= 2 ? dist[s][t] : kUnreachable;
                if (cache.hop(vid(rg.graph, s), vid(rg.graph, t)) != want)
                    ++mismatches;
            }
        });
    workers.clear();
    EXPECT_EQ(mismatches.load(), 0);
    EXPECT_LE(cache.cached(), 8u);
}
