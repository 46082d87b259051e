#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "misnet/kcore.hpp"
#include "misnet/temporal.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

namespace misnet {
namespace {

using testing::event;
constexpr Timestamp kDay = 86400;

std::vector<std::size_t> degrees(const UndirectedGraph& g) {
    std::vector<std::size_t> d;
    for (NodeId v = 0; v < g.node_count(); ++v) d.push_back(g.degree(v));
    return d;
}

bool is_simple(const UndirectedGraph& g) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& adj = g.adjacency[v];
        if (!std::is_sorted(adj.begin(), adj.end())) return false;
        if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) return false;
        if (std::binary_search(adj.begin(), adj.end(), v)) return false;
        for (NodeId u : adj) {
            if (!g.has_edge(u, v)) return false;
        }
    }
    return true;
}

TEST(Snapshots, OneEventPerDay) {
    std::vector<RetweetEvent> events;
    for (int i = 0; i < 10; ++i) events.push_back(event(i * kDay, "a" + std::to_string(i), "b"));
    const auto snaps = cumulative_snapshots(events, kDay, 0);
    ASSERT_EQ(snaps.size(), 10u);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        EXPECT_EQ(snaps[i].events, i + 1);
        EXPECT_EQ(snaps[i].network.edge_count(), i + 1);
    }
}

TEST(Snapshots, StepLargerThanSpan) {
    std::mt19937_64 rng(1);
    const auto events = testing::random_events(rng, 30, 200);
    const auto snaps = cumulative_snapshots(events, 1000 * kDay, 3);
    ASSERT_EQ(snaps.size(), 1u);
    EXPECT_TRUE(snaps[0].network == build_network(events, 3).network);
}

TEST(Snapshots, Errors) {
    EXPECT_THROW(snapshot_cutoffs({event(5, "a", "b"), event(1, "a", "c")}, kDay), std::invalid_argument);
    EXPECT_THROW(snapshot_cutoffs({event(5, "a", "b")}, 0), std::invalid_argument);
    EXPECT_TRUE(snapshot_cutoffs({}, kDay).empty());
}

TEST(Trajectory, ConstantNetworkIsFlat) {
    // All events on the first day; later snapshots repeat the same network.
    std::vector<RetweetEvent> events{event(0, "a", "b"), event(1, "b", "c"), event(2, "c", "a"),
                                     event(9 * kDay, "a", "b")};
    const auto traj = core_trajectory(cumulative_snapshots(events, kDay, 0), 3 * kDay);
    for (const auto& p : traj.points) {
        EXPECT_EQ(p.k_max, 2u);
        EXPECT_EQ(p.core_size, 3u);
        EXPECT_DOUBLE_EQ(p.smoothed_k_max, 2.0);
    }
}

TEST(Trajectory, GrowingClique) {
    std::vector<RetweetEvent> events;
    const int n = 12;
    for (int v = 1; v < n; ++v) {
        for (int u = 0; u < v; ++u) events.push_back(event(v * kDay, testing::node_name(u), testing::node_name(v)));
    }
    const auto traj = core_trajectory(cumulative_snapshots(events, kDay, 0), kDay);
    ASSERT_EQ(traj.points.size(), static_cast<std::size_t>(n - 1));
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        EXPECT_EQ(traj.points[i].k_max, i + 1);
        EXPECT_EQ(traj.points[i].core_size, i + 2);
    }
}

TEST(Trajectory, SmoothingWindow) {
    std::vector<TrajectoryPoint> pts(4);
    for (int i = 0; i < 4; ++i) {
        pts[i].time = i * 10;
        pts[i].k_max = static_cast<std::uint32_t>(i * 2);
        pts[i].core_size = 1;
    }
    smooth_trajectory(pts, 20);
    EXPECT_DOUBLE_EQ(pts[0].smoothed_k_max, 0.0);
    EXPECT_DOUBLE_EQ(pts[1].smoothed_k_max, 1.0);
    EXPECT_DOUBLE_EQ(pts[3].smoothed_k_max, 5.0);
    EXPECT_THROW(core_trajectory(cumulative_snapshots({event(0, "a", "b"), event(kDay, "b", "c")}, kDay, 0), 60),
                 std::invalid_argument);
}

TEST(Trajectory, KmaxNeverDecreasesOnCumulativeSnapshots) {
    std::mt19937_64 rng(77);
    const auto events = testing::random_events(rng, 150, 3000);
    const auto traj = core_trajectory(cumulative_snapshots(events, kDay, 1), 7 * kDay, 2);
    for (std::size_t i = 1; i < traj.points.size(); ++i) {
        EXPECT_GE(traj.points[i].k_max, traj.points[i - 1].k_max);
    }
}

TEST(Shuffle, PreservesDegreesAndSimplicity) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 10 + gen() % 50;
        const auto g = UndirectedGraph::from_edges(n, testing::random_undirected_edges(gen, n, 0.15));
        Rng rng(trial);
        std::size_t accepted = 0;
        const auto h = configuration_shuffle(g, rng, 10.0, &accepted);
        EXPECT_EQ(degrees(h), degrees(g));
        EXPECT_EQ(h.edge_count, g.edge_count);
        EXPECT_TRUE(is_simple(h));
        if (g.edge_count > 10) EXPECT_GT(accepted, 0u);
    }
}

TEST(Shuffle, FourCycleStaysAFourCycle) {
    const std::vector<std::pair<NodeId, NodeId>> c4{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const auto g = UndirectedGraph::from_edges(4, c4);
    const auto realizations = oracle::graphs_with_degrees({2, 2, 2, 2});
    ASSERT_EQ(realizations.size(), 3u);  // the three labeled 4-cycles
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto h = configuration_shuffle(g, rng);
        EXPECT_NE(std::find(realizations.begin(), realizations.end(), h.edge_list()), realizations.end());
    }
}

TEST(Shuffle, StarIsUnchanged) {
    const std::vector<std::pair<NodeId, NodeId>> star{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    const auto g = UndirectedGraph::from_edges(6, star);
    Rng rng(1);
    std::size_t accepted = 99;
    EXPECT_EQ(configuration_shuffle(g, rng, 10.0, &accepted), g);
    EXPECT_EQ(accepted, 0u);
}

TEST(NullBand, CliqueIsDegenerate) {
    std::vector<std::pair<NodeId, NodeId>> k6;
    for (NodeId a = 0; a < 6; ++a) {
        for (NodeId b = a + 1; b < 6; ++b) k6.emplace_back(a, b);
    }
    NullBandOptions opt;
    opt.n_samples = 10;
    const NullBand band = null_kmax_band(UndirectedGraph::from_edges(6, k6), opt, 1);
    EXPECT_EQ(band.mean, 5.0);
    EXPECT_EQ(band.lower, 5.0);
    EXPECT_EQ(band.upper, 5.0);
}

TEST(NullBand, TwoSamplesSpanBothValues) {
    EXPECT_EQ(empirical_quantile({3.0, 7.0}, 0.025), 3.0);
    EXPECT_EQ(empirical_quantile({3.0, 7.0}, 0.975), 7.0);
    EXPECT_EQ(empirical_quantile({5.0, 1.0, 3.0, 2.0, 4.0}, 0.5), 3.0);
    std::mt19937_64 gen(12);
    const auto g = UndirectedGraph::from_edges(60, testing::random_undirected_edges(gen, 60, 0.1));
    NullBandOptions opt;
    opt.n_samples = 2;
    const NullBand band = null_kmax_band(g, opt, 4);
    ASSERT_EQ(band.samples.size(), 2u);
    EXPECT_EQ(band.lower, std::min(band.samples[0], band.samples[1]));
    EXPECT_EQ(band.upper, std::max(band.samples[0], band.samples[1]));
    opt.n_samples = 1;
    EXPECT_THROW(null_kmax_band(g, opt, 4), std::invalid_argument);
}

TEST(NullBand, IndependentOfThreads) {
    std::mt19937_64 gen(13);
    const auto g = UndirectedGraph::from_edges(80, testing::random_undirected_edges(gen, 80, 0.08));
    NullBandOptions opt;
    opt.n_samples = 12;
    opt.threads = 1;
    const NullBand a = null_kmax_band(g, opt, 99);
    opt.threads = 4;
    const NullBand b = null_kmax_band(g, opt, 99);
    EXPECT_EQ(a.samples, b.samples);
}

TEST(Churn, Examples) {
    const NodeSet abc{"a", "b", "c"}, bcd{"b", "c", "d"}, xyz{"x", "y", "z"};
    const auto pts = churn_rate({abc, abc, bcd, xyz, {}, {}});
    ASSERT_EQ(pts.size(), 5u);
    EXPECT_EQ(pts[0].jaccard, 0.0);
    EXPECT_EQ(pts[1].jaccard, 0.5);
    EXPECT_DOUBLE_EQ(*pts[1].relative, 1.0 / 3.0);
    EXPECT_EQ(pts[2].jaccard, 1.0);
    EXPECT_EQ(pts[3].jaccard, 1.0);
    EXPECT_FALSE(pts[4].jaccard);
    EXPECT_FALSE(pts[4].relative);
    EXPECT_THROW(churn_rate({abc}), std::invalid_argument);
}

TEST(StableCore, Intersection) {
    const NodeSet abc{"a", "b", "c"}, bcd{"b", "c", "d"};
    EXPECT_EQ(stable_core({abc}), abc);
    EXPECT_EQ(stable_core({abc, bcd}), (NodeSet{"b", "c"}));
    EXPECT_THROW(stable_core({}), std::invalid_argument);
}

TEST(StableCore, SubsetOfEveryMonthlyCore) {
    std::mt19937_64 rng(19);
    auto events = testing::random_events(rng, 120, 4000);
    // Stretch over several months.
    for (std::size_t i = 0; i < events.size(); ++i) events[i].timestamp = 1'462'000'000 + static_cast<Timestamp>(i) * 3000;
    const auto monthly = monthly_main_cores(events, 0);
    ASSERT_GE(monthly.size(), 3u);
    std::vector<NodeSet> cores;
    for (const auto& [t, core] : monthly) cores.push_back(core);
    const NodeSet stable = stable_core(cores);
    for (const auto& core : cores) EXPECT_TRUE(std::includes(core.begin(), core.end(), stable.begin(), stable.end()));
    EXPECT_EQ(cores.back(), main_core_members(build_network(events, 0).network));
}

}  // namespace
}  // namespace misnet
