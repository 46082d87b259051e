#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "misnet/errors.hpp"
#include "misnet/graph.hpp"
#include "support/test_support.hpp"

namespace misnet {
namespace {

using testing::event;

TEST(EdgeLabel, Majority) {
    Rng rng(1);
    EXPECT_EQ(edge_label({5, 1}, rng), Label::claim);
    EXPECT_EQ(edge_label({0, 3}, rng), Label::factcheck);
    EXPECT_THROW(edge_label({0, 0}, rng), std::invalid_argument);
}

TEST(EdgeLabel, TieIsReproducibleAndUsesBothOutcomes) {
    int claims = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng a(seed), b(seed);
        const Label la = edge_label({2, 2}, a);
        EXPECT_EQ(la, edge_label({2, 2}, b));
        claims += la == Label::claim;
    }
    EXPECT_GT(claims, 60);
    EXPECT_LT(claims, 140);
}

TEST(EdgeLabel, KeyedTieIgnoresEndpointOrder) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_EQ(keyed_edge_label({1, 1}, seed, "x", "y"), keyed_edge_label({1, 1}, seed, "y", "x"));
    }
}

TEST(BuildNetwork, CountsBothWeights) {
    const std::vector<RetweetEvent> events{
        event(1, "a", "b", Label::claim, "http://c.com/1"),
        event(2, "a", "b", Label::claim, "http://c.com/1"),
        event(3, "a", "b", Label::factcheck, "http://f.com/1"),
    };
    const BuildResult r = build_network(events, 0);
    ASSERT_EQ(r.network.edge_count(), 1u);
    const Edge& e = r.network.edge(0);
    EXPECT_EQ(r.network.node_name(e.src), "a");
    EXPECT_EQ(r.network.node_name(e.dst), "b");
    EXPECT_EQ(e.weights, (EdgeWeights{2, 1}));
    EXPECT_EQ(e.weights.total(), 3u);
    EXPECT_EQ(e.label, Label::claim);
    ASSERT_EQ(e.links.size(), 2u);
    EXPECT_EQ(e.links[0].count + e.links[1].count, 3u);
    EXPECT_EQ(r.report.mixed_edges, 1u);
    EXPECT_EQ(r.report.total, (EdgeWeights{2, 1}));
}

TEST(BuildNetwork, SelfLoopsSkippedAndCounted) {
    const BuildResult r = build_network({event(1, "a", "a"), event(2, "a", "b")}, 0);
    EXPECT_EQ(r.report.self_loops_skipped, 1u);
    EXPECT_EQ(r.network.edge_count(), 1u);
    EXPECT_EQ(r.report.events, 2u);
}

TEST(BuildNetwork, EmptyInput) {
    const BuildResult r = build_network({}, 0);
    EXPECT_TRUE(r.network.empty());
    EXPECT_EQ(r.network.edge_count(), 0u);
}

TEST(BuildNetwork, EventOrderDoesNotMatter) {
    std::mt19937_64 rng(3);
    auto events = testing::random_events(rng, 60, 800, 0.4, 8);
    const BuildResult a = build_network(events, 9);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(events.begin(), events.end(), rng);
        const BuildResult b = build_network(events, 9);
        EXPECT_TRUE(a.network == b.network);
        EXPECT_EQ(a.report.tied_edges, b.report.tied_edges);
    }
}

TEST(BuildNetwork, EachEventIncrementsOneWeight) {
    std::mt19937_64 rng(5);
    const auto events = testing::random_events(rng, 40, 500);
    const BuildResult r = build_network(events, 1);
    std::uint64_t self = 0;
    for (const auto& e : events) self += e.retweeted == e.retweeter;
    EXPECT_EQ(r.report.total.total() + self, events.size());
    for (const Edge& e : r.network.edges()) {
        std::uint64_t sum = 0;
        for (const auto& lc : e.links) sum += lc.count;
        EXPECT_EQ(sum, e.weights.total());
    }
}

TEST(BuildNetwork, LinkWithTwoLabelsIsRejected) {
    EXPECT_THROW(build_network({event(1, "a", "b", Label::claim, "http://x.com/"),
                                event(2, "a", "c", Label::factcheck, "http://x.com/")},
                               0),
                 std::invalid_argument);
}

TEST(DiffusionNetwork, ValidatesConstruction) {
    Edge loop;
    loop.src = loop.dst = 0;
    loop.weights.claim = 1;
    EXPECT_THROW(DiffusionNetwork({"a"}, nullptr, {loop}), std::invalid_argument);
    Edge e;
    e.src = 0;
    e.dst = 1;
    EXPECT_THROW(DiffusionNetwork({"a", "b"}, nullptr, {e}), std::invalid_argument);
    e.weights.claim = 1;
    EXPECT_THROW(DiffusionNetwork({"a", "b"}, nullptr, {e, e}), std::invalid_argument);
    EXPECT_THROW(DiffusionNetwork({"a", "a"}, nullptr, {}), std::invalid_argument);
    EXPECT_NO_THROW(DiffusionNetwork({"a", "b"}, nullptr, {e}));
}

TEST(DiffusionNetwork, Incidence) {
    const auto net = testing::network_from_pairs({{"a", "b"}, {"a", "c"}, {"c", "a"}});
    const NodeId a = *net.find_node("a");
    EXPECT_EQ(net.out_edges(a).size(), 2u);
    EXPECT_EQ(net.in_edges(a).size(), 1u);
    EXPECT_NE(net.find_edge(a, *net.find_node("c")), nullptr);
    EXPECT_EQ(net.find_edge(*net.find_node("b"), a), nullptr);
    EXPECT_FALSE(net.find_node("zed"));
}

TEST(FilterByLabel, Examples) {
    const auto claims = testing::network_from_pairs({{"a", "b"}, {"b", "c"}});
    const FilterResult same = filter_by_label(claims, Label::claim);
    EXPECT_TRUE(same.network == claims);
    EXPECT_EQ(same.edges_removed, 0u);

    const auto fc = build_network({event(1, "a", "b", Label::factcheck)}, 0).network;
    const FilterResult empty = filter_by_label(fc, Label::claim);
    EXPECT_TRUE(empty.network.empty());
    EXPECT_EQ(empty.edges_removed, 1u);
}

TEST(FilterByLabel, MixedNetworkKeepsMajorityEdges) {
    const auto net = build_network({event(1, "a", "b", Label::claim), event(2, "a", "b", Label::claim),
                                    event(3, "a", "b", Label::factcheck), event(4, "c", "d", Label::factcheck)},
                                   0)
                         .network;
    const FilterResult r = filter_by_label(net, Label::claim);
    EXPECT_EQ(r.network.node_count(), 2u);
    EXPECT_EQ(r.edges_removed, 1u);
    // Kept edges retain both weights.
    EXPECT_EQ(r.network.edge(0).weights, (EdgeWeights{2, 1}));
}

TEST(Projection, CollapsesReciprocalEdges) {
    const auto net = testing::network_from_pairs({{"a", "b"}, {"b", "a"}});
    const UndirectedGraph g = undirected_projection(net);
    EXPECT_EQ(g.edge_count, 1u);
    EXPECT_TRUE(g.has_edge(0, 1));
}

TEST(Projection, StarDegree) {
    const auto net = testing::network_from_pairs({{"a", "b"}, {"a", "c"}, {"a", "d"}});
    const UndirectedGraph g = undirected_projection(net);
    EXPECT_EQ(g.degree(*net.find_node("a")), 3u);
    EXPECT_EQ(undirected_projection(DiffusionNetwork{}).node_count(), 0u);
}

TEST(UndirectedGraph, FromEdgesCollapsesAndValidates) {
    const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 0}, {1, 2}};
    const auto g = UndirectedGraph::from_edges(3, edges);
    EXPECT_EQ(g.edge_count, 2u);
    EXPECT_EQ(g.edge_list(), (std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}}));
    const std::vector<std::pair<NodeId, NodeId>> loop{{1, 1}};
    EXPECT_THROW(UndirectedGraph::from_edges(3, loop), std::invalid_argument);
    const std::vector<std::pair<NodeId, NodeId>> out_of_range{{0, 3}};
    EXPECT_THROW(UndirectedGraph::from_edges(3, out_of_range), std::invalid_argument);
}

TEST(Serialization, RoundTripWithLinks) {
    std::mt19937_64 rng(11);
    const auto net = build_network(testing::random_events(rng, 50, 600, 0.3, 12), 4).network;
    std::stringstream edges, links;
    write_edge_list(edges, net);
    write_link_sidecar(links, net);
    const DiffusionNetwork back = read_network(edges, &links);
    EXPECT_TRUE(back == net);
}

TEST(Serialization, EdgeListOnly) {
    std::istringstream edges("src,dst,w_c,w_f,label\na,b,2,1,claim\nb,c,0,1,factcheck\n");
    const DiffusionNetwork net = read_network(edges, nullptr);
    EXPECT_EQ(net.node_count(), 3u);
    EXPECT_EQ(net.edge(0).weights, (EdgeWeights{2, 1}));
    EXPECT_TRUE(net.edge(0).links.empty());
}

TEST(Serialization, MalformedRowIsInputError) {
    std::istringstream edges("src,dst,w_c,w_f,label\na,b,two,1,claim\n");
    EXPECT_THROW(read_network(edges, nullptr), InputError);
}

}  // namespace
}  // namespace misnet
