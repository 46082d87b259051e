#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "misnet/centrality.hpp"
#include "misnet/graph.hpp"

namespace misnet {

struct CurvePoint {
    std::size_t n_removed = 0;
    double frac_retweets = 1.0;      // remaining claim retweets / original
    // Distinct claim links still carried / original; empty when the network
    // has no link table.
    std::optional<double> frac_unique_links = 1.0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct DisconnectionCurve {
    std::string strategy;
    std::vector<CurvePoint> points;
};

/// 0, 1, ..., dense_prefix, then roughly `per_decade` log-spaced steps per
/// decade up to and including max_removed.
std::vector<std::size_t> removal_grid(std::size_t max_removed, std::size_t dense_prefix = 100,
                                      std::size_t per_decade = 20);

/// Disconnects nodes in `ranking` order (all edges to and from each node
/// are removed) and records both remaining fractions at every grid step.
/// Only claim retweets (w_c) and claim-labeled links are counted.
/// Throws std::invalid_argument for unknown or repeated nodes in the
/// ranking, or a network without claim retweets.
DisconnectionCurve disconnection_curve(const DiffusionNetwork& network, std::span<const NodeId> ranking,
                                       std::span<const std::size_t> grid, std::string strategy = {});

/// Same, with node ids given by name and the default grid up to max_removed
/// (clipped to the ranking length).
DisconnectionCurve disconnection_curve(const DiffusionNetwork& network, const std::vector<std::string>& ranking,
                                       std::size_t max_removed, std::string strategy = {});

struct StrategyComparison {
    std::map<Metric, DisconnectionCurve> curves;
    // Per grid step: the strategy with the lowest value of each fraction
    // (first in s_in, s_out, pagerank, betweenness order on ties).
    std::vector<std::size_t> grid;
    std::vector<Metric> best_retweets;
    std::vector<Metric> best_links;
};

/// Ranks once on the intact network and evaluates every strategy in
/// parallel on the same grid.
StrategyComparison compare_strategies(const DiffusionNetwork& network, std::span<const Metric> strategies,
                                      std::size_t max_removed, const PageRankOptions& options = {});

StrategyComparison compare_strategies(const DiffusionNetwork& network, const CentralityTable& table,
                                      std::span<const Metric> strategies, std::size_t max_removed,
                                      unsigned threads = 1);

}  // namespace misnet
