#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "misnet/graph.hpp"

namespace misnet {

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10;  // on the L1 change between iterations
    int max_iter = 200;
    bool reverse = false;  // walk against the information flow
    unsigned threads = 1;
};

/// Weighted power iteration; transition probabilities are proportional to
/// edge weight and dangling mass is spread uniformly. Scores sum to 1.
/// Throws std::invalid_argument on an empty network or damping outside
/// (0,1), ConvergenceError when max_iter is exhausted.
std::vector<double> pagerank(const DiffusionNetwork& network, const PageRankOptions& options = {});

/// Raw shortest-path betweenness on the directed, unweighted graph
/// (Brandes accumulation, endpoints excluded, no normalization).
/// The result does not depend on `threads`.
std::vector<double> betweenness(const DiffusionNetwork& network, unsigned threads = 1);

enum class Metric : std::uint8_t { s_in, s_out, pagerank, betweenness };

inline constexpr std::array<Metric, 4> kAllMetrics{Metric::s_in, Metric::s_out, Metric::pagerank,
                                                   Metric::betweenness};

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view text) noexcept;

/// 1-based ranks by descending score, ties broken by ascending node id string.
std::vector<std::uint32_t> rank_by_score(std::span<const double> scores, const std::vector<std::string>& names);

struct CentralityTable {
    std::vector<std::string> nodes;
    std::array<std::vector<double>, 4> scores;          // indexed by Metric
    std::array<std::vector<std::uint32_t>, 4> ranks;    // indexed by Metric

    const std::vector<double>& score(Metric m) const { return scores[static_cast<std::size_t>(m)]; }
    const std::vector<std::uint32_t>& rank(Metric m) const { return ranks[static_cast<std::size_t>(m)]; }

    /// Node ids ordered from rank 1 downward.
    std::vector<NodeId> ordering(Metric m) const;

    /// The n best-ranked nodes, optionally restricted to `members`.
    std::vector<NodeId> top(Metric m, std::size_t n, std::span<const NodeId> members = {}) const;
};

CentralityTable rank_table(const DiffusionNetwork& network, const PageRankOptions& options = {});

struct RankSummary {
    Metric metric = Metric::s_in;
    double mean_rank = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

/// Mean rank of `core_nodes` under each metric. Throws std::invalid_argument
/// on an empty core or unknown node ids.
std::vector<RankSummary> core_rank_summary(const CentralityTable& table, std::span<const NodeId> core_nodes);

}  // namespace misnet
