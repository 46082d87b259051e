#include "misnet/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "misnet/parallel.hpp"

namespace misnet {

std::vector<std::size_t> removal_grid(std::size_t max_removed, std::size_t dense_prefix, std::size_t per_decade) {
    std::vector<std::size_t> grid;
    for (std::size_t i = 0; i <= std::min(max_removed, dense_prefix); ++i) grid.push_back(i);
    if (max_removed > dense_prefix && per_decade > 0) {
        const double factor = std::pow(10.0, 1.0 / static_cast<double>(per_decade));
        double x = static_cast<double>(std::max<std::size_t>(dense_prefix, 1));
        while (true) {
            x *= factor;
            const auto step = static_cast<std::size_t>(std::llround(x));
            if (step >= max_removed) break;
            if (step > grid.back()) grid.push_back(step);
        }
        grid.push_back(max_removed);
    }
    return grid;
}

DisconnectionCurve disconnection_curve(const DiffusionNetwork& network, std::span<const NodeId> ranking,
                                       std::span<const std::size_t> grid, std::string strategy) {
    const std::size_t n = network.node_count();
    std::vector<bool> removed(n, false);
    for (NodeId v : ranking) {
        if (v >= n) throw std::invalid_argument("ranking refers to an unknown node");
        if (removed[v]) throw std::invalid_argument("ranking repeats node '" + network.node_name(v) + "'");
        removed[v] = true;
    }
    std::fill(removed.begin(), removed.end(), false);

    // Carriers per claim link: how many surviving edges still hold it.
    std::vector<std::uint64_t> carriers(network.links().size(), 0);
    std::uint64_t total_retweets = 0;
    for (const auto& e : network.edges()) {
        total_retweets += e.weights.claim;
        for (const auto& lc : e.links) {
            if (network.links()[lc.link].label == Label::claim) ++carriers[lc.link];
        }
    }
    const auto total_links =
        static_cast<std::uint64_t>(std::count_if(carriers.begin(), carriers.end(), [](auto c) { return c > 0; }));
    if (total_retweets == 0) throw std::invalid_argument("network carries no claim retweets");

    std::vector<bool> edge_gone(network.edge_count(), false);
    std::uint64_t retweets = total_retweets;
    std::uint64_t links = total_links;
    const auto drop_edge = [&](EdgeIndex ei) {
        if (edge_gone[ei]) return;
        edge_gone[ei] = true;
        const Edge& e = network.edge(ei);
        retweets -= e.weights.claim;
        for (const auto& lc : e.links) {
            if (network.links()[lc.link].label == Label::claim && --carriers[lc.link] == 0) --links;
        }
    };
    const auto point = [&](std::size_t k) {
        CurvePoint p{k, static_cast<double>(retweets) / static_cast<double>(total_retweets), std::nullopt};
        if (total_links > 0) p.frac_unique_links = static_cast<double>(links) / static_cast<double>(total_links);
        return p;
    };

    DisconnectionCurve curve;
    curve.strategy = std::move(strategy);
    std::size_t done = 0;
    for (std::size_t target : grid) {
        if (target > ranking.size()) throw std::invalid_argument("grid step exceeds the ranking length");
        if (!curve.points.empty() && target <= curve.points.back().n_removed) {
            throw std::invalid_argument("grid must be strictly increasing");
        }
        for (; done < target; ++done) {
            const NodeId v = ranking[done];
            for (EdgeIndex ei : network.out_edges(v)) drop_edge(ei);
            for (EdgeIndex ei : network.in_edges(v)) drop_edge(ei);
        }
        curve.points.push_back(point(target));
    }
    return curve;
}

DisconnectionCurve disconnection_curve(const DiffusionNetwork& network, const std::vector<std::string>& ranking,
                                       std::size_t max_removed, std::string strategy) {
    std::vector<NodeId> ids;
    ids.reserve(ranking.size());
    for (const auto& name : ranking) {
        auto id = network.find_node(name);
        if (!id) throw std::invalid_argument("ranking refers to unknown node '" + name + "'");
        ids.push_back(*id);
    }
    const auto grid = removal_grid(std::min(max_removed, ids.size()));
    return disconnection_curve(network, ids, grid, std::move(strategy));
}

StrategyComparison compare_strategies(const DiffusionNetwork& network, const CentralityTable& table,
                                      std::span<const Metric> strategies, std::size_t max_removed,
                                      unsigned threads) {
    StrategyComparison cmp;
    cmp.grid = removal_grid(std::min(max_removed, network.node_count()));
    std::vector<DisconnectionCurve> curves(strategies.size());
    parallel_tasks(strategies.size(), threads, [&](std::size_t i) {
        const auto order = table.ordering(strategies[i]);
        curves[i] = disconnection_curve(network, order, cmp.grid, std::string(to_string(strategies[i])));
    });
    for (std::size_t i = 0; i < strategies.size(); ++i) cmp.curves[strategies[i]] = std::move(curves[i]);

    for (std::size_t step = 0; step < cmp.grid.size() && !cmp.curves.empty(); ++step) {
        // cmp.curves iterates in Metric order, which fixes the tie rule.
        const auto best = [&](auto field) {
            Metric arg = cmp.curves.begin()->first;
            double value = 2.0;
            for (const auto& [m, curve] : cmp.curves) {
                const double x = field(curve.points[step]);
                if (x < value) {
                    value = x;
                    arg = m;
                }
            }
            return arg;
        };
        cmp.best_retweets.push_back(best([](const CurvePoint& p) { return p.frac_retweets; }));
        cmp.best_links.push_back(best([](const CurvePoint& p) { return p.frac_unique_links.value_or(1.0); }));
    }
    return cmp;
}

StrategyComparison compare_strategies(const DiffusionNetwork& network, std::span<const Metric> strategies,
                                      std::size_t max_removed, const PageRankOptions& options) {
    const CentralityTable table = rank_table(network, options);
    return compare_strategies(network, table, strategies, max_removed, options.threads);
}

}  // namespace misnet
