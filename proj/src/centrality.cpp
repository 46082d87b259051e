#include "misnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "misnet/errors.hpp"
#include "misnet/metrics.hpp"
#include "misnet/parallel.hpp"
#include "misnet/stats.hpp"

namespace misnet {

std::vector<double> pagerank(const DiffusionNetwork& network, const PageRankOptions& options) {
    const std::size_t n = network.node_count();
    if (n == 0) throw std::invalid_argument("pagerank of an empty network");
    if (!(options.damping > 0.0 && options.damping < 1.0)) {
        throw std::invalid_argument("damping must lie in (0, 1)");
    }
    const double d = options.damping;
    const double inv_n = 1.0 / static_cast<double>(n);

    // Walk along src -> dst, or dst -> src when reversed.
    const auto from = [&](const Edge& e) { return options.reverse ? e.dst : e.src; };
    const auto incoming = [&](NodeId v) { return options.reverse ? network.out_edges(v) : network.in_edges(v); };

    std::vector<double> out_weight(n, 0.0);
    for (const auto& e : network.edges()) out_weight[from(e)] += static_cast<double>(e.weights.total());

    std::vector<double> rank(n, inv_n), next(n, 0.0);
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            if (out_weight[v] == 0.0) dangling += rank[v];
        }
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        parallel_chunks(n, options.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t v = begin; v < end; ++v) {
                double sum = 0.0;
                for (EdgeIndex ei : incoming(static_cast<NodeId>(v))) {
                    const Edge& e = network.edge(ei);
                    const NodeId u = from(e);
                    sum += rank[u] * static_cast<double>(e.weights.total()) / out_weight[u];
                }
                next[v] = base + d * sum;
            }
        });
        double residual = 0.0;
        double total = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            residual += std::abs(next[v] - rank[v]);
            total += next[v];
        }
        for (auto& x : next) x /= total;
        rank.swap(next);
        if (residual < options.tolerance) return rank;
        if (iter == options.max_iter) throw ConvergenceError(iter, residual);
    }
    throw ConvergenceError(options.max_iter, std::nan(""));
}

namespace {

// Sources per accumulation chunk is fixed so the floating-point merge order
// is independent of the worker count.
constexpr std::size_t kBetweennessChunks = 64;

void accumulate_from_source(const DiffusionNetwork& network, NodeId s, std::vector<double>& out,
                            std::vector<std::int64_t>& dist, std::vector<double>& sigma, std::vector<double>& delta,
                            std::vector<NodeId>& stack, std::vector<NodeId>& queue) {
    const std::size_t n = network.node_count();
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    stack.clear();
    queue.clear();
    (void)n;

    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId v = queue[head];
        stack.push_back(v);
        for (EdgeIndex ei : network.out_edges(v)) {
            const NodeId w = network.edge(ei).dst;
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
    }
    // Predecessors of w are the in-neighbours one level closer to s.
    while (!stack.empty()) {
        const NodeId w = stack.back();
        stack.pop_back();
        for (EdgeIndex ei : network.in_edges(w)) {
            const NodeId v = network.edge(ei).src;
            if (dist[v] >= 0 && dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if (w != s) out[w] += delta[w];
    }
}

}  // namespace

std::vector<double> betweenness(const DiffusionNetwork& network, unsigned threads) {
    const std::size_t n = network.node_count();
    const std::size_t chunks = std::min(kBetweennessChunks, std::max<std::size_t>(n, 1));
    std::vector<std::vector<double>> partial(chunks);
    parallel_tasks(chunks, threads, [&](std::size_t c) {
        std::vector<double> acc(n, 0.0);
        std::vector<std::int64_t> dist(n);
        std::vector<double> sigma(n), delta(n);
        std::vector<NodeId> stack, queue;
        stack.reserve(n);
        queue.reserve(n);
        for (std::size_t s = n * c / chunks; s < n * (c + 1) / chunks; ++s) {
            accumulate_from_source(network, static_cast<NodeId>(s), acc, dist, sigma, delta, stack, queue);
        }
        partial[c] = std::move(acc);
    });
    std::vector<double> result(n, 0.0);
    for (const auto& acc : partial) {
        for (std::size_t v = 0; v < acc.size(); ++v) result[v] += acc[v];
    }
    return result;
}

std::string_view to_string(Metric metric) noexcept {
    switch (metric) {
        case Metric::s_in: return "s_in";
        case Metric::s_out: return "s_out";
        case Metric::pagerank: return "pagerank";
        case Metric::betweenness: return "betweenness";
    }
    return "?";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
    for (Metric m : kAllMetrics) {
        if (to_string(m) == text) return m;
    }
    if (text == "pr") return Metric::pagerank;
    if (text == "bt") return Metric::betweenness;
    return std::nullopt;
}

std::vector<std::uint32_t> rank_by_score(std::span<const double> scores, const std::vector<std::string>& names) {
    if (scores.size() != names.size()) throw std::invalid_argument("score and name counts differ");
    std::vector<NodeId> order(scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return names[a] < names[b];
    });
    std::vector<std::uint32_t> rank(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::uint32_t>(i + 1);
    return rank;
}

std::vector<NodeId> CentralityTable::ordering(Metric m) const {
    const auto& r = rank(m);
    std::vector<NodeId> order(r.size());
    for (NodeId v = 0; v < r.size(); ++v) order[r[v] - 1] = v;
    return order;
}

std::vector<NodeId> CentralityTable::top(Metric m, std::size_t n, std::span<const NodeId> members) const {
    std::vector<NodeId> out;
    if (members.empty()) {
        out = ordering(m);
    } else {
        out.assign(members.begin(), members.end());
        const auto& r = rank(m);
        std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) { return r.at(a) < r.at(b); });
    }
    if (out.size() > n) out.resize(n);
    return out;
}

CentralityTable rank_table(const DiffusionNetwork& network, const PageRankOptions& options) {
    CentralityTable table;
    table.nodes = network.node_names();
    const std::size_t n = network.node_count();
    auto& s_in = table.scores[static_cast<std::size_t>(Metric::s_in)];
    auto& s_out = table.scores[static_cast<std::size_t>(Metric::s_out)];
    s_in.resize(n);
    s_out.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        const StrengthVector s = strengths(network, v);
        s_in[v] = static_cast<double>(s.s_in);
        s_out[v] = static_cast<double>(s.s_out);
    }
    if (n > 0) {
        table.scores[static_cast<std::size_t>(Metric::pagerank)] = pagerank(network, options);
    }
    table.scores[static_cast<std::size_t>(Metric::betweenness)] = betweenness(network, options.threads);
    for (Metric m : kAllMetrics) {
        table.ranks[static_cast<std::size_t>(m)] = rank_by_score(table.score(m), table.nodes);
    }
    return table;
}

std::vector<RankSummary> core_rank_summary(const CentralityTable& table, std::span<const NodeId> core_nodes) {
    if (core_nodes.empty()) throw std::invalid_argument("core rank summary of an empty core");
    std::vector<RankSummary> out;
    for (Metric m : kAllMetrics) {
        const auto& r = table.rank(m);
        std::vector<double> values;
        values.reserve(core_nodes.size());
        for (NodeId v : core_nodes) {
            if (v >= r.size()) throw std::invalid_argument("core node outside the centrality table");
            values.push_back(static_cast<double>(r[v]));
        }
        const auto me = mean_and_stderr(values);
        out.push_back({m, me.mean, me.stderr_, me.n});
    }
    return out;
}

}  // namespace misnet
