#include "misnet/kcore.hpp"

#include <algorithm>
#include <stdexcept>

namespace misnet {

std::size_t ShellIndex::core_size(std::uint32_t k) const {
    return static_cast<std::size_t>(std::count_if(shell.begin(), shell.end(), [k](std::uint32_t s) { return s >= k; }));
}

std::vector<NodeId> ShellIndex::core_nodes(std::uint32_t k) const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < shell.size(); ++v) {
        if (shell[v] >= k) out.push_back(v);
    }
    return out;
}

std::vector<NodeId> ShellIndex::shell_nodes(std::uint32_t k) const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < shell.size(); ++v) {
        if (shell[v] == k) out.push_back(v);
    }
    return out;
}

ShellIndex decompose(const UndirectedGraph& graph) {
    // Batagelj-Zaversnik: nodes kept sorted by current degree in `order`,
    // with bucket_start[d] the first position holding degree d.
    const std::size_t n = graph.node_count();
    ShellIndex result;
    result.shell.assign(n, 0);
    if (n == 0) return result;

    std::vector<std::uint32_t> degree(n);
    std::uint32_t max_degree = 0;
    for (NodeId v = 0; v < n; ++v) {
        degree[v] = static_cast<std::uint32_t>(graph.degree(v));
        max_degree = std::max(max_degree, degree[v]);
    }
    std::vector<std::size_t> bucket_start(max_degree + 2, 0);
    for (auto d : degree) ++bucket_start[d + 1];
    for (std::size_t d = 1; d < bucket_start.size(); ++d) bucket_start[d] += bucket_start[d - 1];

    std::vector<NodeId> order(n);
    std::vector<std::size_t> position(n);
    {
        std::vector<std::size_t> cursor(bucket_start.begin(), bucket_start.end() - 1);
        for (NodeId v = 0; v < n; ++v) {
            position[v] = cursor[degree[v]]++;
            order[position[v]] = v;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = order[i];
        for (NodeId u : graph.adjacency[v]) {
            if (degree[u] > degree[v]) {
                // Move u to the front of its bucket, then shrink its degree.
                const std::uint32_t du = degree[u];
                const std::size_t pu = position[u];
                const std::size_t pw = bucket_start[du];
                const NodeId w = order[pw];
                if (u != w) {
                    std::swap(order[pu], order[pw]);
                    position[u] = pw;
                    position[w] = pu;
                }
                ++bucket_start[du];
                --degree[u];
            }
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        result.shell[v] = degree[v];
        result.k_max = std::max(result.k_max, degree[v]);
    }
    return result;
}

ShellIndex decompose(const DiffusionNetwork& network) { return decompose(undirected_projection(network)); }

DiffusionNetwork core_subgraph(const DiffusionNetwork& network, const ShellIndex& shells, std::uint32_t k) {
    if (shells.shell.size() != network.node_count()) {
        throw std::invalid_argument("shell index does not match the network");
    }
    if (k > shells.k_max) {
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds k_max = " + std::to_string(shells.k_max));
    }
    std::vector<bool> keep(network.node_count());
    for (NodeId v = 0; v < network.node_count(); ++v) keep[v] = shells.shell[v] >= k;
    return network.induced(keep);
}

std::pair<std::uint32_t, DiffusionNetwork> main_core(const DiffusionNetwork& network) {
    if (network.empty()) throw std::invalid_argument("main core of an empty network");
    const ShellIndex shells = decompose(network);
    return {shells.k_max, core_subgraph(network, shells, shells.k_max)};
}

}  // namespace misnet
