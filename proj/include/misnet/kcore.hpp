#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "misnet/graph.hpp"

namespace misnet {

/// Shell number of every node and the largest one.
struct ShellIndex {
    std::vector<std::uint32_t> shell;  // indexed by NodeId
    std::uint32_t k_max = 0;

    std::size_t core_size(std::uint32_t k) const;
    std::vector<NodeId> core_nodes(std::uint32_t k) const;   // shell >= k, ascending
    std::vector<NodeId> shell_nodes(std::uint32_t k) const;  // shell == k, ascending
};

/// Bucket-queue peeling in O(|V| + |E|). Node v's shell is the largest k
/// such that v belongs to the k-core.
ShellIndex decompose(const UndirectedGraph& graph);

/// decompose(undirected_projection(network)).
ShellIndex decompose(const DiffusionNetwork& network);

/// Induced subnetwork on {v : shell(v) >= k}. Throws std::invalid_argument
/// when k > k_max or the index does not belong to this network.
DiffusionNetwork core_subgraph(const DiffusionNetwork& network, const ShellIndex& shells, std::uint32_t k);

/// (k_max, core at k_max). Throws std::invalid_argument on an empty network.
std::pair<std::uint32_t, DiffusionNetwork> main_core(const DiffusionNetwork& network);

}  // namespace misnet
