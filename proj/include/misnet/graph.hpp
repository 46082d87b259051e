#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "misnet/ingest.hpp"
#include "misnet/random.hpp"

namespace misnet {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint32_t;
using LinkId = std::uint32_t;

struct EdgeWeights {
    std::uint64_t claim = 0;
    std::uint64_t factcheck = 0;

    std::uint64_t total() const noexcept { return claim + factcheck; }
    std::uint64_t of(Label label) const noexcept { return label == Label::claim ? claim : factcheck; }

    friend bool operator==(const EdgeWeights&, const EdgeWeights&) = default;
};

/// Majority label; ties are a fair coin drawn from `tie_rng`.
/// Throws std::invalid_argument for a zero-weight edge.
Label edge_label(const EdgeWeights& weights, Rng& tie_rng);

/// edge_label with the tie generator keyed by the sorted endpoint pair, so
/// the result does not depend on event order.
Label keyed_edge_label(const EdgeWeights& weights, std::uint64_t tie_seed, std::string_view src,
                       std::string_view dst);

struct Link {
    std::string url;
    Label label = Label::claim;

    friend bool operator==(const Link&, const Link&) = default;
};

struct LinkCount {
    LinkId link = 0;
    std::uint64_t count = 0;

    friend bool operator==(const LinkCount&, const LinkCount&) = default;
};

/// Directed edge src -> dst: dst retweeted src (information flows src to dst).
struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    EdgeWeights weights;
    Label label = Label::claim;
    std::vector<LinkCount> links;  // sorted by link id; counts sum to weights.total()

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted, directed, labeled retweet network. Immutable once built.
///
/// Nodes carry opaque string ids and a dense index. Edges are stored sorted
/// by (src, dst) and indexed by position; per-node incidence lists refer to
/// those positions. The link table may be shared between a network and the
/// subnetworks derived from it.
class DiffusionNetwork {
public:
    DiffusionNetwork();

    /// Validates: unique node names, no self-loops or duplicate edges,
    /// nonzero weights, link counts either absent or summing to the weight.
    /// Throws std::invalid_argument.
    DiffusionNetwork(std::vector<std::string> nodes, std::shared_ptr<const std::vector<Link>> links,
                     std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return names_.empty(); }

    const std::string& node_name(NodeId v) const { return names_.at(v); }
    const std::vector<std::string>& node_names() const noexcept { return names_; }
    std::optional<NodeId> find_node(std::string_view name) const;

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
    std::span<const EdgeIndex> out_edges(NodeId v) const;
    std::span<const EdgeIndex> in_edges(NodeId v) const;
    const Edge* find_edge(NodeId src, NodeId dst) const;

    const std::vector<Link>& links() const noexcept { return *links_; }
    const std::shared_ptr<const std::vector<Link>>& shared_links() const noexcept { return links_; }

    EdgeWeights total_weights() const noexcept;

    /// Subnetwork on the nodes with keep[v] set, with every edge between
    /// kept nodes. Node order is preserved.
    DiffusionNetwork induced(const std::vector<bool>& keep) const;

    friend bool operator==(const DiffusionNetwork& a, const DiffusionNetwork& b);

private:
    std::vector<std::string> names_;
    std::vector<NodeId> by_name_;  // node ids sorted by name
    std::shared_ptr<const std::vector<Link>> links_;
    std::vector<Edge> edges_;
    std::vector<EdgeIndex> out_offsets_, out_list_;
    std::vector<EdgeIndex> in_offsets_, in_list_;
};

struct BuildReport {
    std::size_t events = 0;
    std::size_t self_loops_skipped = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t mixed_edges = 0;  // w_c * w_f > 0
    std::size_t tied_edges = 0;   // w_c == w_f, label drawn at random
    std::size_t factcheck_edges = 0;
    EdgeWeights total;

    double mixed_fraction() const noexcept {
        return edges ? static_cast<double>(mixed_edges) / static_cast<double>(edges) : 0.0;
    }
};

struct BuildResult {
    DiffusionNetwork network;
    BuildReport report;
};

/// Aggregates events into edges retweeted -> retweeter. Self-retweets are
/// counted in the report and skipped. Node and link ids are assigned in
/// lexicographic order, so permuting `events` yields an identical network.
BuildResult build_network(const std::vector<RetweetEvent>& events, std::uint64_t tie_seed);

struct FilterResult {
    DiffusionNetwork network;
    std::size_t edges_removed = 0;
};

/// Keeps only edges labeled `keep` and drops nodes left without edges.
FilterResult filter_by_label(const DiffusionNetwork& network, Label keep);

/// Simple undirected graph over dense node ids.
struct UndirectedGraph {
    std::vector<std::vector<NodeId>> adjacency;  // sorted, no duplicates, no self-loops
    std::size_t edge_count = 0;

    std::size_t node_count() const noexcept { return adjacency.size(); }
    std::size_t degree(NodeId v) const { return adjacency.at(v).size(); }
    bool has_edge(NodeId a, NodeId b) const;

    /// Builds from an edge list, collapsing duplicates and reversed pairs.
    /// Throws std::invalid_argument on self-loops or out-of-range ids.
    static UndirectedGraph from_edges(std::size_t nodes, std::span<const std::pair<NodeId, NodeId>> edges);

    std::vector<std::pair<NodeId, NodeId>> edge_list() const;  // a < b, sorted

    friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;
};

/// {a,b} is an edge iff a->b or b->a is. Node ids are preserved.
UndirectedGraph undirected_projection(const DiffusionNetwork& network);

// Serialization: `src,dst,w_c,w_f,label` edge list and a
// `src,dst,url,count,label` link sidecar.
void write_edge_list(std::ostream& out, const DiffusionNetwork& network);
void write_link_sidecar(std::ostream& out, const DiffusionNetwork& network);
void write_node_index(std::ostream& out, const DiffusionNetwork& network);

/// Reads an edge list and optional link sidecar. Throws InputError on
/// malformed rows and std::invalid_argument on inconsistent content.
DiffusionNetwork read_network(std::istream& edges, std::istream* links);

}  // namespace misnet
