#include "misnet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace misnet {

Label edge_label(const EdgeWeights& weights, Rng& tie_rng) {
    if (weights.total() == 0) throw std::invalid_argument("edge has zero weight");
    if (weights.claim > weights.factcheck) return Label::claim;
    if (weights.factcheck > weights.claim) return Label::factcheck;
    return fair_coin(tie_rng) ? Label::claim : Label::factcheck;
}

Label keyed_edge_label(const EdgeWeights& weights, std::uint64_t tie_seed, std::string_view src,
                       std::string_view dst) {
    if (weights.total() != 0 && weights.claim != weights.factcheck) {
        return weights.claim > weights.factcheck ? Label::claim : Label::factcheck;
    }
    const auto [lo, hi] = std::minmax(src, dst);
    Rng rng(mix_seed(mix_seed(tie_seed, stable_hash(lo)), stable_hash(hi)));
    return edge_label(weights, rng);
}

namespace {

void build_incidence(std::size_t n, const std::vector<Edge>& edges, bool outgoing, std::vector<EdgeIndex>& offsets,
                     std::vector<EdgeIndex>& list) {
    offsets.assign(n + 1, 0);
    for (const auto& e : edges) ++offsets[(outgoing ? e.src : e.dst) + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    list.assign(edges.size(), 0);
    std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
    for (EdgeIndex i = 0; i < edges.size(); ++i) {
        const NodeId v = outgoing ? edges[i].src : edges[i].dst;
        list[cursor[v]++] = i;
    }
}

}  // namespace

DiffusionNetwork::DiffusionNetwork() : links_(std::make_shared<const std::vector<Link>>()) {
    out_offsets_.assign(1, 0);
    in_offsets_.assign(1, 0);
}

DiffusionNetwork::DiffusionNetwork(std::vector<std::string> nodes, std::shared_ptr<const std::vector<Link>> links,
                                   std::vector<Edge> edges)
    : names_(std::move(nodes)), links_(links ? std::move(links) : std::make_shared<const std::vector<Link>>()),
      edges_(std::move(edges)) {
    const std::size_t n = names_.size();
    by_name_.resize(n);
    std::iota(by_name_.begin(), by_name_.end(), NodeId{0});
    std::sort(by_name_.begin(), by_name_.end(), [&](NodeId a, NodeId b) { return names_[a] < names_[b]; });
    for (std::size_t i = 1; i < n; ++i) {
        if (names_[by_name_[i - 1]] == names_[by_name_[i]]) {
            throw std::invalid_argument("duplicate node id '" + names_[by_name_[i]] + "'");
        }
    }

    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto& e = edges_[i];
        if (e.src >= n || e.dst >= n) throw std::invalid_argument("edge endpoint out of range");
        if (e.src == e.dst) throw std::invalid_argument("self-loop on '" + names_[e.src] + "'");
        if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst) {
            throw std::invalid_argument("duplicate edge " + names_[e.src] + " -> " + names_[e.dst]);
        }
        if (e.weights.total() == 0) throw std::invalid_argument("zero-weight edge");
        if (!e.links.empty()) {
            std::sort(e.links.begin(), e.links.end(),
                      [](const LinkCount& a, const LinkCount& b) { return a.link < b.link; });
            std::uint64_t sum = 0;
            for (std::size_t j = 0; j < e.links.size(); ++j) {
                const auto& lc = e.links[j];
                if (lc.link >= links_->size()) throw std::invalid_argument("link id out of range");
                if (j > 0 && e.links[j - 1].link == lc.link) throw std::invalid_argument("duplicate link on edge");
                if (lc.count == 0) throw std::invalid_argument("zero link count");
                sum += lc.count;
            }
            if (sum != e.weights.total()) {
                throw std::invalid_argument("link counts do not sum to edge weight on " + names_[e.src] + " -> " +
                                            names_[e.dst]);
            }
        }
    }
    build_incidence(n, edges_, true, out_offsets_, out_list_);
    build_incidence(n, edges_, false, in_offsets_, in_list_);
}

std::optional<NodeId> DiffusionNetwork::find_node(std::string_view name) const {
    auto it = std::lower_bound(by_name_.begin(), by_name_.end(), name,
                               [&](NodeId id, std::string_view key) { return names_[id] < key; });
    if (it != by_name_.end() && names_[*it] == name) return *it;
    return std::nullopt;
}

std::span<const EdgeIndex> DiffusionNetwork::out_edges(NodeId v) const {
    if (v >= node_count()) throw std::out_of_range("node id out of range");
    return std::span<const EdgeIndex>(out_list_).subspan(out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]);
}

std::span<const EdgeIndex> DiffusionNetwork::in_edges(NodeId v) const {
    if (v >= node_count()) throw std::out_of_range("node id out of range");
    return std::span<const EdgeIndex>(in_list_).subspan(in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]);
}

const Edge* DiffusionNetwork::find_edge(NodeId src, NodeId dst) const {
    if (src >= node_count()) return nullptr;
    // Outgoing lists are ordered by dst because edges are sorted by (src, dst).
    auto out = out_edges(src);
    auto it = std::lower_bound(out.begin(), out.end(), dst,
                               [&](EdgeIndex e, NodeId key) { return edges_[e].dst < key; });
    if (it != out.end() && edges_[*it].dst == dst) return &edges_[*it];
    return nullptr;
}

EdgeWeights DiffusionNetwork::total_weights() const noexcept {
    EdgeWeights sum;
    for (const auto& e : edges_) {
        sum.claim += e.weights.claim;
        sum.factcheck += e.weights.factcheck;
    }
    return sum;
}

DiffusionNetwork DiffusionNetwork::induced(const std::vector<bool>& keep) const {
    if (keep.size() != node_count()) throw std::invalid_argument("keep mask size mismatch");
    std::vector<NodeId> remap(node_count(), 0);
    std::vector<std::string> names;
    for (NodeId v = 0; v < node_count(); ++v) {
        if (keep[v]) {
            remap[v] = static_cast<NodeId>(names.size());
            names.push_back(names_[v]);
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : edges_) {
        if (keep[e.src] && keep[e.dst]) {
            Edge copy = e;
            copy.src = remap[e.src];
            copy.dst = remap[e.dst];
            edges.push_back(std::move(copy));
        }
    }
    return DiffusionNetwork(std::move(names), links_, std::move(edges));
}

bool operator==(const DiffusionNetwork& a, const DiffusionNetwork& b) {
    if (a.names_ != b.names_ || a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        const Edge& x = a.edges_[i];
        const Edge& y = b.edges_[i];
        if (x.src != y.src || x.dst != y.dst || x.weights != y.weights || x.label != y.label ||
            x.links.size() != y.links.size()) {
            return false;
        }
        // Compare links by content so networks with different link tables still compare.
        for (std::size_t j = 0; j < x.links.size(); ++j) {
            if (x.links[j].count != y.links[j].count || a.links()[x.links[j].link] != b.links()[y.links[j].link]) {
                return false;
            }
        }
    }
    return true;
}

BuildResult build_network(const std::vector<RetweetEvent>& events, std::uint64_t tie_seed) {
    BuildReport report;
    report.events = events.size();

    // Intern names and links, then renumber both in lexicographic order.
    std::unordered_map<std::string_view, NodeId> node_ids;
    std::unordered_map<std::string_view, LinkId> link_ids;
    std::vector<std::string_view> node_names, link_urls;
    std::vector<Label> link_labels;
    const auto intern_node = [&](std::string_view name) {
        auto [it, added] = node_ids.try_emplace(name, static_cast<NodeId>(node_names.size()));
        if (added) node_names.push_back(name);
        return it->second;
    };

    struct Hit {
        NodeId src, dst;
        LinkId link;
        Label label;
    };
    std::vector<Hit> hits;
    hits.reserve(events.size());
    for (const auto& ev : events) {
        if (ev.retweeted == ev.retweeter) {
            ++report.self_loops_skipped;
            continue;
        }
        const NodeId s = intern_node(ev.retweeted);
        const NodeId d = intern_node(ev.retweeter);
        auto [lit, added] = link_ids.try_emplace(ev.link, static_cast<LinkId>(link_urls.size()));
        if (added) {
            link_urls.push_back(ev.link);
            link_labels.push_back(ev.label);
        } else if (link_labels[lit->second] != ev.label) {
            throw std::invalid_argument("link '" + ev.link + "' appears with both labels");
        }
        hits.push_back({s, d, lit->second, ev.label});
    }

    std::vector<NodeId> node_order(node_names.size());
    std::iota(node_order.begin(), node_order.end(), NodeId{0});
    std::sort(node_order.begin(), node_order.end(), [&](NodeId a, NodeId b) { return node_names[a] < node_names[b]; });
    std::vector<NodeId> node_rank(node_names.size());
    std::vector<std::string> names;
    names.reserve(node_names.size());
    for (NodeId r = 0; r < node_order.size(); ++r) {
        node_rank[node_order[r]] = r;
        names.emplace_back(node_names[node_order[r]]);
    }

    std::vector<LinkId> link_order(link_urls.size());
    std::iota(link_order.begin(), link_order.end(), LinkId{0});
    std::sort(link_order.begin(), link_order.end(), [&](LinkId a, LinkId b) { return link_urls[a] < link_urls[b]; });
    std::vector<LinkId> link_rank(link_urls.size());
    auto links = std::make_shared<std::vector<Link>>();
    links->reserve(link_urls.size());
    for (LinkId r = 0; r < link_order.size(); ++r) {
        link_rank[link_order[r]] = r;
        links->push_back(Link{std::string(link_urls[link_order[r]]), link_labels[link_order[r]]});
    }

    for (auto& h : hits) {
        h.src = node_rank[h.src];
        h.dst = node_rank[h.dst];
        h.link = link_rank[h.link];
    }
    std::sort(hits.begin(), hits.end(),
              [](const Hit& a, const Hit& b) { return std::tie(a.src, a.dst, a.link) < std::tie(b.src, b.dst, b.link); });

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < hits.size();) {
        Edge e;
        e.src = hits[i].src;
        e.dst = hits[i].dst;
        while (i < hits.size() && hits[i].src == e.src && hits[i].dst == e.dst) {
            const Hit& h = hits[i];
            (h.label == Label::claim ? e.weights.claim : e.weights.factcheck) += 1;
            if (!e.links.empty() && e.links.back().link == h.link) {
                ++e.links.back().count;
            } else {
                e.links.push_back({h.link, 1});
            }
            ++i;
        }
        e.label = keyed_edge_label(e.weights, tie_seed, names[e.src], names[e.dst]);
        if (e.weights.claim > 0 && e.weights.factcheck > 0) ++report.mixed_edges;
        if (e.weights.claim == e.weights.factcheck) ++report.tied_edges;
        if (e.label == Label::factcheck) ++report.factcheck_edges;
        report.total.claim += e.weights.claim;
        report.total.factcheck += e.weights.factcheck;
        edges.push_back(std::move(e));
    }

    report.nodes = names.size();
    report.edges = edges.size();
    return {DiffusionNetwork(std::move(names), std::move(links), std::move(edges)), report};
}

FilterResult filter_by_label(const DiffusionNetwork& network, Label keep) {
    std::vector<bool> touched(network.node_count(), false);
    std::size_t removed = 0;
    for (const auto& e : network.edges()) {
        if (e.label == keep) {
            touched[e.src] = touched[e.dst] = true;
        } else {
            ++removed;
        }
    }
    std::vector<NodeId> remap(network.node_count(), 0);
    std::vector<std::string> names;
    for (NodeId v = 0; v < network.node_count(); ++v) {
        if (touched[v]) {
            remap[v] = static_cast<NodeId>(names.size());
            names.push_back(network.node_name(v));
        }
    }
    std::vector<Edge> edges;
    edges.reserve(network.edge_count() - removed);
    for (const auto& e : network.edges()) {
        if (e.label != keep) continue;
        Edge copy = e;
        copy.src = remap[e.src];
        copy.dst = remap[e.dst];
        edges.push_back(std::move(copy));
    }
    return {DiffusionNetwork(std::move(names), network.shared_links(), std::move(edges)), removed};
}

bool UndirectedGraph::has_edge(NodeId a, NodeId b) const {
    const auto& adj = adjacency.at(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

UndirectedGraph UndirectedGraph::from_edges(std::size_t nodes, std::span<const std::pair<NodeId, NodeId>> edges) {
    UndirectedGraph g;
    g.adjacency.resize(nodes);
    for (const auto& [a, b] : edges) {
        if (a >= nodes || b >= nodes) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop in undirected graph");
        g.adjacency[a].push_back(b);
        g.adjacency[b].push_back(a);
    }
    for (auto& adj : g.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        g.edge_count += adj.size();
    }
    g.edge_count /= 2;
    return g;
}

std::vector<std::pair<NodeId, NodeId>> UndirectedGraph::edge_list() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count);
    for (NodeId a = 0; a < adjacency.size(); ++a) {
        for (NodeId b : adjacency[a]) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    return out;
}

UndirectedGraph undirected_projection(const DiffusionNetwork& network) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(network.edge_count());
    for (const auto& e : network.edges()) pairs.emplace_back(e.src, e.dst);
    return UndirectedGraph::from_edges(network.node_count(), pairs);
}

}  // namespace misnet
