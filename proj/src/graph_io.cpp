#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "misnet/csv.hpp"
#include "misnet/errors.hpp"
#include "misnet/graph.hpp"

namespace misnet {

void write_edge_list(std::ostream& out, const DiffusionNetwork& network) {
    out << "src,dst,w_c,w_f,label\n";
    for (const auto& e : network.edges()) {
        out << csv::escape(network.node_name(e.src)) << ',' << csv::escape(network.node_name(e.dst)) << ','
            << e.weights.claim << ',' << e.weights.factcheck << ',' << to_string(e.label) << '\n';
    }
}

void write_link_sidecar(std::ostream& out, const DiffusionNetwork& network) {
    out << "src,dst,url,count,label\n";
    for (const auto& e : network.edges()) {
        const auto src = csv::escape(network.node_name(e.src));
        const auto dst = csv::escape(network.node_name(e.dst));
        for (const auto& lc : e.links) {
            const Link& link = network.links()[lc.link];
            out << src << ',' << dst << ',' << csv::escape(link.url) << ',' << lc.count << ',' << to_string(link.label)
                << '\n';
        }
    }
}

void write_node_index(std::ostream& out, const DiffusionNetwork& network) {
    out << "index,node\n";
    for (NodeId v = 0; v < network.node_count(); ++v) out << v << ',' << csv::escape(network.node_name(v)) << '\n';
}

namespace {

std::uint64_t parse_count(const std::string& text, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InputError("line " + std::to_string(line) + ": bad count '" + text + "'");
    }
    return value;
}

Label parse_label_field(const std::string& text, std::size_t line) {
    auto label = parse_label(text);
    if (!label) throw InputError("line " + std::to_string(line) + ": bad label '" + text + "'");
    return *label;
}

void expect_header(csv::Reader& reader, const std::vector<std::string>& expected, const char* what) {
    auto header = reader.next();
    if (!header || header->fields != expected) throw InputError(std::string("unexpected header in ") + what);
}

}  // namespace

DiffusionNetwork read_network(std::istream& edges_in, std::istream* links_in) {
    if (!edges_in) throw InputError("edge list is not readable");

    struct RawEdge {
        std::string src, dst;
        EdgeWeights weights;
        Label label;
    };
    std::vector<RawEdge> raw;
    csv::Reader reader(edges_in);
    expect_header(reader, {"src", "dst", "w_c", "w_f", "label"}, "edge list");
    while (auto rec = reader.next()) {
        if (rec->malformed || rec->fields.size() != 5) {
            throw InputError("line " + std::to_string(rec->line) + ": malformed edge row");
        }
        auto& f = rec->fields;
        raw.push_back({f[0], f[1], {parse_count(f[2], rec->line), parse_count(f[3], rec->line)},
                       parse_label_field(f[4], rec->line)});
    }

    std::vector<std::string> names;
    for (const auto& r : raw) {
        names.push_back(r.src);
        names.push_back(r.dst);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    const auto id_of = [&](const std::string& name) {
        return static_cast<NodeId>(std::lower_bound(names.begin(), names.end(), name) - names.begin());
    };

    struct RawLink {
        std::string url;
        std::uint64_t count;
        Label label;
    };
    std::map<std::pair<NodeId, NodeId>, std::vector<RawLink>> per_edge;
    std::map<std::string, Label> url_labels;
    if (links_in) {
        if (!*links_in) throw InputError("link sidecar is not readable");
        csv::Reader lr(*links_in);
        expect_header(lr, {"src", "dst", "url", "count", "label"}, "link sidecar");
        while (auto rec = lr.next()) {
            if (rec->malformed || rec->fields.size() != 5) {
                throw InputError("line " + std::to_string(rec->line) + ": malformed link row");
            }
            auto& f = rec->fields;
            const Label label = parse_label_field(f[4], rec->line);
            auto [it, added] = url_labels.emplace(f[2], label);
            if (!added && it->second != label) throw std::invalid_argument("link '" + f[2] + "' has two labels");
            if (!std::binary_search(names.begin(), names.end(), f[0]) ||
                !std::binary_search(names.begin(), names.end(), f[1])) {
                throw std::invalid_argument("link row references an unknown edge " + f[0] + " -> " + f[1]);
            }
            per_edge[{id_of(f[0]), id_of(f[1])}].push_back({f[2], parse_count(f[3], rec->line), label});
        }
    }

    auto links = std::make_shared<std::vector<Link>>();
    for (const auto& [url, label] : url_labels) links->push_back({url, label});
    const auto link_id = [&](const std::string& url) {
        return static_cast<LinkId>(std::lower_bound(links->begin(), links->end(), url,
                                                    [](const Link& l, const std::string& u) { return l.url < u; }) -
                                   links->begin());
    };

    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& r : raw) {
        Edge e;
        e.src = id_of(r.src);
        e.dst = id_of(r.dst);
        e.weights = r.weights;
        e.label = r.label;
        if (auto it = per_edge.find({e.src, e.dst}); it != per_edge.end()) {
            for (const auto& l : it->second) e.links.push_back({link_id(l.url), l.count});
            per_edge.erase(it);
        }
        edges.push_back(std::move(e));
    }
    if (!per_edge.empty()) throw std::invalid_argument("link sidecar references an edge missing from the edge list");
    return DiffusionNetwork(std::move(names), std::move(links), std::move(edges));
}

}  // namespace misnet
