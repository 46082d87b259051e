#pragma once

// Fixture builders shared by the unit and acceptance suites.

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "misnet/graph.hpp"
#include "misnet/ingest.hpp"

namespace misnet::testing {

/// "n007"-style names, so lexicographic order equals numeric order.
inline std::string node_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "n%04zu", i);
    return buf;
}

inline RetweetEvent event(Timestamp t, std::string src, std::string dst, Label label = Label::claim,
                          std::string link = {}) {
    if (link.empty()) {
        link = std::string(label == Label::claim ? "http://claims.example/" : "http://checks.example/") + src;
    }
    return RetweetEvent{t, std::move(src), std::move(dst), std::move(link), label};
}

/// One claim event per (src, dst) pair, all at time 0.
inline DiffusionNetwork network_from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<RetweetEvent> events;
    for (const auto& [a, b] : pairs) events.push_back(event(0, a, b));
    return build_network(events, 0).network;
}

/// Random event stream over n nodes: `count` events, fact-check with
/// probability fc_prob, links drawn from `links` claim and fact-check URLs.
inline std::vector<RetweetEvent> random_events(std::mt19937_64& rng, std::size_t n, std::size_t count,
                                               double fc_prob = 0.2, std::size_t links = 30) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> pick_link(0, links - 1);
    std::bernoulli_distribution is_fc(fc_prob);
    // Skewed sources: low ids get retweeted more.
    std::geometric_distribution<std::size_t> hub(3.0 / static_cast<double>(n));
    std::vector<RetweetEvent> events;
    Timestamp t = 1'462'000'000;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t a = hub(rng) % n;
        std::size_t b = pick(rng);
        const bool fc = is_fc(rng);
        const std::string url = std::string(fc ? "http://checks.example/" : "http://claims.example/") +
                                std::to_string(pick_link(rng));
        t += static_cast<Timestamp>(rng() % 7200);
        events.push_back({t, node_name(a), node_name(b), url, fc ? Label::factcheck : Label::claim});
    }
    return events;
}

/// Random G(n, p) pairs, a < b.
inline std::vector<std::pair<NodeId, NodeId>> random_undirected_edges(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (coin(rng)) edges.emplace_back(a, b);
        }
    }
    return edges;
}

/// Random directed network where every node exists (isolated ones included).
inline DiffusionNetwork random_directed_network(std::mt19937_64& rng, std::size_t n, double p, int max_weight = 1) {
    std::bernoulli_distribution coin(p);
    std::uniform_int_distribution<int> weight(1, max_weight);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(node_name(i));
    std::vector<Edge> edges;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = 0; b < n; ++b) {
            if (a != b && coin(rng)) {
                Edge e;
                e.src = a;
                e.dst = b;
                e.weights.claim = static_cast<std::uint64_t>(weight(rng));
                e.label = Label::claim;
                edges.push_back(e);
            }
        }
    }
    return DiffusionNetwork(std::move(names), nullptr, std::move(edges));
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("misnet-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace misnet::testing
