#include "misnet/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "misnet/kcore.hpp"
#include "misnet/parallel.hpp"

namespace misnet {

namespace {

void require_sorted(const std::vector<RetweetEvent>& events) {
    const bool sorted = std::is_sorted(events.begin(), events.end(),
                                       [](const RetweetEvent& a, const RetweetEvent& b) { return a.timestamp < b.timestamp; });
    if (!sorted) throw std::invalid_argument("events are not sorted by timestamp");
}

std::vector<RetweetEvent> prefix(const std::vector<RetweetEvent>& events, std::size_t n) {
    return {events.begin(), events.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace

std::vector<std::pair<Timestamp, std::size_t>> snapshot_cutoffs(const std::vector<RetweetEvent>& events,
                                                                Timestamp step) {
    if (step <= 0) throw std::invalid_argument("snapshot step must be positive");
    require_sorted(events);
    std::vector<std::pair<Timestamp, std::size_t>> cuts;
    if (events.empty()) return cuts;
    const Timestamp first = events.front().timestamp;
    const Timestamp last = events.back().timestamp;
    std::size_t count = 0;
    for (Timestamp t = first + step;; t += step) {
        while (count < events.size() && events[count].timestamp < t) ++count;
        cuts.emplace_back(t, count);
        if (t > last) break;
    }
    return cuts;
}

void for_each_snapshot(const std::vector<RetweetEvent>& events, Timestamp step, std::uint64_t tie_seed,
                       const std::function<void(const Snapshot&)>& fn) {
    for (const auto& [t, n] : snapshot_cutoffs(events, step)) {
        Snapshot snap{t, n, build_network(prefix(events, n), tie_seed).network};
        fn(snap);
    }
}

std::vector<Snapshot> cumulative_snapshots(const std::vector<RetweetEvent>& events, Timestamp step,
                                           std::uint64_t tie_seed) {
    std::vector<Snapshot> out;
    for_each_snapshot(events, step, tie_seed, [&](const Snapshot& s) { out.push_back(s); });
    return out;
}

TrajectoryPoint measure_core(Timestamp time, const DiffusionNetwork& network) {
    const ShellIndex shells = decompose(network);
    TrajectoryPoint p;
    p.time = time;
    p.k_max = shells.k_max;
    p.core_size = network.empty() ? 0 : shells.core_size(shells.k_max);
    return p;
}

void smooth_trajectory(std::vector<TrajectoryPoint>& points, Timestamp window) {
    std::size_t begin = 0;
    double sum_k = 0.0, sum_size = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sum_k += points[i].k_max;
        sum_size += static_cast<double>(points[i].core_size);
        while (points[begin].time <= points[i].time - window) {
            sum_k -= points[begin].k_max;
            sum_size -= static_cast<double>(points[begin].core_size);
            ++begin;
        }
        const double n = static_cast<double>(i - begin + 1);
        points[i].smoothed_k_max = sum_k / n;
        points[i].smoothed_core_size = sum_size / n;
    }
}

CoreTrajectory core_trajectory(const std::vector<Snapshot>& snapshots, Timestamp window, unsigned threads) {
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        const Timestamp step = snapshots[i].time - snapshots[i - 1].time;
        if (step <= 0) throw std::invalid_argument("snapshot times must be strictly increasing");
        if (window < step) throw std::invalid_argument("smoothing window is shorter than the snapshot step");
    }
    if (window <= 0) throw std::invalid_argument("smoothing window must be positive");
    CoreTrajectory traj;
    traj.points.resize(snapshots.size());
    parallel_tasks(snapshots.size(), threads,
                   [&](std::size_t i) { traj.points[i] = measure_core(snapshots[i].time, snapshots[i].network); });
    smooth_trajectory(traj.points, window);
    return traj;
}

namespace {

/// Set of undirected edge keys for the swap loop: linear probing with
/// backward-shift deletion, sized once since swaps keep |E| fixed.
class EdgeKeySet {
public:
    explicit EdgeKeySet(std::size_t edges) {
        std::size_t cap = 16;
        while (cap < edges * 4) cap <<= 1;
        slots_.assign(cap, kEmpty);
        mask_ = cap - 1;
    }

    static std::uint64_t key(NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    bool contains(std::uint64_t k) const {
        for (std::size_t i = home(k);; i = (i + 1) & mask_) {
            if (slots_[i] == k) return true;
            if (slots_[i] == kEmpty) return false;
        }
    }

    void insert(std::uint64_t k) {
        std::size_t i = home(k);
        while (slots_[i] != kEmpty) i = (i + 1) & mask_;
        slots_[i] = k;
    }

    void erase(std::uint64_t k) {
        std::size_t i = home(k);
        while (slots_[i] != k) i = (i + 1) & mask_;
        for (std::size_t j = (i + 1) & mask_; slots_[j] != kEmpty; j = (j + 1) & mask_) {
            // Move j back into the hole unless its home lies in (i, j].
            if (((j - home(slots_[j])) & mask_) >= ((j - i) & mask_)) {
                slots_[i] = slots_[j];
                i = j;
            }
        }
        slots_[i] = kEmpty;
    }

private:
    // a < b for every stored edge, so key 0 (a = b = 0) never occurs.
    static constexpr std::uint64_t kEmpty = 0;

    std::size_t home(std::uint64_t k) const { return static_cast<std::size_t>(splitmix64(k)) & mask_; }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
};

}  // namespace

UndirectedGraph configuration_shuffle(const UndirectedGraph& graph, Rng& rng, double swaps_per_edge,
                                      std::size_t* accepted) {
    if (accepted) *accepted = 0;
    auto edges = graph.edge_list();
    if (edges.size() < 2) return graph;

    using Set = EdgeKeySet;
    Set present(edges.size());
    for (const auto& [a, b] : edges) present.insert(Set::key(a, b));

    const auto attempts = static_cast<std::uint64_t>(std::llround(swaps_per_edge * static_cast<double>(edges.size())));
    std::size_t done = 0;
    for (std::uint64_t i = 0; i < attempts; ++i) {
        const auto i1 = uniform_below(rng, edges.size());
        const auto i2 = uniform_below(rng, edges.size());
        auto [u, v] = edges[i1];
        auto [x, y] = edges[i2];
        if (fair_coin(rng)) std::swap(x, y);
        // u-v, x-y  ->  u-x, v-y
        if (u == x || v == y) continue;
        if (present.contains(Set::key(u, x)) || present.contains(Set::key(v, y))) continue;
        present.erase(Set::key(u, v));
        present.erase(Set::key(x, y));
        present.insert(Set::key(u, x));
        present.insert(Set::key(v, y));
        edges[i1] = {u, x};
        edges[i2] = {v, y};
        ++done;
    }
    if (accepted) *accepted = done;
    return UndirectedGraph::from_edges(graph.node_count(), edges);
}

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(p * n));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

NullBand null_kmax_band(const UndirectedGraph& graph, const NullBandOptions& options, std::uint64_t seed) {
    if (options.n_samples < 2) throw std::invalid_argument("null band needs at least 2 samples");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    NullBand band;
    band.n_samples = options.n_samples;
    band.samples.resize(options.n_samples);
    parallel_tasks(options.n_samples, options.threads, [&](std::size_t i) {
        Rng rng(mix_seed(seed, i));
        band.samples[i] = decompose(configuration_shuffle(graph, rng, options.swaps_per_edge)).k_max;
    });
    std::vector<double> values(band.samples.begin(), band.samples.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    band.mean = sum / static_cast<double>(values.size());
    band.lower = empirical_quantile(values, options.alpha / 2.0);
    band.upper = empirical_quantile(values, 1.0 - options.alpha / 2.0);
    return band;
}

namespace {

std::size_t intersection_size(const NodeSet& a, const NodeSet& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

}  // namespace

std::vector<ChurnPoint> churn_rate(const std::vector<NodeSet>& cores) {
    if (cores.size() < 2) throw std::invalid_argument("churn needs at least two cores");
    std::vector<ChurnPoint> out;
    for (std::size_t t = 1; t < cores.size(); ++t) {
        const auto& prev = cores[t - 1];
        const auto& cur = cores[t];
        const std::size_t common = intersection_size(prev, cur);
        const std::size_t uni = prev.size() + cur.size() - common;
        ChurnPoint p;
        if (uni > 0) p.jaccard = 1.0 - static_cast<double>(common) / static_cast<double>(uni);
        if (!prev.empty()) p.relative = 1.0 - static_cast<double>(common) / static_cast<double>(prev.size());
        out.push_back(p);
    }
    return out;
}

NodeSet stable_core(const std::vector<NodeSet>& cores) {
    if (cores.empty()) throw std::invalid_argument("stable core of an empty sequence");
    NodeSet acc = cores.front();
    for (std::size_t i = 1; i < cores.size(); ++i) {
        NodeSet next;
        std::set_intersection(acc.begin(), acc.end(), cores[i].begin(), cores[i].end(), std::back_inserter(next));
        acc = std::move(next);
    }
    return acc;
}

NodeSet main_core_members(const DiffusionNetwork& network) {
    if (network.empty()) return {};
    const ShellIndex shells = decompose(network);
    NodeSet out;
    for (NodeId v : shells.shell_nodes(shells.k_max)) out.push_back(network.node_name(v));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<Timestamp, NodeSet>> monthly_main_cores(const std::vector<RetweetEvent>& events,
                                                              std::uint64_t tie_seed) {
    require_sorted(events);
    std::vector<std::pair<Timestamp, NodeSet>> out;
    if (events.empty()) return out;
    const Timestamp last = events.back().timestamp;
    std::size_t count = 0;
    for (Timestamp cut = next_month_start(events.front().timestamp);; cut = next_month_start(cut)) {
        while (count < events.size() && events[count].timestamp < cut) ++count;
        out.emplace_back(cut, main_core_members(build_network(prefix(events, count), tie_seed).network));
        if (cut > last) break;
    }
    return out;
}

}  // namespace misnet
