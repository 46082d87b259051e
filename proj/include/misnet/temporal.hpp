#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "misnet/graph.hpp"
#include "misnet/ingest.hpp"
#include "misnet/random.hpp"

namespace misnet {

struct Snapshot {
    Timestamp time = 0;      // contains events with timestamp < time
    std::size_t events = 0;  // prefix length
    DiffusionNetwork network;
};

/// Cutoff times first + step, first + 2*step, ... up to the first one past
/// the last event, with the number of events before each. Throws
/// std::invalid_argument when events are unsorted or step <= 0.
std::vector<std::pair<Timestamp, std::size_t>> snapshot_cutoffs(const std::vector<RetweetEvent>& events,
                                                                Timestamp step);

/// Calls fn once per cutoff with the network of all earlier events, without
/// keeping more than one snapshot alive.
void for_each_snapshot(const std::vector<RetweetEvent>& events, Timestamp step, std::uint64_t tie_seed,
                       const std::function<void(const Snapshot&)>& fn);

std::vector<Snapshot> cumulative_snapshots(const std::vector<RetweetEvent>& events, Timestamp step,
                                           std::uint64_t tie_seed);

struct TrajectoryPoint {
    Timestamp time = 0;
    std::uint32_t k_max = 0;
    std::size_t core_size = 0;
    double smoothed_k_max = 0.0;
    double smoothed_core_size = 0.0;
};

struct CoreTrajectory {
    std::vector<TrajectoryPoint> points;
};

/// Raw k_max and main-core size of one network (smoothed fields unset).
TrajectoryPoint measure_core(Timestamp time, const DiffusionNetwork& network);

/// Fills the smoothed fields with the mean over points in (t - window, t].
void smooth_trajectory(std::vector<TrajectoryPoint>& points, Timestamp window);

/// Decomposes every snapshot (in parallel) and smooths over `window`.
/// Throws std::invalid_argument if window is shorter than the snapshot step
/// or times are not strictly increasing.
CoreTrajectory core_trajectory(const std::vector<Snapshot>& snapshots, Timestamp window, unsigned threads = 1);

/// Degree-preserving randomization by double-edge swaps. Performs
/// round(swaps_per_edge * |E|) attempts; attempts that would create a
/// self-loop or multi-edge are rejected. Graphs with fewer than two edges
/// are returned unchanged.
UndirectedGraph configuration_shuffle(const UndirectedGraph& graph, Rng& rng, double swaps_per_edge = 10.0,
                                      std::size_t* accepted = nullptr);

struct NullBandOptions {
    std::size_t n_samples = 100;
    double alpha = 0.05;
    double swaps_per_edge = 10.0;
    unsigned threads = 1;
};

struct NullBand {
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t n_samples = 0;
    std::vector<std::uint32_t> samples;  // k_max per replicate, replicate order
};

/// Nearest-rank empirical quantile: the ceil(p * n)-th smallest value.
double empirical_quantile(std::vector<double> values, double p);

/// k_max over configuration-model replicates. Replicate i draws from
/// mix_seed(seed, i), so results do not depend on `threads`.
/// Throws std::invalid_argument when n_samples < 2 or alpha is outside (0,1).
NullBand null_kmax_band(const UndirectedGraph& graph, const NullBandOptions& options, std::uint64_t seed);

/// Sorted, duplicate-free account ids.
using NodeSet = std::vector<std::string>;

struct ChurnPoint {
    std::optional<double> jaccard;   // 1 - |A n B| / |A u B|
    std::optional<double> relative;  // 1 - |A n B| / |A|
};

/// One point per consecutive pair. Throws std::invalid_argument for fewer
/// than two cores.
std::vector<ChurnPoint> churn_rate(const std::vector<NodeSet>& cores);

/// Accounts present in every core. Throws std::invalid_argument when empty.
NodeSet stable_core(const std::vector<NodeSet>& cores);

NodeSet main_core_members(const DiffusionNetwork& network);

/// Main cores of cumulative snapshots cut at each calendar-month boundary
/// (UTC) after the first event, the last cut covering every event.
std::vector<std::pair<Timestamp, NodeSet>> monthly_main_cores(const std::vector<RetweetEvent>& events,
                                                              std::uint64_t tie_seed);

}  // namespace misnet
