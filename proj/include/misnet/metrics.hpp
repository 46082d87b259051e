#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "misnet/graph.hpp"
#include "misnet/kcore.hpp"

namespace misnet {

/// Retweet counts incident to one node. s_in counts the node retweeting
/// others (incoming edges), s_out the node being retweeted.
struct StrengthVector {
    std::uint64_t s_in = 0;
    std::uint64_t s_out = 0;
    std::uint64_t s_c = 0;
    std::uint64_t s_f = 0;
    std::uint64_t s = 0;
    std::uint64_t s_f_in = 0;   // fact-check part of s_in
    std::uint64_t s_f_out = 0;  // fact-check part of s_out

    friend bool operator==(const StrengthVector&, const StrengthVector&) = default;
};

struct RatioPoint {
    double rho_f = 0.0;
    double rho_in = 0.0;
};

StrengthVector strengths(const DiffusionNetwork& network, NodeId node);

/// Throws std::invalid_argument for an unknown node.
StrengthVector strengths(const DiffusionNetwork& network, std::string_view node);

std::vector<StrengthVector> all_strengths(const DiffusionNetwork& network);

/// rho_f = s_f / s, rho_in = s_in / s. Throws UndefinedRatioError when s = 0.
RatioPoint ratios(const StrengthVector& v);

/// One row of the per-shell fact-checking profile. "in" is the fact-check
/// share of incoming strength (secondary spreading), "out" of outgoing
/// strength (primary spreading). Means are over nodes with nonzero strength
/// in that direction; the pooled columns divide summed strengths instead.
struct ShellProfileRow {
    std::uint32_t k = 0;
    std::size_t nodes = 0;
    std::optional<double> in_mean, in_stderr;
    std::size_t in_n = 0;
    std::optional<double> out_mean, out_stderr;
    std::size_t out_n = 0;
    std::optional<double> in_pooled, out_pooled;
};

/// Rows for every nonempty shell, ascending k.
std::vector<ShellProfileRow> shell_factcheck_profile(const DiffusionNetwork& network, const ShellIndex& shells);

/// Counts over (rho_f, rho_in) on a bins x bins uniform grid of [0,1]^2.
struct RatioHistogram {
    std::uint32_t k = 0;
    std::size_t bins = 0;
    std::vector<std::uint64_t> counts;  // row-major: counts[f_bin * bins + in_bin]
    std::uint64_t total = 0;

    std::uint64_t at(std::size_t f_bin, std::size_t in_bin) const { return counts.at(f_bin * bins + in_bin); }
};

/// Bin of x in [0,1] among `bins` uniform bins; the last bin is closed.
std::size_t ratio_bin(double x, std::size_t bins);

/// Histogram over nodes of the k-core with nonzero strength, strengths
/// measured inside the k-core subnetwork. Throws std::invalid_argument when
/// bins < 2 or k > k_max.
RatioHistogram joint_ratio_histogram(const DiffusionNetwork& network, const ShellIndex& shells, std::uint32_t k,
                                     std::size_t bins = 20);

}  // namespace misnet
