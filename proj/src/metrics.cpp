#include "misnet/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "misnet/errors.hpp"
#include "misnet/stats.hpp"

namespace misnet {

StrengthVector strengths(const DiffusionNetwork& network, NodeId node) {
    StrengthVector v;
    for (EdgeIndex e : network.in_edges(node)) {
        const auto& w = network.edge(e).weights;
        v.s_in += w.total();
        v.s_f_in += w.factcheck;
        v.s_c += w.claim;
        v.s_f += w.factcheck;
    }
    for (EdgeIndex e : network.out_edges(node)) {
        const auto& w = network.edge(e).weights;
        v.s_out += w.total();
        v.s_f_out += w.factcheck;
        v.s_c += w.claim;
        v.s_f += w.factcheck;
    }
    v.s = v.s_in + v.s_out;
    return v;
}

StrengthVector strengths(const DiffusionNetwork& network, std::string_view node) {
    const auto id = network.find_node(node);
    if (!id) throw std::invalid_argument("unknown node '" + std::string(node) + "'");
    return strengths(network, *id);
}

std::vector<StrengthVector> all_strengths(const DiffusionNetwork& network) {
    std::vector<StrengthVector> out(network.node_count());
    for (NodeId v = 0; v < network.node_count(); ++v) out[v] = strengths(network, v);
    return out;
}

RatioPoint ratios(const StrengthVector& v) {
    if (v.s == 0) throw UndefinedRatioError("ratios are undefined for a node with zero strength");
    const double s = static_cast<double>(v.s);
    return {static_cast<double>(v.s_f) / s, static_cast<double>(v.s_in) / s};
}

std::vector<ShellProfileRow> shell_factcheck_profile(const DiffusionNetwork& network, const ShellIndex& shells) {
    if (shells.shell.size() != network.node_count()) {
        throw std::invalid_argument("shell index does not match the network");
    }
    struct Acc {
        std::size_t nodes = 0;
        std::vector<double> in_ratios, out_ratios;
        std::uint64_t in_sum = 0, in_f = 0, out_sum = 0, out_f = 0;
    };
    std::map<std::uint32_t, Acc> by_shell;
    for (NodeId v = 0; v < network.node_count(); ++v) {
        const StrengthVector s = strengths(network, v);
        Acc& acc = by_shell[shells.shell[v]];
        ++acc.nodes;
        if (s.s_in > 0) {
            acc.in_ratios.push_back(static_cast<double>(s.s_f_in) / static_cast<double>(s.s_in));
            acc.in_sum += s.s_in;
            acc.in_f += s.s_f_in;
        }
        if (s.s_out > 0) {
            acc.out_ratios.push_back(static_cast<double>(s.s_f_out) / static_cast<double>(s.s_out));
            acc.out_sum += s.s_out;
            acc.out_f += s.s_f_out;
        }
    }
    std::vector<ShellProfileRow> rows;
    for (const auto& [k, acc] : by_shell) {
        ShellProfileRow row;
        row.k = k;
        row.nodes = acc.nodes;
        if (!acc.in_ratios.empty()) {
            const auto me = mean_and_stderr(acc.in_ratios);
            row.in_mean = me.mean;
            row.in_stderr = me.stderr_;
            row.in_n = me.n;
            row.in_pooled = static_cast<double>(acc.in_f) / static_cast<double>(acc.in_sum);
        }
        if (!acc.out_ratios.empty()) {
            const auto me = mean_and_stderr(acc.out_ratios);
            row.out_mean = me.mean;
            row.out_stderr = me.stderr_;
            row.out_n = me.n;
            row.out_pooled = static_cast<double>(acc.out_f) / static_cast<double>(acc.out_sum);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t ratio_bin(double x, std::size_t bins) {
    if (x <= 0.0) return 0;
    const auto b = static_cast<std::size_t>(x * static_cast<double>(bins));
    return std::min(b, bins - 1);
}

RatioHistogram joint_ratio_histogram(const DiffusionNetwork& network, const ShellIndex& shells, std::uint32_t k,
                                     std::size_t bins) {
    if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
    const DiffusionNetwork core = core_subgraph(network, shells, k);
    RatioHistogram hist;
    hist.k = k;
    hist.bins = bins;
    hist.counts.assign(bins * bins, 0);
    for (NodeId v = 0; v < core.node_count(); ++v) {
        const StrengthVector s = strengths(core, v);
        if (s.s == 0) continue;
        const RatioPoint r = ratios(s);
        ++hist.counts[ratio_bin(r.rho_f, bins) * bins + ratio_bin(r.rho_in, bins)];
        ++hist.total;
    }
    return hist;
}

}  // namespace misnet
