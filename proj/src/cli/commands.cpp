#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "context.hpp"
#include "misnet/botscore.hpp"
#include "misnet/centrality.hpp"
#include "misnet/csv.hpp"
#include "misnet/kcore.hpp"
#include "misnet/metrics.hpp"
#include "misnet/robustness.hpp"
#include "misnet/temporal.hpp"

namespace misnet::cli {

using json = nlohmann::json;
using csv::format_double;
using csv::format_optional;

namespace {

PageRankOptions pagerank_options(const RunConfig& cfg) {
    PageRankOptions opt;
    opt.damping = cfg.damping;
    opt.tolerance = cfg.tolerance;
    opt.max_iter = cfg.max_iter;
    opt.reverse = cfg.pagerank_reverse;
    opt.threads = cfg.threads;
    return opt;
}

json network_counts(const DiffusionNetwork& net) {
    std::size_t fact = 0;
    for (const auto& e : net.edges()) fact += e.label == Label::factcheck;
    const EdgeWeights w = net.total_weights();
    return {{"nodes", net.node_count()},
            {"edges", net.edge_count()},
            {"factcheck_edges", fact},
            {"claim_retweets", w.claim},
            {"factcheck_retweets", w.factcheck}};
}

}  // namespace

void cmd_ingest(Context& ctx) {
    const ParseResult& parsed = ctx.events();
    std::ostringstream ev, rej;
    write_events_csv(ev, parsed.events);
    write_rejected_csv(rej, parsed.rejected);
    ctx.write_output("events.csv", ev.str());
    ctx.write_output("rejected.csv", rej.str());

    std::map<std::string, std::size_t> reasons;
    for (const auto& r : parsed.rejected) ++reasons[r.reason];
    std::size_t claims = 0;
    for (const auto& e : parsed.events) claims += e.label == Label::claim;
    ctx.notes()["ingest"] = {{"rows", parsed.rows},
                             {"accepted_in_period", parsed.events.size()},
                             {"rejected", parsed.rejected.size()},
                             {"rejected_by_reason", reasons},
                             {"claim_events", claims},
                             {"factcheck_events", parsed.events.size() - claims}};
}

void cmd_build(Context& ctx) {
    const DiffusionNetwork& net = ctx.full_network();
    std::ostringstream edges, links, nodes;
    write_edge_list(edges, net);
    write_link_sidecar(links, net);
    write_node_index(nodes, net);
    ctx.write_output("edges.csv", edges.str());
    ctx.write_output("links.csv", links.str());
    ctx.write_output("nodes.csv", nodes.str());

    json report;
    report["network"] = network_counts(net);
    report["claim_only"] = network_counts(filter_by_label(net, Label::claim).network);
    if (const auto& br = ctx.build_report()) {
        report["events"] = br->events;
        report["self_loops_skipped"] = br->self_loops_skipped;
        report["mixed_edges"] = br->mixed_edges;
        report["mixed_edge_fraction"] = br->mixed_fraction();
        report["tied_edges"] = br->tied_edges;
    }
    ctx.write_output("build_report.json", report.dump(2) + "\n");
    ctx.notes()["build"] = report;
}

void cmd_kcore(Context& ctx, const std::string& keep) {
    const DiffusionNetwork net = ctx.network_for(keep);
    const ShellIndex shells = decompose(net);
    std::ostringstream out;
    out << "node,shell\n";
    for (NodeId v = 0; v < net.node_count(); ++v) out << csv::escape(net.node_name(v)) << ',' << shells.shell[v] << '\n';
    ctx.write_output("shells.csv", out.str());

    const std::size_t main_size = net.empty() ? 0 : shells.core_size(shells.k_max);
    std::ostringstream summary;
    summary << "k_max,main_core_size,nodes,edges\n"
            << shells.k_max << ',' << main_size << ',' << net.node_count() << ',' << net.edge_count() << '\n';
    ctx.write_output("kcore_summary.csv", summary.str());
    ctx.notes()["kcore"] = {{"network", keep}, {"k_max", shells.k_max}, {"main_core_size", main_size}};
}

void cmd_metrics(Context& ctx, const std::string& keep) {
    const RunConfig& cfg = ctx.config();
    const DiffusionNetwork net = ctx.network_for(keep);
    const ShellIndex shells = decompose(net);

    std::ostringstream ratios_csv;
    ratios_csv << "node,shell,s_in,s_out,s_c,s_f,rho_f,rho_in\n";
    for (NodeId v = 0; v < net.node_count(); ++v) {
        const StrengthVector s = strengths(net, v);
        ratios_csv << csv::escape(net.node_name(v)) << ',' << shells.shell[v] << ',' << s.s_in << ',' << s.s_out << ','
                   << s.s_c << ',' << s.s_f << ',';
        if (s.s > 0) {
            const RatioPoint r = ratios(s);
            ratios_csv << format_double(r.rho_f) << ',' << format_double(r.rho_in);
        } else {
            ratios_csv << ',';
        }
        ratios_csv << '\n';
    }
    ctx.write_output("ratios.csv", ratios_csv.str());

    std::ostringstream profile;
    profile << "k,nodes,in_mean,in_stderr,in_n,out_mean,out_stderr,out_n,in_pooled,out_pooled\n";
    for (const auto& row : shell_factcheck_profile(net, shells)) {
        profile << row.k << ',' << row.nodes << ',' << format_optional(row.in_mean) << ','
                << format_optional(row.in_stderr) << ',' << row.in_n << ',' << format_optional(row.out_mean) << ','
                << format_optional(row.out_stderr) << ',' << row.out_n << ',' << format_optional(row.in_pooled)
                << ',' << format_optional(row.out_pooled) << '\n';
    }
    ctx.write_output("shell_profile.csv", profile.str());

    std::vector<std::uint32_t> ks = cfg.heatmap_k;
    if (ks.empty() && !net.empty()) ks.push_back(shells.k_max);
    for (std::uint32_t k : ks) {
        if (k > shells.k_max) throw std::invalid_argument("--heatmap-k " + std::to_string(k) + " exceeds k_max");
        const RatioHistogram h = joint_ratio_histogram(net, shells, k, cfg.bins);
        std::ostringstream out;
        out << "rho_f_lo,rho_f_hi,rho_in_lo,rho_in_hi,count\n";
        const double width = 1.0 / static_cast<double>(h.bins);
        for (std::size_t i = 0; i < h.bins; ++i) {
            for (std::size_t j = 0; j < h.bins; ++j) {
                out << format_double(i * width) << ',' << format_double(i + 1 == h.bins ? 1.0 : (i + 1) * width) << ','
                    << format_double(j * width) << ',' << format_double(j + 1 == h.bins ? 1.0 : (j + 1) * width) << ','
                    << h.at(i, j) << '\n';
            }
        }
        ctx.write_output("heatmap_k" + std::to_string(k) + ".csv", out.str());
    }
    ctx.notes()["metrics"] = {
        {"network", keep},
        {"in_ratio", "mean over nodes with s_in > 0 of (fact-check weight on incoming edges) / s_in"},
        {"out_ratio", "mean over nodes with s_out > 0 of (fact-check weight on outgoing edges) / s_out"},
        {"pooled", "per shell sum of fact-check weight / sum of strength in that direction"},
        {"heatmap", "nodes of the k-core with s > 0, strengths measured inside the k-core"},
        {"heatmap_k", ks}};
}

void cmd_centrality(Context& ctx, const std::string& keep) {
    const RunConfig& cfg = ctx.config();
    const DiffusionNetwork net = ctx.network_for(keep);
    const CentralityTable table = rank_table(net, pagerank_options(cfg));

    std::ostringstream out;
    out << "node,s_in,s_out,pagerank,betweenness,rank_sin,rank_sout,rank_pr,rank_bt\n";
    for (NodeId v = 0; v < net.node_count(); ++v) {
        out << csv::escape(net.node_name(v)) << ',' << format_double(table.score(Metric::s_in)[v]) << ','
            << format_double(table.score(Metric::s_out)[v]) << ',' << format_double(table.score(Metric::pagerank)[v])
            << ',' << format_double(table.score(Metric::betweenness)[v]) << ',' << table.rank(Metric::s_in)[v] << ','
            << table.rank(Metric::s_out)[v] << ',' << table.rank(Metric::pagerank)[v] << ','
            << table.rank(Metric::betweenness)[v] << '\n';
    }
    ctx.write_output("centrality.csv", out.str());

    const ShellIndex shells = decompose(net);
    const std::vector<NodeId> core = net.empty() ? std::vector<NodeId>{} : shells.shell_nodes(shells.k_max);
    if (!core.empty()) {
        std::ostringstream summary;
        summary << "metric,mean_rank,stderr,n\n";
        for (const auto& row : core_rank_summary(table, core)) {
            summary << to_string(row.metric) << ',' << format_double(row.mean_rank) << ','
                    << format_double(row.stderr_) << ',' << row.n << '\n';
        }
        ctx.write_output("core_rank_summary.csv", summary.str());
    }

    std::ostringstream top;
    top << "metric,rank_in_core,node,score,global_rank\n";
    std::vector<std::string> union_ids;
    for (Metric m : kAllMetrics) {
        const auto best = table.top(m, cfg.top_n, core);
        for (std::size_t i = 0; i < best.size(); ++i) {
            top << to_string(m) << ',' << i + 1 << ',' << csv::escape(net.node_name(best[i])) << ','
                << format_double(table.score(m)[best[i]]) << ',' << table.rank(m)[best[i]] << '\n';
            union_ids.push_back(net.node_name(best[i]));
        }
    }
    std::sort(union_ids.begin(), union_ids.end());
    union_ids.erase(std::unique(union_ids.begin(), union_ids.end()), union_ids.end());
    ctx.write_output("top_central.csv", top.str());

    ctx.notes()["centrality"] = {{"network", keep},
                                 {"pagerank", {{"damping", cfg.damping},
                                               {"tolerance", cfg.tolerance},
                                               {"max_iter", cfg.max_iter},
                                               {"weighted", true},
                                               {"direction", cfg.pagerank_reverse ? "reverse" : "information-flow"}}},
                                 {"betweenness", {{"weighted", false}, {"directed", true}, {"normalized", false}}},
                                 {"ties", "descending score, then ascending node id"},
                                 {"main_core_k", shells.k_max},
                                 {"main_core_size", core.size()},
                                 {"top_n_union", union_ids.size()}};
}

void cmd_temporal(Context& ctx, const std::string& keep) {
    const RunConfig& cfg = ctx.config();
    const Timestamp step = parse_duration(cfg.step);
    const Timestamp window = parse_duration(cfg.window);
    if (window < step) throw std::invalid_argument("--window must be at least --step");
    if (cfg.null_stride == 0) throw std::invalid_argument("--null-stride must be positive");

    std::vector<RetweetEvent> events;
    if (keep == "all") {
        events = ctx.events().events;
    } else {
        const auto label = parse_label(keep);
        if (!label) throw std::invalid_argument("--keep must be all, claim or factcheck");
        for (const auto& e : ctx.events().events) {
            if (e.label == *label) events.push_back(e);
        }
    }
    const std::uint64_t tie_seed = derive_seed(cfg.seed, "edge_ties");
    const std::uint64_t null_seed = derive_seed(cfg.seed, "null_model");

    NullBandOptions band_opt;
    band_opt.n_samples = cfg.n_samples;
    band_opt.alpha = cfg.alpha;
    band_opt.swaps_per_edge = cfg.swaps_per_edge;
    band_opt.threads = cfg.threads;

    std::vector<TrajectoryPoint> points;
    std::ostringstream band_csv;
    band_csv << "time,timestamp,k_max,null_mean,null_lower,null_upper,n_samples\n";
    const auto cuts = snapshot_cutoffs(events, step);
    std::size_t index = 0;
    for_each_snapshot(events, step, tie_seed, [&](const Snapshot& snap) {
        points.push_back(measure_core(snap.time, snap.network));
        const bool last = index + 1 == cuts.size();
        if (index % cfg.null_stride == 0 || last) {
            const NullBand band = null_kmax_band(undirected_projection(snap.network), band_opt, mix_seed(null_seed, index));
            band_csv << format_timestamp(snap.time) << ',' << snap.time << ',' << points.back().k_max << ','
                     << format_double(band.mean) << ',' << format_double(band.lower) << ','
                     << format_double(band.upper) << ',' << band.n_samples << '\n';
        }
        ++index;
    });
    smooth_trajectory(points, window);

    std::ostringstream traj;
    traj << "time,timestamp,k_max,core_size,smoothed_k_max,smoothed_core_size\n";
    for (const auto& p : points) {
        traj << format_timestamp(p.time) << ',' << p.time << ',' << p.k_max << ',' << p.core_size << ','
             << format_double(p.smoothed_k_max) << ',' << format_double(p.smoothed_core_size) << '\n';
    }
    ctx.write_output("trajectory.csv", traj.str());
    ctx.write_output("null_band.csv", band_csv.str());

    const auto monthly = monthly_main_cores(events, tie_seed);
    std::vector<NodeSet> cores;
    for (const auto& [t, core] : monthly) cores.push_back(core);
    std::ostringstream churn_csv;
    churn_csv << "month_end,timestamp,core_size,jaccard_churn,relative_churn\n";
    const auto churn = cores.size() >= 2 ? churn_rate(cores) : std::vector<ChurnPoint>{};
    for (std::size_t i = 0; i < monthly.size(); ++i) {
        churn_csv << format_timestamp(monthly[i].first) << ',' << monthly[i].first << ',' << monthly[i].second.size()
                  << ',';
        if (i > 0) churn_csv << format_optional(churn[i - 1].jaccard) << ',' << format_optional(churn[i - 1].relative);
        else churn_csv << ',';
        churn_csv << '\n';
    }
    ctx.write_output("churn.csv", churn_csv.str());

    std::ostringstream stable;
    const NodeSet stable_set = cores.empty() ? NodeSet{} : stable_core(cores);
    for (const auto& id : stable_set) stable << id << '\n';
    ctx.write_output("stable_core.txt", stable.str());

    ctx.notes()["temporal"] = {{"events", keep},
                               {"snapshots", points.size()},
                               {"months", monthly.size()},
                               {"stable_core_size", stable_set.size()},
                               {"churn", "jaccard: 1 - |prev and cur| / |prev or cur|; relative: 1 - |prev and cur| / |prev|"},
                               {"null_quantiles", "nearest-rank"}};
}

void cmd_botscore(Context& ctx, const std::string& keep) {
    const RunConfig& cfg = ctx.config();
    const DiffusionNetwork net = ctx.network_for(keep);
    const ShellIndex shells = decompose(net);
    Rng rng(derive_seed(cfg.seed, "shell_sample"));
    const auto samples = sample_shells(shells, cfg.n_per_shell, rng);

    std::map<std::uint32_t, std::vector<std::string>> accounts;
    std::ostringstream sample_csv;
    sample_csv << "k,node\n";
    for (const auto& [k, ids] : samples) {
        auto& names = accounts[k];
        for (NodeId v : ids) {
            names.push_back(net.node_name(v));
            sample_csv << k << ',' << csv::escape(net.node_name(v)) << '\n';
        }
    }
    ctx.write_output("bot_samples.csv", sample_csv.str());

    std::unique_ptr<ScoreProvider> provider;
    if (cfg.provider == "mock") {
        provider = std::make_unique<MockScoreProvider>(MockScoreProvider::hashed(derive_seed(cfg.seed, "mock_provider")));
    } else if (cfg.provider == "http") {
        if (cfg.provider_endpoint.empty()) throw std::invalid_argument("provider.endpoint is required for --provider http");
        provider = std::make_unique<HttpScoreProvider>(HttpProviderConfig{cfg.provider_endpoint, cfg.provider_key});
    } else {
        throw std::invalid_argument("--provider must be mock or http");
    }

    ScoringOptions opt;
    opt.batch_size = cfg.batch_size;
    opt.max_in_flight = cfg.max_in_flight;
    opt.attempts = cfg.retry_attempts;
    opt.initial_backoff = std::chrono::milliseconds(cfg.backoff_ms);

    const auto write_profile = [&](const std::vector<ShellScoreRow>& rows) {
        std::ostringstream out;
        out << "k,mean,stderr,n_scored,n_failed\n";
        for (const auto& r : rows) {
            out << r.k << ',' << format_optional(r.mean) << ',' << format_optional(r.stderr_) << ',' << r.n_scored
                << ',' << r.n_failed << '\n';
        }
        ctx.write_output("bot_profile.csv", out.str());
    };
    ctx.notes()["botscore"] = {{"network", keep}, {"provider", cfg.provider}, {"n_per_shell", cfg.n_per_shell}};
    try {
        write_profile(shell_score_profile(accounts, *provider, opt));
    } catch (const ProviderOutageError& e) {
        write_profile(e.completed());
        ctx.notes()["botscore"]["outage"] = e.what();
        throw;
    }
}

void cmd_robustness(Context& ctx, const std::string& keep) {
    const RunConfig& cfg = ctx.config();
    const DiffusionNetwork net = ctx.network_for(keep);
    const StrategyComparison cmp =
        compare_strategies(net, std::span<const Metric>(kAllMetrics), cfg.max_removed, pagerank_options(cfg));
    for (const auto& [metric, curve] : cmp.curves) {
        std::ostringstream out;
        out << "n_removed,frac_retweets,frac_unique_links\n";
        for (const auto& p : curve.points) {
            out << p.n_removed << ',' << format_double(p.frac_retweets) << ',' << format_optional(p.frac_unique_links)
                << '\n';
        }
        ctx.write_output("robustness_" + std::string(to_string(metric)) + ".csv", out.str());
    }
    std::ostringstream summary;
    summary << "n_removed,best_retweets,best_unique_links\n";
    for (std::size_t i = 0; i < cmp.grid.size(); ++i) {
        summary << cmp.grid[i] << ',' << to_string(cmp.best_retweets[i]) << ',' << to_string(cmp.best_links[i]) << '\n';
    }
    ctx.write_output("robustness_summary.csv", summary.str());
    ctx.notes()["robustness"] = {{"network", keep},
                                 {"ranking", "static, computed once on the intact network"},
                                 {"denominator", "claim retweets and distinct claim links"},
                                 {"steps", cmp.grid.size()}};
}

}  // namespace misnet::cli
