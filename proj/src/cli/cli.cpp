#include "cli.hpp"

#include <CLI11.hpp>

#include <ostream>

#include "context.hpp"
#include "misnet/botscore.hpp"
#include "misnet/errors.hpp"

namespace misnet::cli {

namespace {

std::string env_name(const std::string& flag) {
    std::string out = "MISNET_";
    for (char c : flag) {
        out.push_back(c == '-' || c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

template <typename T>
CLI::Option* option(CLI::App& app, const std::string& name, T& target, const std::string& help) {
    return app.add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

void register_options(CLI::App& app, RunConfig& cfg) {
    option(app, "input", cfg.input, "Retweet event log (CSV or JSON lines)");
    option(app, "network", cfg.network, "Edge list (src,dst,w_c,w_f,label) instead of --input");
    option(app, "links", cfg.links, "Link sidecar for --network");
    option(app, "catalog", cfg.catalog, "Source catalog and canonicalization rules (JSON)");
    option(app, "from", cfg.from, "Keep events at or after this time");
    option(app, "to", cfg.to, "Keep events before this time");
    option(app, "seed", cfg.seed, "Master seed for every random draw");
    option(app, "out", cfg.out, "Output directory");
    option(app, "threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    option(app, "keep", cfg.keep, "Edge label to analyze: all, claim or factcheck")
        ->check(CLI::IsMember({"", "all", "claim", "factcheck"}));

    option(app, "bins", cfg.bins, "Heat-map bins per axis")->check(CLI::Range(2, 1000));
    option(app, "heatmap-k", cfg.heatmap_k, "Cores to histogram (default: main core)");

    option(app, "damping", cfg.damping, "PageRank damping factor")->check(CLI::Range(0.0, 1.0));
    option(app, "tolerance", cfg.tolerance, "PageRank L1 tolerance");
    option(app, "max-iter", cfg.max_iter, "PageRank iteration cap")->check(CLI::PositiveNumber);
    option(app, "pagerank-reverse", cfg.pagerank_reverse, "Walk against the information flow");
    option(app, "top-n", cfg.top_n, "Main-core accounts listed per metric");

    option(app, "step", cfg.step, "Snapshot step (e.g. 1d)");
    option(app, "window", cfg.window, "Rolling-mean window (e.g. 7d)");
    option(app, "n-samples", cfg.n_samples, "Configuration-model replicates")->check(CLI::Range(2, 1000000));
    option(app, "alpha", cfg.alpha, "Null band is the (alpha/2, 1-alpha/2) interval")->check(CLI::Range(0.0, 1.0));
    option(app, "swaps-per-edge", cfg.swaps_per_edge, "Double-edge swap attempts per edge");
    option(app, "null-stride", cfg.null_stride, "Compute the null band every N snapshots");

    option(app, "n-per-shell", cfg.n_per_shell, "Accounts sampled per shell")->check(CLI::PositiveNumber);
    option(app, "provider", cfg.provider, "Bot-score provider: mock or http")->check(CLI::IsMember({"mock", "http"}));
    option(app, "provider.endpoint", cfg.provider_endpoint, "Provider URL (http://host:port/path)");
    option(app, "provider.key", cfg.provider_key, "Provider API key");
    option(app, "batch-size", cfg.batch_size, "Accounts per provider request")->check(CLI::PositiveNumber);
    option(app, "max-in-flight", cfg.max_in_flight, "Concurrent provider requests")->check(CLI::PositiveNumber);
    option(app, "retry-attempts", cfg.retry_attempts, "Attempts per provider request")->check(CLI::PositiveNumber);
    option(app, "backoff-ms", cfg.backoff_ms, "Initial retry backoff in milliseconds");

    option(app, "max-removed", cfg.max_removed, "Robustness: nodes to disconnect");
}

struct Subcommand {
    const char* name;
    const char* help;
    const char* default_keep;
};

constexpr Subcommand kSubcommands[] = {
    {"ingest", "Parse and canonicalize an event log", "all"},
    {"build", "Build the labeled diffusion network", "all"},
    {"kcore", "k-core decomposition (shells.csv)", "all"},
    {"metrics", "Strengths, ratios, shell profile and heat maps", "all"},
    {"centrality", "Centrality table, main-core rank summary, top lists", "claim"},
    {"temporal", "Core trajectory, null band, churn and stable core", "claim"},
    {"botscore", "Bot-score profile by shell", "claim"},
    {"robustness", "Node-disconnection curves", "claim"},
    {"report", "Run every analysis into one directory", ""},
};

void dispatch(Context& ctx, const std::string& name, const std::string& keep_flag) {
    const auto keep = [&](const char* fallback) { return keep_flag.empty() ? std::string(fallback) : keep_flag; };
    if (name == "ingest") return cmd_ingest(ctx);
    if (name == "build") return cmd_build(ctx);
    if (name == "kcore") return cmd_kcore(ctx, keep("all"));
    if (name == "metrics") return cmd_metrics(ctx, keep("all"));
    if (name == "centrality") return cmd_centrality(ctx, keep("claim"));
    if (name == "temporal") return cmd_temporal(ctx, keep("claim"));
    if (name == "botscore") return cmd_botscore(ctx, keep("claim"));
    if (name == "robustness") return cmd_robustness(ctx, keep("claim"));

    // report: --keep is ignored so every analysis uses its own network.
    if (ctx.has_events()) cmd_ingest(ctx);
    cmd_build(ctx);
    cmd_kcore(ctx, "all");
    cmd_metrics(ctx, "all");
    cmd_centrality(ctx, "claim");
    cmd_robustness(ctx, "claim");
    if (ctx.has_events()) {
        cmd_temporal(ctx, "claim");
    } else {
        ctx.notes()["temporal"] = "skipped: needs a timestamped event log (--input)";
    }
    cmd_botscore(ctx, "claim");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"misnet: diffusion-network anatomy of claim and fact-check retweets"};
    app.set_version_flag("--version", MISNET_VERSION);
    app.set_config("--config", "", "Key-value configuration file (INI/TOML)");
    app.get_config_formatter_base()->parentSeparator('/');
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    RunConfig cfg;
    register_options(app, cfg);
    for (const auto& sub : kSubcommands) app.add_subcommand(sub.name, sub.help)->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << MISNET_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "misnet: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Context ctx(cfg, name, app.config_to_str(true, false));
        int status = kExitOk;
        try {
            dispatch(ctx, name, cfg.keep);
        } catch (const ProviderOutageError& e) {
            err << "misnet: " << e.what() << " (partial results written)\n";
            status = kExitProviderOutage;
        }
        ctx.finish();
        if (status == kExitOk) out << "misnet " << name << ": wrote " << ctx.out_dir().string() << '\n';
        return status;
    } catch (const InputError& e) {
        err << "misnet: input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "misnet: invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "misnet: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace misnet::cli
