#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "misnet/graph.hpp"
#include "misnet/ingest.hpp"
#include "misnet/parallel.hpp"

namespace misnet::cli {

struct RunConfig {
    std::string input;
    std::string network;
    std::string links;
    std::string catalog;
    std::string from;
    std::string to;
    std::string out = "misnet-out";
    std::uint64_t seed = 1;
    unsigned threads = default_threads();
    std::string keep;  // empty: per-subcommand default

    std::size_t bins = 20;
    std::vector<std::uint32_t> heatmap_k;

    double damping = 0.85;
    double tolerance = 1e-10;
    int max_iter = 200;
    bool pagerank_reverse = false;
    std::size_t top_n = 10;

    std::string step = "1d";
    std::string window = "7d";
    std::size_t n_samples = 100;
    double alpha = 0.05;
    double swaps_per_edge = 10.0;
    std::size_t null_stride = 1;

    std::size_t n_per_shell = 2000;
    std::string provider = "mock";
    std::string provider_endpoint;
    std::string provider_key;
    std::size_t batch_size = 100;
    unsigned max_in_flight = 4;
    int retry_attempts = 3;
    int backoff_ms = 1000;

    std::size_t max_removed = 1000;
};

/// State shared by the subcommands of one run.
class Context {
public:
    Context(RunConfig config, std::string subcommand, std::string effective_config);

    const RunConfig& config() const noexcept { return config_; }
    const std::filesystem::path& out_dir() const noexcept { return out_dir_; }

    /// Writes `content` to out_dir/name and records it for the manifest.
    void write_output(const std::string& name, const std::string& content);

    /// Accepted events (period-filtered, stably sorted by time).
    const ParseResult& events();
    bool has_events() const noexcept { return !config_.input.empty(); }

    /// Full labeled network, from --network or built from events.
    const DiffusionNetwork& full_network();
    const std::optional<BuildReport>& build_report() const noexcept { return build_report_; }

    /// full_network() restricted to an edge label, or itself for "all".
    DiffusionNetwork network_for(const std::string& keep);

    nlohmann::json& notes() { return notes_; }

    /// Writes config echo and manifest.json listing every output.
    void finish();

private:
    void record_input(const std::string& path);

    RunConfig config_;
    std::string subcommand_;
    std::string effective_config_;
    std::filesystem::path out_dir_;
    std::optional<ParseResult> events_;
    std::optional<DiffusionNetwork> network_;
    std::optional<BuildReport> build_report_;
    std::map<std::string, std::string> outputs_;  // name -> sha256
    std::map<std::string, std::string> inputs_;   // path -> sha256
    nlohmann::json notes_ = nlohmann::json::object();
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// "90", "90s", "15m", "6h", "1d", "2w" -> seconds. Throws std::invalid_argument.
std::int64_t parse_duration(const std::string& text);

// Subcommands. Each writes its outputs through the context.
void cmd_ingest(Context& ctx);
void cmd_build(Context& ctx);
void cmd_kcore(Context& ctx, const std::string& keep);
void cmd_metrics(Context& ctx, const std::string& keep);
void cmd_centrality(Context& ctx, const std::string& keep);
void cmd_temporal(Context& ctx, const std::string& keep);
void cmd_botscore(Context& ctx, const std::string& keep);
void cmd_robustness(Context& ctx, const std::string& keep);

}  // namespace misnet::cli
