#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "context.hpp"
#include "misnet/errors.hpp"

namespace misnet::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::int64_t parse_duration(const std::string& text) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || value <= 0) throw std::invalid_argument("bad duration '" + text + "'");
    const std::string unit(ptr, end);
    if (unit.empty() || unit == "s") return value;
    if (unit == "m") return value * 60;
    if (unit == "h") return value * 3600;
    if (unit == "d") return value * 86400;
    if (unit == "w") return value * 7 * 86400;
    throw std::invalid_argument("bad duration unit in '" + text + "'");
}

Context::Context(RunConfig config, std::string subcommand, std::string effective_config)
    : config_(std::move(config)), subcommand_(std::move(subcommand)),
      effective_config_(std::move(effective_config)), out_dir_(config_.out) {
    fs::create_directories(out_dir_);
}

void Context::write_output(const std::string& name, const std::string& content) {
    std::ofstream out(out_dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + (out_dir_ / name).string() + "'");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + (out_dir_ / name).string() + "'");
    outputs_[name] = sha256_hex(content);
}

void Context::record_input(const std::string& path) {
    if (!path.empty()) inputs_[path] = sha256_file(path);
}

const ParseResult& Context::events() {
    if (events_) return *events_;
    if (config_.input.empty()) throw std::invalid_argument("this subcommand needs --input (a retweet event log)");
    if (config_.catalog.empty()) throw std::invalid_argument("--catalog is required with --input");
    if (!fs::exists(config_.input)) throw InputError("input '" + config_.input + "' does not exist");
    if (!fs::exists(config_.catalog)) throw InputError("catalog '" + config_.catalog + "' does not exist");
    record_input(config_.input);
    record_input(config_.catalog);

    const IngestConfig ingest = load_ingest_config(fs::path(config_.catalog));
    const Canonicalizer canon(ingest.rules);
    ParseResult parsed = parse_events_file(config_.input, ingest.catalog, canon, config_.threads);

    if (!config_.from.empty() || !config_.to.empty()) {
        const auto start = config_.from.empty() ? std::optional<Timestamp>(INT64_MIN) : parse_timestamp(config_.from);
        const auto end = config_.to.empty() ? std::optional<Timestamp>(INT64_MAX) : parse_timestamp(config_.to);
        if (!start || !end) throw std::invalid_argument("--from/--to must be ISO-8601 or epoch seconds");
        parsed.events = filter_period(parsed.events, *start, *end);
    }
    std::stable_sort(parsed.events.begin(), parsed.events.end(),
                     [](const RetweetEvent& a, const RetweetEvent& b) { return a.timestamp < b.timestamp; });
    events_ = std::move(parsed);
    return *events_;
}

const DiffusionNetwork& Context::full_network() {
    if (network_) return *network_;
    if (!config_.network.empty()) {
        std::ifstream edges(config_.network, std::ios::binary);
        if (!edges) throw InputError("cannot open network '" + config_.network + "'");
        record_input(config_.network);
        std::optional<std::ifstream> links;
        if (!config_.links.empty()) {
            links.emplace(config_.links, std::ios::binary);
            if (!*links) throw InputError("cannot open link sidecar '" + config_.links + "'");
            record_input(config_.links);
        }
        network_ = read_network(edges, links ? &*links : nullptr);
    } else {
        auto built = build_network(events().events, derive_seed(config_.seed, "edge_ties"));
        build_report_ = built.report;
        network_ = std::move(built.network);
    }
    return *network_;
}

DiffusionNetwork Context::network_for(const std::string& keep) {
    const DiffusionNetwork& full = full_network();
    if (keep == "all") return full;
    const auto label = parse_label(keep);
    if (!label) throw std::invalid_argument("--keep must be all, claim or factcheck");
    return filter_by_label(full, *label).network;
}

void Context::finish() {
    // The echo omits the output directory so reruns into different
    // directories stay byte-identical.
    std::istringstream lines(effective_config_);
    std::string echoed, line;
    while (std::getline(lines, line)) {
        if (line.rfind("out=", 0) == 0 || line.rfind("config=", 0) == 0) continue;
        if (line.rfind("provider.key=", 0) == 0 && !config_.provider_key.empty()) line = "provider.key=\"<redacted>\"";
        echoed += line + "\n";
    }
    write_output("config.ini", echoed);

    json manifest;
    manifest["tool"] = "misnet";
    manifest["version"] = MISNET_VERSION;
    manifest["subcommand"] = subcommand_;
    manifest["seed"] = config_.seed;
    manifest["parameters"] = json::object();
    auto& params = manifest["parameters"];
    params["bins"] = config_.bins;
    params["heatmap_k"] = config_.heatmap_k;
    params["damping"] = config_.damping;
    params["tolerance"] = config_.tolerance;
    params["max_iter"] = config_.max_iter;
    params["pagerank_reverse"] = config_.pagerank_reverse;
    params["top_n"] = config_.top_n;
    params["step"] = config_.step;
    params["window"] = config_.window;
    params["n_samples"] = config_.n_samples;
    params["alpha"] = config_.alpha;
    params["swaps_per_edge"] = config_.swaps_per_edge;
    params["null_stride"] = config_.null_stride;
    params["n_per_shell"] = config_.n_per_shell;
    params["provider"] = config_.provider;
    params["max_removed"] = config_.max_removed;
    params["from"] = config_.from;
    params["to"] = config_.to;
    manifest["inputs"] = json::array();
    for (const auto& [path, sum] : inputs_) manifest["inputs"].push_back({{"path", path}, {"sha256", sum}});
    manifest["outputs"] = json::array();
    for (const auto& [name, sum] : outputs_) manifest["outputs"].push_back({{"file", name}, {"sha256", sum}});
    manifest["notes"] = notes_;

    const std::string text = manifest.dump(2) + "\n";
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("failed writing manifest.json");
}

}  // namespace misnet::cli
