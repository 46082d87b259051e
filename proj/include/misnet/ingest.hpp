#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "misnet/timeutil.hpp"

namespace misnet {

enum class Label : std::uint8_t { claim, factcheck };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

/// Registered domains of claim sources and fact-checking organizations.
struct SourceCatalog {
    std::set<std::string> claim_domains;
    std::set<std::string> factcheck_domains;
    std::map<std::string, std::string> alias_map;

    /// Throws std::invalid_argument when the two domain sets overlap or an
    /// alias points outside them.
    void validate() const;

    /// Label of the most specific catalog domain that equals `host` or is a
    /// parent of it (`blog.snopes.com` matches `snopes.com`).
    std::optional<Label> classify_host(std::string_view host) const;
};

struct CanonicalizationRules {
    /// Query parameter names to drop. A trailing `*` matches by prefix.
    std::vector<std::string> strip_params{"utm_*"};
    /// Pre-resolved redirects. Keys may omit the scheme (`bit.ly/abc`).
    std::map<std::string, std::string> redirect_map;
    std::map<std::string, std::string> domain_aliases;
};

/// Compiled form of CanonicalizationRules. Construction validates the rules
/// (std::invalid_argument on bad tokens or redirect cycles).
class Canonicalizer {
public:
    explicit Canonicalizer(CanonicalizationRules rules);

    /// Resolves redirects, strips tracking parameters, lowercases and
    /// de-aliases the host, drops the fragment. Idempotent.
    /// Throws CanonicalizationError on unparseable input.
    std::string canonicalize(std::string_view url) const;

    const CanonicalizationRules& rules() const noexcept { return rules_; }

private:
    std::string apply_once(std::string_view url) const;
    bool strip(std::string_view param_name) const;

    CanonicalizationRules rules_;
    std::map<std::string, std::string, std::less<>> redirects_;
};

std::string canonicalize_url(std::string_view url, const CanonicalizationRules& rules);

/// Lowercased host of an absolute URL (no port). Throws CanonicalizationError.
std::string url_host(std::string_view url);

struct RetweetEvent {
    Timestamp timestamp = 0;
    std::string retweeted;  // primary spreader
    std::string retweeter;  // secondary spreader
    std::string link;       // canonical URL
    Label label = Label::claim;

    friend bool operator==(const RetweetEvent&, const RetweetEvent&) = default;
};

inline constexpr std::string_view kRejectUnknownDomain = "unknown_domain";
inline constexpr std::string_view kRejectParseError = "parse_error";

struct RejectedRecord {
    std::size_t line = 0;
    std::string reason;
    std::string detail;
    std::string raw;
};

struct ParseResult {
    std::vector<RetweetEvent> events;
    std::vector<RejectedRecord> rejected;
    std::size_t rows = 0;
};

enum class EventFormat { csv, jsonl };

/// `.jsonl`, `.ndjson` and `.json` select JSON lines, everything else CSV.
EventFormat detect_format(const std::filesystem::path& path);

/// Parses line-delimited retweet records. Bad rows are rejected individually
/// and never abort the batch; output preserves input order. Throws InputError
/// when the stream is unreadable or a CSV header lacks required columns.
ParseResult parse_events(std::istream& in, EventFormat format, const SourceCatalog& catalog,
                         const Canonicalizer& canonicalizer, unsigned threads = 1);

ParseResult parse_events_file(const std::filesystem::path& path, const SourceCatalog& catalog,
                              const Canonicalizer& canonicalizer, unsigned threads = 1);

/// Events with start <= timestamp < end. Throws std::invalid_argument if start > end.
std::vector<RetweetEvent> filter_period(const std::vector<RetweetEvent>& events, Timestamp start,
                                        Timestamp end);

struct IngestConfig {
    SourceCatalog catalog;
    CanonicalizationRules rules;
};

/// Reads the JSON catalog file (`claim_domains`, `factcheck_domains`,
/// `domain_aliases`, `strip_params`, `redirect_map`). Unknown keys are an
/// error. Throws InputError or std::invalid_argument.
IngestConfig load_ingest_config(std::istream& in);
IngestConfig load_ingest_config(const std::filesystem::path& path);

void write_events_csv(std::ostream& out, const std::vector<RetweetEvent>& events);
void write_rejected_csv(std::ostream& out, const std::vector<RejectedRecord>& rejected);

}  // namespace misnet
