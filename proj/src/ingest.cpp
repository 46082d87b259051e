#include "misnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "misnet/csv.hpp"
#include "misnet/errors.hpp"
#include "misnet/parallel.hpp"

namespace misnet {

using json = nlohmann::json;

std::string_view to_string(Label label) noexcept {
    return label == Label::claim ? "claim" : "factcheck";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
    if (text == "claim") return Label::claim;
    if (text == "factcheck" || text == "fact-check") return Label::factcheck;
    return std::nullopt;
}

void SourceCatalog::validate() const {
    for (const auto& d : claim_domains) {
        if (factcheck_domains.count(d)) {
            throw std::invalid_argument("domain '" + d + "' is both a claim and a fact-check source");
        }
    }
    for (const auto& [from, to] : alias_map) {
        if (!claim_domains.count(to) && !factcheck_domains.count(to)) {
            throw std::invalid_argument("alias target '" + to + "' is not a catalog domain");
        }
    }
}

std::optional<Label> SourceCatalog::classify_host(std::string_view host) const {
    std::string candidate(host);
    while (!candidate.empty()) {
        if (claim_domains.count(candidate)) return Label::claim;
        if (factcheck_domains.count(candidate)) return Label::factcheck;
        const auto dot = candidate.find('.');
        if (dot == std::string::npos) break;
        candidate.erase(0, dot + 1);
    }
    return std::nullopt;
}

EventFormat detect_format(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return EventFormat::jsonl;
    return EventFormat::csv;
}

namespace {

struct RawRow {
    std::size_t line = 0;
    std::string raw;
    // Either fields are filled, or `error` explains why they could not be.
    std::string timestamp, retweeted, retweeter, url;
    std::string error;
};

struct RowOutcome {
    std::optional<RetweetEvent> event;
    std::optional<RejectedRecord> rejected;
};

RowOutcome classify_row(const RawRow& row, const SourceCatalog& catalog, const Canonicalizer& canon) {
    const auto reject = [&](std::string_view reason, std::string detail) {
        return RowOutcome{std::nullopt, RejectedRecord{row.line, std::string(reason), std::move(detail), row.raw}};
    };
    if (!row.error.empty()) return reject(kRejectParseError, row.error);
    const auto ts = parse_timestamp(row.timestamp);
    if (!ts) return reject(kRejectParseError, "bad timestamp '" + row.timestamp + "'");
    if (row.retweeted.empty() || row.retweeter.empty()) return reject(kRejectParseError, "empty account id");

    std::string link;
    std::string host;
    try {
        link = canon.canonicalize(row.url);
        host = url_host(link);
    } catch (const CanonicalizationError& e) {
        return reject(kRejectParseError, e.what());
    }
    const auto label = catalog.classify_host(host);
    if (!label) return reject(kRejectUnknownDomain, host);
    return RowOutcome{RetweetEvent{*ts, row.retweeted, row.retweeter, std::move(link), *label}, std::nullopt};
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<RawRow> read_csv_rows(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) return {};
    const auto& names = header->fields;
    const auto column = [&](std::string_view name) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (trim(names[i]) == name) return i;
        }
        throw InputError("CSV header lacks column '" + std::string(name) + "'");
    };
    const std::size_t c_ts = column("timestamp");
    const std::size_t c_src = column("retweeted_id");
    const std::size_t c_dst = column("retweeter_id");
    const std::size_t c_url = column("url");

    std::vector<RawRow> rows;
    while (auto rec = reader.next()) {
        RawRow row;
        row.line = rec->line;
        row.raw = rec->raw;
        if (rec->malformed) {
            row.error = "malformed quoting";
        } else if (rec->fields.size() != names.size()) {
            row.error = "expected " + std::to_string(names.size()) + " fields, found " +
                        std::to_string(rec->fields.size());
        } else {
            row.timestamp = rec->fields[c_ts];
            row.retweeted = trim(rec->fields[c_src]);
            row.retweeter = trim(rec->fields[c_dst]);
            row.url = rec->fields[c_url];
        }
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw InputError("read error while parsing events");
    return rows;
}

std::string json_scalar(const json& v, std::string_view key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    throw std::runtime_error("field '" + std::string(key) + "' must be a string or integer");
}

std::vector<RawRow> read_jsonl_rows(std::istream& in) {
    std::vector<RawRow> rows;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        RawRow row;
        row.line = line;
        row.raw = text;
        try {
            const json obj = json::parse(text);
            if (!obj.is_object()) throw std::runtime_error("record is not a JSON object");
            for (const char* key : {"timestamp", "retweeted_id", "retweeter_id", "url"}) {
                if (!obj.contains(key)) throw std::runtime_error(std::string("missing key '") + key + "'");
            }
            row.timestamp = json_scalar(obj["timestamp"], "timestamp");
            row.retweeted = json_scalar(obj["retweeted_id"], "retweeted_id");
            row.retweeter = json_scalar(obj["retweeter_id"], "retweeter_id");
            row.url = json_scalar(obj["url"], "url");
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw InputError("read error while parsing events");
    return rows;
}

}  // namespace

ParseResult parse_events(std::istream& in, EventFormat format, const SourceCatalog& catalog,
                         const Canonicalizer& canonicalizer, unsigned threads) {
    if (!in) throw InputError("event stream is not readable");
    const std::vector<RawRow> rows = format == EventFormat::csv ? read_csv_rows(in) : read_jsonl_rows(in);

    // Classify chunks in parallel, then concatenate by chunk index.
    std::vector<std::vector<RowOutcome>> chunks(chunk_count(rows.size(), threads));
    parallel_chunks(rows.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        auto& out = chunks[c];
        out.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) out.push_back(classify_row(rows[i], catalog, canonicalizer));
    });

    ParseResult result;
    result.rows = rows.size();
    for (auto& chunk : chunks) {
        for (auto& outcome : chunk) {
            if (outcome.event) {
                result.events.push_back(std::move(*outcome.event));
            } else {
                result.rejected.push_back(std::move(*outcome.rejected));
            }
        }
    }
    return result;
}

ParseResult parse_events_file(const std::filesystem::path& path, const SourceCatalog& catalog,
                              const Canonicalizer& canonicalizer, unsigned threads) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open event file '" + path.string() + "'");
    return parse_events(in, detect_format(path), catalog, canonicalizer, threads);
}

std::vector<RetweetEvent> filter_period(const std::vector<RetweetEvent>& events, Timestamp start,
                                        Timestamp end) {
    if (start > end) throw std::invalid_argument("period start is after its end");
    std::vector<RetweetEvent> out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [&](const RetweetEvent& e) { return e.timestamp >= start && e.timestamp < end; });
    return out;
}

namespace {

std::string lower_domain(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

IngestConfig load_ingest_config(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("catalog is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("catalog must be a JSON object");

    IngestConfig cfg;
    bool strip_given = false;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "claim_domains") {
                for (const auto& d : value) cfg.catalog.claim_domains.insert(lower_domain(d.get<std::string>()));
            } else if (key == "factcheck_domains") {
                for (const auto& d : value) cfg.catalog.factcheck_domains.insert(lower_domain(d.get<std::string>()));
            } else if (key == "domain_aliases") {
                for (const auto& [from, to] : value.items()) {
                    cfg.catalog.alias_map.emplace(lower_domain(from), lower_domain(to.get<std::string>()));
                }
                cfg.rules.domain_aliases = cfg.catalog.alias_map;
            } else if (key == "strip_params") {
                strip_given = true;
                cfg.rules.strip_params = value.get<std::vector<std::string>>();
            } else if (key == "redirect_map") {
                cfg.rules.redirect_map = value.get<std::map<std::string, std::string>>();
            } else {
                throw std::invalid_argument("unknown catalog key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed catalog value: ") + e.what());
    }
    if (!strip_given) cfg.rules.strip_params = CanonicalizationRules{}.strip_params;
    cfg.catalog.validate();
    Canonicalizer check(cfg.rules);  // validates rules
    return cfg;
}

IngestConfig load_ingest_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open catalog '" + path.string() + "'");
    return load_ingest_config(in);
}

void write_events_csv(std::ostream& out, const std::vector<RetweetEvent>& events) {
    out << "timestamp,retweeted_id,retweeter_id,url,label\n";
    for (const auto& e : events) {
        out << e.timestamp << ',' << csv::escape(e.retweeted) << ',' << csv::escape(e.retweeter) << ','
            << csv::escape(e.link) << ',' << to_string(e.label) << '\n';
    }
}

void write_rejected_csv(std::ostream& out, const std::vector<RejectedRecord>& rejected) {
    out << "line,reason,detail,record\n";
    for (const auto& r : rejected) {
        out << r.line << ',' << r.reason << ',' << csv::escape(r.detail) << ',' << csv::escape(r.raw) << '\n';
    }
}

}  // namespace misnet
