#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "misnet/errors.hpp"
#include "misnet/ingest.hpp"

namespace misnet {

namespace {

struct UrlParts {
    std::string scheme;
    std::string userinfo;  // includes trailing '@' when present
    std::string host;
    std::string port;      // includes leading ':' when present
    std::string path;
    std::string query;     // without '?'
    bool has_query = false;

    std::string render() const {
        std::string out = scheme + "://" + userinfo + host + port + path;
        if (has_query) out += "?" + query;
        return out;
    }

    std::string redirect_key() const {
        std::string out = host + port + path;
        if (has_query) out += "?" + query;
        return out;
    }
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool valid_host_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
}

// Fragment is parsed and discarded.
UrlParts parse_url(std::string_view url) {
    const auto fail = [&](const char* why) { return CanonicalizationError(std::string(url), why); };

    std::string_view s = url;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

    const auto sep = s.find("://");
    if (sep == std::string_view::npos || sep == 0) throw fail("missing scheme");
    UrlParts parts;
    parts.scheme = lower(s.substr(0, sep));
    if (!std::isalpha(static_cast<unsigned char>(parts.scheme[0]))) throw fail("bad scheme");
    for (char c : parts.scheme) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
            throw fail("bad scheme");
        }
    }
    s.remove_prefix(sep + 3);

    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);

    const auto auth_end = s.find_first_of("/?");
    std::string_view authority = s.substr(0, auth_end);
    std::string_view rest = auth_end == std::string_view::npos ? std::string_view{} : s.substr(auth_end);

    if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
        parts.userinfo = std::string(authority.substr(0, at + 1));
        authority.remove_prefix(at + 1);
    }
    if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        std::string_view port = authority.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw fail("bad port");
        }
        if (!port.empty()) parts.port = ":" + std::string(port);
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) throw fail("empty host");
    if (!std::all_of(authority.begin(), authority.end(), valid_host_char)) throw fail("bad host");
    parts.host = lower(authority);
    while (!parts.host.empty() && parts.host.back() == '.') parts.host.pop_back();
    if (parts.host.empty()) throw fail("empty host");

    const auto q = rest.find('?');
    parts.path = std::string(rest.substr(0, q));
    if (q != std::string_view::npos) {
        parts.has_query = true;
        parts.query = std::string(rest.substr(q + 1));
    }
    return parts;
}

// Redirect keys and lookups share one form: host[:port]path[?query].
std::string normalize_redirect_key(std::string_view key) {
    if (key.find("://") == std::string_view::npos) return parse_url("http://" + std::string(key)).redirect_key();
    return parse_url(key).redirect_key();
}

bool valid_param_token(std::string_view token) {
    if (token.empty() || token == "*") return false;
    for (std::size_t i = 0; i < token.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(token[i]);
        if (c == '*' && i + 1 == token.size()) continue;
        if (c > 127 || !std::isgraph(c) || c == '&' || c == '=' || c == '*') return false;
    }
    return true;
}

}  // namespace

Canonicalizer::Canonicalizer(CanonicalizationRules rules) : rules_(std::move(rules)) {
    for (auto& p : rules_.strip_params) {
        if (!valid_param_token(p)) throw std::invalid_argument("invalid strip parameter '" + p + "'");
        p = lower(p);
    }
    std::map<std::string, std::string> aliases;
    for (const auto& [from, to] : rules_.domain_aliases) {
        if (from.empty() || to.empty()) throw std::invalid_argument("empty domain alias");
        aliases.emplace(lower(from), lower(to));
    }
    rules_.domain_aliases = std::move(aliases);

    for (const auto& [from, to] : rules_.redirect_map) {
        try {
            parse_url(to);
            redirects_.emplace(normalize_redirect_key(from), to);
        } catch (const CanonicalizationError& e) {
            throw std::invalid_argument(std::string("invalid redirect entry: ") + e.what());
        }
    }
    // Acyclic under repeated lookup.
    for (const auto& [start, target] : redirects_) {
        std::string key = start;
        std::size_t steps = 0;
        for (auto it = redirects_.find(key); it != redirects_.end(); it = redirects_.find(key)) {
            if (++steps > redirects_.size()) {
                throw std::invalid_argument("redirect map has a cycle through '" + start + "'");
            }
            key = parse_url(it->second).redirect_key();
        }
    }
}

bool Canonicalizer::strip(std::string_view param_name) const {
    const std::string name = lower(param_name);
    for (const auto& p : rules_.strip_params) {
        if (p.back() == '*') {
            if (name.compare(0, p.size() - 1, p, 0, p.size() - 1) == 0) return true;
        } else if (name == p) {
            return true;
        }
    }
    return false;
}

std::string Canonicalizer::apply_once(std::string_view url) const {
    UrlParts parts = parse_url(url);

    // Redirect chains terminate: cycles are rejected at construction.
    for (auto it = redirects_.find(parts.redirect_key()); it != redirects_.end();
         it = redirects_.find(parts.redirect_key())) {
        parts = parse_url(it->second);
    }

    if (parts.has_query) {
        std::string kept;
        std::size_t pos = 0;
        const std::string& q = parts.query;
        while (pos <= q.size()) {
            std::size_t amp = q.find('&', pos);
            if (amp == std::string::npos) amp = q.size();
            const std::string_view param(q.data() + pos, amp - pos);
            if (!param.empty() && !strip(param.substr(0, param.find('=')))) {
                if (!kept.empty()) kept.push_back('&');
                kept.append(param);
            }
            pos = amp + 1;
        }
        parts.query = std::move(kept);
        parts.has_query = !parts.query.empty();
    }

    const auto& aliases = rules_.domain_aliases;
    if (auto it = aliases.find(parts.host); it != aliases.end()) {
        parts.host = it->second;
    } else {
        for (std::size_t dot = parts.host.find('.'); dot != std::string::npos;
             dot = parts.host.find('.', dot + 1)) {
            if (auto parent = aliases.find(parts.host.substr(dot + 1)); parent != aliases.end()) {
                parts.host = parts.host.substr(0, dot + 1) + parent->second;
                break;
            }
        }
    }
    return parts.render();
}

std::string Canonicalizer::canonicalize(std::string_view url) const {
    // Alias rewriting can expose another redirect key, so iterate the whole
    // pipeline to a fixed point; this is what makes the result idempotent.
    std::string current = apply_once(url);
    for (int round = 0; round < 32; ++round) {
        std::string next = apply_once(current);
        if (next == current) return current;
        current = std::move(next);
    }
    throw CanonicalizationError(std::string(url), "rules do not reach a fixed point");
}

std::string canonicalize_url(std::string_view url, const CanonicalizationRules& rules) {
    return Canonicalizer(rules).canonicalize(url);
}

std::string url_host(std::string_view url) { return parse_url(url).host; }

}  // namespace misnet
