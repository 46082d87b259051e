#include <httplib.h>

#include "misnet/botscore.hpp"

namespace misnet {

HttpScoreProvider::HttpScoreProvider(HttpProviderConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint;
    const auto sep = url.find("://");
    if (sep == std::string::npos || url.substr(0, sep) != "http") {
        throw std::invalid_argument("provider.endpoint must be an http:// URL, got '" + url + "'");
    }
    const auto path_start = url.find('/', sep + 3);
    base_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (base_.size() <= sep + 3) throw std::invalid_argument("provider.endpoint has no host");
}

std::map<std::string, AccountScore> HttpScoreProvider::score(std::span<const std::string> accounts) {
    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    httplib::Headers headers;
    if (!config_.key.empty()) headers.emplace("Authorization", "Bearer " + config_.key);

    auto res = client.Post(path_, headers, make_provider_request(accounts), "application/json");
    if (!res) throw ProviderError("request failed: " + httplib::to_string(res.error()), true);
    if (res->status == 429 || res->status >= 500) {
        throw ProviderError("provider returned HTTP " + std::to_string(res->status), true);
    }
    if (res->status < 200 || res->status >= 300) {
        throw ProviderError("provider returned HTTP " + std::to_string(res->status), false);
    }
    return parse_provider_response(res->body);
}

}  // namespace misnet
