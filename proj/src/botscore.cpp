#include "misnet/botscore.hpp"

#include <algorithm>
#include <thread>

#include <nlohmann/json.hpp>

#include "misnet/parallel.hpp"
#include "misnet/stats.hpp"

namespace misnet {

using json = nlohmann::json;

MockScoreProvider MockScoreProvider::hashed(std::uint64_t seed) {
    return MockScoreProvider([seed](const std::string& id) -> std::optional<double> {
        return static_cast<double>(mix_seed(seed, stable_hash(id)) >> 11) * 0x1.0p-53;
    });
}

std::map<std::string, AccountScore> MockScoreProvider::score(std::span<const std::string> accounts) {
    std::map<std::string, AccountScore> out;
    for (const auto& id : accounts) {
        if (auto s = fn_(id)) {
            out[id] = AccountScore{*s, {}};
        } else {
            out[id] = AccountScore{std::nullopt, "no score"};
        }
    }
    return out;
}

std::string make_provider_request(std::span<const std::string> accounts) {
    return json{{"accounts", std::vector<std::string>(accounts.begin(), accounts.end())}}.dump();
}

std::map<std::string, AccountScore> parse_provider_response(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unparseable provider response: ") + e.what(), false);
    }
    if (!doc.is_object()) throw ProviderError("provider response is not a JSON object", false);
    std::map<std::string, AccountScore> out;
    for (const auto& [id, entry] : doc.items()) {
        AccountScore result;
        if (entry.is_object() && entry.contains("score") && entry["score"].is_number()) {
            const double s = entry["score"].get<double>();
            if (s >= 0.0 && s <= 1.0) {
                result.score = s;
            } else {
                result.error = "score out of range";
            }
        } else if (entry.is_object() && entry.contains("error") && entry["error"].is_string()) {
            result.error = entry["error"].get<std::string>();
        } else {
            result.error = "malformed entry";
        }
        out.emplace(id, std::move(result));
    }
    return out;
}

std::map<std::uint32_t, std::vector<NodeId>> sample_shells(const ShellIndex& shells, std::size_t n_per_shell,
                                                           Rng& rng) {
    if (n_per_shell == 0) throw std::invalid_argument("n_per_shell must be at least 1");
    std::map<std::uint32_t, std::vector<NodeId>> by_shell;
    for (NodeId v = 0; v < shells.shell.size(); ++v) by_shell[shells.shell[v]].push_back(v);
    for (auto& [k, members] : by_shell) {
        if (members.size() <= n_per_shell) continue;
        // Partial Fisher-Yates: the first n positions become the sample.
        for (std::size_t i = 0; i < n_per_shell; ++i) {
            const std::size_t j = i + uniform_below(rng, members.size() - i);
            std::swap(members[i], members[j]);
        }
        members.resize(n_per_shell);
        std::sort(members.begin(), members.end());
    }
    return by_shell;
}

std::vector<ShellScoreRow> shell_score_profile(const std::map<std::uint32_t, std::vector<std::string>>& samples,
                                               ScoreProvider& provider, const ScoringOptions& options) {
    const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
    struct Batch {
        std::uint32_t k;
        std::span<const std::string> accounts;
        std::optional<std::map<std::string, AccountScore>> result;
        std::string failure;
    };
    std::vector<Batch> batches;
    for (const auto& [k, accounts] : samples) {
        for (std::size_t i = 0; i < accounts.size(); i += batch_size) {
            const std::size_t len = std::min(batch_size, accounts.size() - i);
            batches.push_back({k, std::span<const std::string>(accounts).subspan(i, len), std::nullopt, {}});
        }
    }

    const auto sleep = options.sleep ? options.sleep
                                     : std::function<void(std::chrono::milliseconds)>(
                                           [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); });

    parallel_tasks(batches.size(), options.max_in_flight, [&](std::size_t b) {
        Batch& batch = batches[b];
        auto backoff = options.initial_backoff;
        const int attempts = std::max(1, options.attempts);
        for (int attempt = 1; attempt <= attempts; ++attempt) {
            try {
                batch.result = provider.score(batch.accounts);
                return;
            } catch (const ProviderError& e) {
                batch.failure = e.what();
                if (!e.transient()) return;
            } catch (const std::exception& e) {
                batch.failure = e.what();
                return;
            }
            if (attempt < attempts) {
                sleep(backoff);
                backoff *= 2;
            }
        }
    });

    std::vector<ShellScoreRow> completed;
    std::size_t failed_shells = 0;
    std::string first_failure;
    for (const auto& [k, accounts] : samples) {
        bool complete = true;
        std::map<std::string, AccountScore> merged;
        for (auto& batch : batches) {
            if (batch.k != k) continue;
            if (!batch.result) {
                complete = false;
                if (first_failure.empty()) first_failure = batch.failure;
                continue;
            }
            merged.merge(*batch.result);
        }
        if (!complete) {
            ++failed_shells;
            continue;
        }
        ShellScoreRow row;
        row.k = k;
        std::vector<double> scores;
        for (const auto& id : accounts) {
            auto it = merged.find(id);
            if (it != merged.end() && it->second.score && *it->second.score >= 0.0 && *it->second.score <= 1.0) {
                scores.push_back(*it->second.score);
            } else {
                ++row.n_failed;
            }
        }
        row.n_scored = scores.size();
        if (!scores.empty()) {
            const auto me = mean_and_stderr(scores);
            row.mean = me.mean;
            row.stderr_ = me.stderr_;
        }
        completed.push_back(row);
    }
    if (failed_shells > 0) {
        throw ProviderOutageError("score provider failed for " + std::to_string(failed_shells) + " of " +
                                      std::to_string(samples.size()) + " shells: " + first_failure,
                                  std::move(completed));
    }
    return completed;
}

}  // namespace misnet
