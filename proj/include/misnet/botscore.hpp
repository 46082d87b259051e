#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "misnet/kcore.hpp"
#include "misnet/random.hpp"

namespace misnet {

/// Per-account outcome: a score in [0,1] or an error message.
struct AccountScore {
    std::optional<double> score;
    std::string error;
};

/// A whole request failed. Transient failures are retried.
class ProviderError : public std::runtime_error {
public:
    ProviderError(const std::string& what, bool transient) : std::runtime_error(what), transient_(transient) {}
    bool transient() const noexcept { return transient_; }

private:
    bool transient_;
};

/// Batch scoring client. Implementations must be safe to call concurrently.
class ScoreProvider {
public:
    virtual ~ScoreProvider() = default;

    /// One result per requested account; accounts missing from the result
    /// count as failed. Throws ProviderError when the request fails as a whole.
    virtual std::map<std::string, AccountScore> score(std::span<const std::string> accounts) = 0;
};

/// Deterministic in-process provider for tests and dry runs.
class MockScoreProvider : public ScoreProvider {
public:
    using ScoreFn = std::function<std::optional<double>(const std::string&)>;

    explicit MockScoreProvider(ScoreFn fn) : fn_(std::move(fn)) {}

    /// Scores derived from a hash of the account id, uniform on [0,1).
    static MockScoreProvider hashed(std::uint64_t seed);

    std::map<std::string, AccountScore> score(std::span<const std::string> accounts) override;

private:
    ScoreFn fn_;
};

struct HttpProviderConfig {
    std::string endpoint;  // http://host[:port]/path
    std::string key;
    std::chrono::seconds timeout{30};
};

/// POSTs {"accounts": [...]} as JSON and expects an object mapping each id
/// to {"score": x} or {"error": "..."}. Connection failures, 429 and 5xx are
/// transient; other non-2xx statuses are not. The key travels in an
/// `Authorization: Bearer` header.
class HttpScoreProvider : public ScoreProvider {
public:
    explicit HttpScoreProvider(HttpProviderConfig config);

    std::map<std::string, AccountScore> score(std::span<const std::string> accounts) override;

private:
    HttpProviderConfig config_;
    std::string base_;  // scheme://host:port
    std::string path_;
};

/// Parses a provider response body. Scores outside [0,1] become errors.
std::map<std::string, AccountScore> parse_provider_response(const std::string& body);
std::string make_provider_request(std::span<const std::string> accounts);

/// Uniform sample without replacement of up to n_per_shell nodes from every
/// nonempty shell (whole shell when smaller). Throws std::invalid_argument
/// when n_per_shell is 0.
std::map<std::uint32_t, std::vector<NodeId>> sample_shells(const ShellIndex& shells, std::size_t n_per_shell,
                                                           Rng& rng);

struct ScoringOptions {
    std::size_t batch_size = 100;
    unsigned max_in_flight = 4;
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};  // doubles per retry
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

struct ShellScoreRow {
    std::uint32_t k = 0;
    std::optional<double> mean;
    std::optional<double> stderr_;
    std::size_t n_scored = 0;
    std::size_t n_failed = 0;
};

/// Raised when batches still fail after all retries. Carries the rows of
/// shells whose requests all completed.
class ProviderOutageError : public std::runtime_error {
public:
    ProviderOutageError(std::string what, std::vector<ShellScoreRow> completed)
        : std::runtime_error(std::move(what)), completed_(std::move(completed)) {}

    const std::vector<ShellScoreRow>& completed() const noexcept { return completed_; }

private:
    std::vector<ShellScoreRow> completed_;
};

/// Scores each shell's sample and averages per shell. Per-account failures
/// are counted and excluded from the mean.
std::vector<ShellScoreRow> shell_score_profile(const std::map<std::uint32_t, std::vector<std::string>>& samples,
                                               ScoreProvider& provider, const ScoringOptions& options = {});

}  // namespace misnet
