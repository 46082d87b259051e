#include <gtest/gtest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "misnet/botscore.hpp"
#include "support/test_support.hpp"

namespace misnet {
namespace {

ShellIndex shells_of_sizes(const std::vector<std::size_t>& sizes) {
    ShellIndex s;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        for (std::size_t i = 0; i < sizes[k]; ++i) s.shell.push_back(static_cast<std::uint32_t>(k + 1));
    }
    s.k_max = static_cast<std::uint32_t>(sizes.size());
    return s;
}

std::map<std::uint32_t, std::vector<std::string>> named_samples(const std::map<std::uint32_t, std::vector<NodeId>>& ids) {
    std::map<std::uint32_t, std::vector<std::string>> out;
    for (const auto& [k, nodes] : ids) {
        for (NodeId v : nodes) out[k].push_back(testing::node_name(v));
    }
    return out;
}

ScoringOptions no_sleep() {
    ScoringOptions opt;
    opt.sleep = [](std::chrono::milliseconds) {};
    return opt;
}

TEST(SampleShells, SmallShellIsTakenWhole) {
    Rng rng(1);
    const auto s = sample_shells(shells_of_sizes({5}), 2000, rng);
    EXPECT_EQ(s.at(1).size(), 5u);
}

TEST(SampleShells, LargeShellGivesExactDistinctSample) {
    Rng rng(2);
    const auto s = sample_shells(shells_of_sizes({10000, 30}), 2000, rng);
    const auto& big = s.at(1);
    EXPECT_EQ(big.size(), 2000u);
    EXPECT_EQ(std::set<NodeId>(big.begin(), big.end()).size(), 2000u);
    for (NodeId v : big) EXPECT_LT(v, 10000u);
    EXPECT_EQ(s.at(2).size(), 30u);
}

TEST(SampleShells, SameSeedSameSample) {
    Rng a(7), b(7), c(8);
    const auto shells = shells_of_sizes({500, 500});
    EXPECT_EQ(sample_shells(shells, 50, a), sample_shells(shells, 50, b));
    EXPECT_NE(sample_shells(shells, 50, a), sample_shells(shells, 50, c));
    EXPECT_THROW(sample_shells(shells, 0, a), std::invalid_argument);
}

TEST(SampleShells, EmptyShellsAreSkipped) {
    ShellIndex s;
    s.shell = {1, 1, 3};
    s.k_max = 3;
    Rng rng(1);
    const auto out = sample_shells(s, 10, rng);
    EXPECT_EQ(out.size(), 2u);
    EXPECT_FALSE(out.count(2));
}

TEST(ShellProfile, GradientMock) {
    const auto shells = shells_of_sizes({40, 30, 20, 10});
    Rng rng(3);
    const auto samples = named_samples(sample_shells(shells, 100, rng));
    // Accounts in the top shell score 0.9, everyone else 0.1.
    std::set<std::string> core;
    for (NodeId v : shells.core_nodes(4)) core.insert(testing::node_name(v));
    MockScoreProvider mock([&](const std::string& id) -> std::optional<double> { return core.count(id) ? 0.9 : 0.1; });
    const auto rows = shell_score_profile(samples, mock, no_sleep());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_DOUBLE_EQ(*rows[0].mean, 0.1);
    EXPECT_DOUBLE_EQ(*rows[3].mean, 0.9);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(*rows[i].mean + 1e-12, *rows[i - 1].mean);
}

TEST(ShellProfile, FlatMock) {
    const auto samples = named_samples({{1, {0, 1, 2}}, {2, {3, 4}}});
    MockScoreProvider mock([](const std::string&) -> std::optional<double> { return 0.5; });
    for (const auto& row : shell_score_profile(samples, mock, no_sleep())) {
        EXPECT_DOUBLE_EQ(*row.mean, 0.5);
        EXPECT_DOUBLE_EQ(*row.stderr_, 0.0);
    }
}

TEST(ShellProfile, PerAccountFailureIsExcluded) {
    const std::map<std::uint32_t, std::vector<std::string>> samples{{1, {"x", "y", "z"}}};
    MockScoreProvider mock([](const std::string& id) -> std::optional<double> {
        if (id == "x") return 0.2;
        if (id == "y") return 0.4;
        return std::nullopt;
    });
    const auto rows = shell_score_profile(samples, mock, no_sleep());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(*rows[0].mean, 0.3);
    EXPECT_EQ(rows[0].n_scored, 2u);
    EXPECT_EQ(rows[0].n_failed, 1u);
}

TEST(ShellProfile, HashedMockIsDeterministic) {
    auto a = MockScoreProvider::hashed(5);
    auto b = MockScoreProvider::hashed(5);
    const std::vector<std::string> ids{"a", "b", "c"};
    const auto ra = a.score(ids), rb = b.score(ids);
    for (const auto& id : ids) {
        EXPECT_EQ(ra.at(id).score, rb.at(id).score);
        EXPECT_GE(*ra.at(id).score, 0.0);
        EXPECT_LT(*ra.at(id).score, 1.0);
    }
}

/// Fails the first `failures` calls with a transient error.
class FlakyProvider : public ScoreProvider {
public:
    FlakyProvider(int failures, bool transient) : failures_(failures), transient_(transient) {}
    std::map<std::string, AccountScore> score(std::span<const std::string> accounts) override {
        if (calls_++ < failures_) throw ProviderError("boom", transient_);
        std::map<std::string, AccountScore> out;
        for (const auto& a : accounts) out[a].score = 0.25;
        return out;
    }
    int calls() const { return calls_; }

private:
    std::atomic<int> calls_{0};
    int failures_;
    bool transient_;
};

TEST(Retry, TransientFailuresBackOffThenSucceed) {
    FlakyProvider flaky(2, true);
    std::vector<std::chrono::milliseconds> waits;
    ScoringOptions opt;
    opt.max_in_flight = 1;
    opt.initial_backoff = std::chrono::milliseconds(100);
    opt.sleep = [&](std::chrono::milliseconds d) { waits.push_back(d); };
    const auto rows = shell_score_profile({{1, {"a", "b"}}}, flaky, opt);
    EXPECT_EQ(rows[0].mean, 0.25);
    EXPECT_EQ(flaky.calls(), 3);
    EXPECT_EQ(waits, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                             std::chrono::milliseconds(200)}));
}

TEST(Retry, NonTransientFailureIsNotRetried) {
    FlakyProvider flaky(1, false);
    ScoringOptions opt = no_sleep();
    opt.max_in_flight = 1;
    EXPECT_THROW(shell_score_profile({{1, {"a"}}}, flaky, opt), ProviderOutageError);
    EXPECT_EQ(flaky.calls(), 1);
}

TEST(Retry, OutageCarriesCompletedShells) {
    class PartialProvider : public ScoreProvider {
    public:
        std::map<std::string, AccountScore> score(std::span<const std::string> accounts) override {
            if (accounts.front().starts_with("bad")) throw ProviderError("down", true);
            std::map<std::string, AccountScore> out;
            for (const auto& a : accounts) out[a].score = 0.5;
            return out;
        }
    } provider;
    const std::map<std::uint32_t, std::vector<std::string>> samples{{1, {"ok1", "ok2"}}, {2, {"bad1"}}};
    try {
        shell_score_profile(samples, provider, no_sleep());
        FAIL() << "expected ProviderOutageError";
    } catch (const ProviderOutageError& e) {
        ASSERT_EQ(e.completed().size(), 1u);
        EXPECT_EQ(e.completed()[0].k, 1u);
    }
}

TEST(Batching, RequestsRespectBatchSize) {
    class Recorder : public ScoreProvider {
    public:
        std::map<std::string, AccountScore> score(std::span<const std::string> accounts) override {
            std::lock_guard lock(mu);
            sizes.push_back(accounts.size());
            std::map<std::string, AccountScore> out;
            for (const auto& a : accounts) out[a].score = 0.0;
            return out;
        }
        std::mutex mu;
        std::vector<std::size_t> sizes;
    } rec;
    std::vector<std::string> ids;
    for (int i = 0; i < 25; ++i) ids.push_back("u" + std::to_string(i));
    ScoringOptions opt = no_sleep();
    opt.batch_size = 10;
    opt.max_in_flight = 3;
    const auto rows = shell_score_profile({{1, ids}}, rec, opt);
    EXPECT_EQ(rows[0].n_scored, 25u);
    std::sort(rec.sizes.begin(), rec.sizes.end());
    EXPECT_EQ(rec.sizes, (std::vector<std::size_t>{5, 10, 10}));
}

TEST(WireFormat, RequestAndResponse) {
    const std::vector<std::string> ids{"a", "b"};
    EXPECT_EQ(nlohmann::json::parse(make_provider_request(ids)), nlohmann::json({{"accounts", {"a", "b"}}}));
    const auto parsed = parse_provider_response(R"({"a": {"score": 0.7}, "b": {"error": "suspended"},
                                                    "c": {"score": 1.5}})");
    EXPECT_EQ(parsed.at("a").score, 0.7);
    EXPECT_FALSE(parsed.at("b").score);
    EXPECT_EQ(parsed.at("b").error, "suspended");
    EXPECT_FALSE(parsed.at("c").score);
    EXPECT_THROW(parse_provider_response("[1,2]"), ProviderError);
}

class LocalServer {
public:
    explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/score", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/score"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

TEST(Http, ScoresAndSendsKey) {
    std::string seen_auth;
    LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        nlohmann::json out = nlohmann::json::object();
        const auto request = nlohmann::json::parse(req.body);
        for (const auto& id : request.at("accounts")) {
            out[id.get<std::string>()] = {{"score", 0.125}};
        }
        res.set_content(out.dump(), "application/json");
    });
    HttpScoreProvider provider({server.endpoint(), "sekrit", std::chrono::seconds(5)});
    const std::vector<std::string> ids{"a", "b"};
    const auto out = provider.score(ids);
    EXPECT_EQ(out.at("a").score, 0.125);
    EXPECT_EQ(out.at("b").score, 0.125);
    EXPECT_EQ(seen_auth, "Bearer sekrit");
}

TEST(Http, StatusClassification) {
    std::atomic<int> status{503};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        res.status = status.load();
        res.set_content("{}", "application/json");
    });
    HttpScoreProvider provider({server.endpoint(), "", std::chrono::seconds(5)});
    const std::vector<std::string> ids{"a"};
    for (int code : {429, 500, 503}) {
        status = code;
        try {
            provider.score(ids);
            FAIL();
        } catch (const ProviderError& e) {
            EXPECT_TRUE(e.transient()) << code;
        }
    }
    status = 401;
    try {
        provider.score(ids);
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_FALSE(e.transient());
    }
}

TEST(Http, RejectsNonHttpEndpoint) {
    EXPECT_THROW(HttpScoreProvider({"https://example.org/x", "", std::chrono::seconds(1)}), std::invalid_argument);
    EXPECT_THROW(HttpScoreProvider({"example.org", "", std::chrono::seconds(1)}), std::invalid_argument);
}

}  // namespace
}  // namespace misnet
