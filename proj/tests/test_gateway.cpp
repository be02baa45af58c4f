#include "hcdht/gateway.hpp"
#include "hcdht/network.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>
#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <thread>

using namespace hcdht;

namespace {

constexpr std::uint16_t kDaemonPort = 21900;

using Contents = std::map<std::string, std::string, std::less<>>;

/// Minimal stand-in for a storage daemon's cat endpoint.
class FakeDaemon {
public:
    explicit FakeDaemon(std::map<std::string, std::string> files) : files_(std::move(files)) {
        server_.Post("/api/v0/cat", [this](const httplib::Request& req, httplib::Response& res) {
            const std::string cid = req.get_param_value("arg");
            if (cid == "explode") {
                res.status = 503;
                return;
            }
            auto it = files_.find(cid);
            if (it == files_.end()) {
                res.status = 500;
                res.set_content(R"({"Message":"block was not found locally","Code":0})", "application/json");
                return;
            }
            res.set_content(it->second, "application/octet-stream");
        });
        REQUIRE(server_.bind_to_port("127.0.0.1", kDaemonPort));
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeDaemon() { stop(); }

    void stop() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

private:
    std::map<std::string, std::string> files_;
    httplib::Server server_;
    std::thread thread_;
};

const std::string kDaemonUrl = "http://127.0.0.1:" + std::to_string(kDaemonPort);

}  // namespace

TEST_SUITE("base64") {
    TEST_CASE("round trip") {
        for (const std::string& s : std::vector<std::string>{"", "h", "he", "hel", "hello", std::string("\0\xff\x10", 3)}) {
            CHECK(base64_decode(base64_encode(s)) == s);
        }
        CHECK(base64_encode("hello") == "aGVsbG8=");
        CHECK_THROWS_AS(base64_decode("abc"), Error);
        CHECK_THROWS_AS(base64_decode("a*c="), Error);
    }
}

TEST_SUITE("mock resolver") {
    TEST_CASE("seeded map lookup") {
        const MockResolver mock(Contents{{"cid1", "hello"}});
        CHECK(mock.resolve("cid1") == std::optional<std::string>("hello"));
        CHECK_FALSE(mock.resolve("unknown").has_value());
        CHECK_THROWS_AS(mock.resolve(""), InvalidRecord);
    }

    TEST_CASE("seed file maps cid to base64 bytes") {
        const std::string path = "gateway_seed_test.json";
        {
            std::ofstream out(path);
            out << R"({"cid1": "aGVsbG8=", "cid2": ""})";
        }
        const MockResolver mock = MockResolver::from_json_file(path);
        std::remove(path.c_str());
        CHECK(mock.resolve("cid1") == std::optional<std::string>("hello"));
        CHECK(mock.resolve("cid2") == std::optional<std::string>(""));
        CHECK_THROWS_AS(MockResolver::from_json("[1,2]"), Error);
        CHECK_THROWS_AS(MockResolver::from_json_file("/nonexistent/seed.json"), Error);
    }
}

TEST_SUITE("daemon resolver") {
    TEST_CASE("cat endpoint") {
        FakeDaemon daemon({{"QmHello", "hello bytes"}, {"Qm/odd?&", "odd"}});
        const DaemonResolver resolver(kDaemonUrl, 2);
        CHECK(resolver.resolve("QmHello") == std::optional<std::string>("hello bytes"));
        CHECK(resolver.resolve("Qm/odd?&") == std::optional<std::string>("odd"));
        CHECK_FALSE(resolver.resolve("QmMissing").has_value());
        CHECK_THROWS_AS(resolver.resolve("explode"), GatewayUnavailable);
    }

    TEST_CASE("stopped daemon is unavailable, not missing") {
        {
            FakeDaemon daemon({});
        }
        const DaemonResolver resolver(kDaemonUrl, 1);
        CHECK_THROWS_AS(resolver.resolve("QmHello"), GatewayUnavailable);
        CHECK_THROWS_AS(DaemonResolver("not a url").resolve("x"), GatewayUnavailable);
    }
}

TEST_SUITE("pin search with content") {
    struct Fixture {
        Network net{[] {
            NetworkConfig cfg;
            cfg.r = 4;
            return cfg;
        }()};
        KeywordSet keys{"alpha", "beta"};
        NodeId start = NodeId::zero(Dimension(4));
    };

    TEST_CASE_FIXTURE(Fixture, "empty result gives an empty list") {
        CHECK(pin_search_with_content(net.engine(), start, keys, MockResolver{}).empty());
    }

    TEST_CASE_FIXTURE(Fixture, "found and missing entries") {
        net.engine().insert(start, ObjectRecord("cid-a", keys));
        net.engine().insert(start, ObjectRecord("cid-b", keys));
        const MockResolver mock(Contents{{"cid-a", "bytes of a"}});
        const auto out = pin_search_with_content(net.engine(), start, keys, mock);
        REQUIRE(out.size() == 2);
        CHECK(out[0].cid == "cid-a");
        CHECK(out[0].status == ResolveStatus::Found);
        CHECK(out[0].bytes == std::optional<std::string>("bytes of a"));
        CHECK(out[1].cid == "cid-b");
        CHECK(out[1].status == ResolveStatus::NotFound);
        CHECK_FALSE(out[1].bytes.has_value());
    }

    TEST_CASE_FIXTURE(Fixture, "unreachable daemon does not fail the query") {
        net.engine().insert(start, ObjectRecord("cid-a", keys));
        const DaemonResolver down(kDaemonUrl, 1);
        const auto out = pin_search_with_content(net.engine(), start, keys, down);
        REQUIRE(out.size() == 1);
        CHECK(out[0].status == ResolveStatus::Unavailable);
    }

    TEST_CASE("results are identical with and without a resolver") {
        NetworkConfig cfg;
        cfg.r = 5;
        Network net(cfg);
        const auto records = net.populate(300, 21);
        Contents contents;
        for (std::size_t i = 0; i < records.size(); i += 2) contents.emplace(records[i].cid, "x");
        const MockResolver mock(std::move(contents));
        Rng rng(2);
        for (int q = 0; q < 100; ++q) {
            const NodeId start = NodeId::from_index(Dimension(5), rng.below(32));
            const KeywordSet k = records[rng.below(records.size())].keywords;
            const auto plain = net.engine().pin_search(start, k);
            const auto resolved = pin_search_with_content(net.engine(), start, k, mock);
            REQUIRE(resolved.size() == plain.cids.size());
            for (std::size_t i = 0; i < resolved.size(); ++i) CHECK(resolved[i].cid == plain.cids[i]);
        }
    }
}
