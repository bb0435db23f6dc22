#include <doctest.h>

#include <memory>
#include <string>
#include <thread>

#include <httplib.h>

#include "fcarepo/client.hpp"
#include "fcarepo/formats.hpp"
#include "mock_repo.hpp"
#include "testutil.hpp"

using fcarepo::FormalContext;
using fcarepo::RepoClient;
using fcarepo::RepoConfig;
using fcarepo::RepoError;
using testutil::CountingTransport;
using testutil::MockRepo;

namespace {

RepoConfig config_for(const MockRepo& repo, const testutil::TempDir& cache) {
    RepoConfig config;
    config.base_url = repo.base_url();
    config.cache_dir = cache.path();
    return config;
}

} // namespace

TEST_CASE("client configuration") {
    CHECK_THROWS_AS(RepoClient(RepoConfig{.base_url = "ftp://nope"}), fcarepo::Error);
    RepoConfig bad_timeout;
    bad_timeout.timeout_seconds = 0;
    CHECK_THROWS_AS(RepoClient{bad_timeout}, fcarepo::Error);
    CHECK(std::string(fcarepo::kDefaultBaseUrl).rfind("https://", 0) == 0);
}

TEST_CASE("load_dataset fetches, parses, and caches") {
    MockRepo repo;
    testutil::TempDir cache;
    RepoClient client(config_for(repo, cache));

    FormalContext fetched = client.load_dataset("livingbeings_en");
    FormalContext expected = fcarepo::parse_burmeister(repo.beings_text());
    CHECK(fetched == expected);
    CHECK(repo.hits() == 1);

    // name with extension resolves identically
    CHECK(client.load_dataset("livingbeings_en.cxt") == expected);

    // raw bytes are exactly the served file
    CHECK(client.fetch_raw("livingbeings_en") == repo.beings_text());
}

TEST_CASE("offline mode serves the cache and never touches the transport") {
    MockRepo repo;
    testutil::TempDir cache;
    {
        RepoClient warm(config_for(repo, cache));
        warm.load_dataset("livingbeings_en");
    }
    const int hits_before = repo.hits();

    auto counting = std::make_shared<CountingTransport>(fcarepo::default_transport());
    RepoConfig config = config_for(repo, cache);
    config.offline = true;
    RepoClient client(config, counting);

    FormalContext from_cache = client.load_dataset("livingbeings_en");
    CHECK(from_cache == fcarepo::parse_burmeister(repo.beings_text()));
    CHECK(counting->calls == 0);
    CHECK(repo.hits() == hits_before);

    // a cold name in offline mode is an error, still with no request
    CHECK_THROWS_AS(client.load_dataset("fcatools_en"), RepoError);
    CHECK(counting->calls == 0);
}

TEST_CASE("conditional requests revalidate with the stored etag") {
    MockRepo repo;
    testutil::TempDir cache;
    RepoClient client(config_for(repo, cache));
    client.load_dataset("livingbeings_en");
    CHECK(repo.hits() == 1);

    // second online call sends If-None-Match and the server answers 304
    FormalContext again = client.load_dataset("livingbeings_en");
    CHECK(again == fcarepo::parse_burmeister(repo.beings_text()));
    CHECK(repo.hits() == 2);
}

TEST_CASE("404 carries nearest-name suggestions") {
    MockRepo repo;
    testutil::TempDir cache;
    RepoClient client(config_for(repo, cache));
    try {
        client.load_dataset("livingbeing_en"); // missing final s
        FAIL("expected RepoError");
    } catch (const RepoError& e) {
        CHECK(e.kind() == RepoError::Kind::not_found);
        CHECK(e.status() == 404);
        REQUIRE_FALSE(e.suggestions().empty());
        CHECK(e.suggestions()[0] == "livingbeings_en");
        CHECK(std::string(e.what()).find("livingbeings_en") != std::string::npos);
    }
}

TEST_CASE("invalid names are rejected before any request") {
    MockRepo repo;
    testutil::TempDir cache;
    auto counting = std::make_shared<CountingTransport>(fcarepo::default_transport());
    RepoClient client(config_for(repo, cache), counting);
    try {
        client.load_dataset("Not A Name");
        FAIL("expected RepoError");
    } catch (const RepoError& e) {
        CHECK(e.kind() == RepoError::Kind::invalid_name);
    }
    CHECK(counting->calls == 0);
}

TEST_CASE("listing parses the remote index") {
    MockRepo repo;
    testutil::TempDir cache;
    RepoClient client(config_for(repo, cache));
    fcarepo::RepositoryIndex index = client.list_contexts();
    REQUIRE(index.entries.size() == 2);
    CHECK(index.entries[0].first == "livingbeings_en.cxt");
    CHECK(index.entries[0].second.title == "Living Beings and Water");
    CHECK(index.find("fcatools_en.cxt") != nullptr);
}

TEST_CASE("a payload that fails validation is not cached") {
    httplib::Server server;
    server.Get("/contexts/broken_en.cxt", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("this is not a context file", "text/plain");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    testutil::TempDir cache;
    RepoConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.cache_dir = cache.path();
    RepoClient client(config);
    CHECK_THROWS_AS(client.load_dataset("broken_en"), fcarepo::ParseError);
    CHECK_FALSE(std::filesystem::exists(cache.path() / "broken_en.cxt"));

    server.stop();
    thread.join();
}

TEST_CASE("http failures map to transport errors") {
    testutil::TempDir cache;
    RepoConfig config;
    // nothing listens on this port
    config.base_url = "http://127.0.0.1:1";
    config.cache_dir = cache.path();
    config.timeout_seconds = 2.0;
    RepoClient client(config);
    try {
        client.load_dataset("livingbeings_en");
        FAIL("expected RepoError");
    } catch (const RepoError& e) {
        CHECK(e.kind() == RepoError::Kind::network);
    }
}

TEST_CASE("server errors carry the status") {
    httplib::Server server;
    server.Get(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
        res.set_content("boom", "text/plain");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    testutil::TempDir cache;
    RepoConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.cache_dir = cache.path();
    RepoClient client(config);
    try {
        client.load_dataset("livingbeings_en");
        FAIL("expected RepoError");
    } catch (const RepoError& e) {
        CHECK(e.kind() == RepoError::Kind::http_status);
        CHECK(e.status() == 500);
    }

    server.stop();
    thread.join();
}
