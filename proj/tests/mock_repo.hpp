#pragma once

// Loopback HTTP server serving the fixture repository, plus a transport
// decorator that counts outgoing requests.  Shared by the unit tests and the
// acceptance runner.

#include <atomic>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>

#include "fcarepo/client.hpp"
#include "testutil.hpp"

namespace testutil {

class MockRepo {
  public:
    MockRepo() {
        index_ = read_file(data_dir() / "repo" / "contexts.yaml");
        beings_ = read_file(data_dir() / "repo" / "contexts" / "livingbeings_en.cxt");
        tools_ = read_file(data_dir() / "repo" / "contexts" / "fcatools_en.cxt");
        server_.Get("/contexts.yaml", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            respond(req, res, index_, "\"index-v1\"");
        });
        server_.Get("/contexts/livingbeings_en.cxt",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        ++hits_;
                        respond(req, res, beings_, "\"beings-v1\"");
                    });
        server_.Get("/contexts/fcatools_en.cxt",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        ++hits_;
                        respond(req, res, tools_, "\"tools-v1\"");
                    });
        server_.Get(R"(/contexts/.*)", [this](const httplib::Request&, httplib::Response& res) {
            ++hits_;
            res.status = 404;
            res.set_content("not here", "text/plain");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw std::runtime_error("mock repo: no free port");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockRepo() {
        server_.stop();
        thread_.join();
    }

    MockRepo(const MockRepo&) = delete;
    MockRepo& operator=(const MockRepo&) = delete;

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int hits() const { return hits_.load(); }
    const std::string& beings_text() const { return beings_; }

  private:
    void respond(const httplib::Request& req, httplib::Response& res, const std::string& body,
                 const std::string& etag) {
        if (req.get_header_value("If-None-Match") == etag) {
            res.status = 304;
            return;
        }
        res.set_header("ETag", etag);
        res.set_content(body, "text/plain; charset=utf-8");
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
    std::string index_;
    std::string beings_;
    std::string tools_;
};

class CountingTransport : public fcarepo::HttpTransport {
  public:
    explicit CountingTransport(std::shared_ptr<fcarepo::HttpTransport> inner)
        : inner_(std::move(inner)) {}

    fcarepo::HttpResponse get(const std::string& url,
                              const std::vector<std::pair<std::string, std::string>>& headers,
                              double timeout_seconds) override {
        ++calls;
        return inner_->get(url, headers, timeout_seconds);
    }

    int calls = 0;

  private:
    std::shared_ptr<fcarepo::HttpTransport> inner_;
};

} // namespace testutil
