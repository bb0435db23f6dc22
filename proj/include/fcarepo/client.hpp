#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcarepo/context.hpp"
#include "fcarepo/errors.hpp"
#include "fcarepo/metadata.hpp"

namespace fcarepo {

/// Raw-file root of the public repository.
inline constexpr const char* kDefaultBaseUrl =
    "https://raw.githubusercontent.com/fcatools/contexts/main";

struct RepoConfig {
    std::string base_url = kDefaultBaseUrl;
    std::filesystem::path cache_dir; // empty: resolved from the environment
    bool offline = false;
    double timeout_seconds = 30.0;
    double max_age_seconds = 24.0 * 60.0 * 60.0; // staleness bound without a validator

    /// Defaults with `FCAREPO_BASE_URL` and `FCAREPO_CACHE_DIR` applied.
    static RepoConfig from_environment();
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers; // keys lowercased
};

/// Single-call HTTP GET abstraction; the default implementation speaks
/// HTTP/1.1 over plain or TLS sockets.  Tests substitute counting or canned
/// transports.  Implementations throw RepoError (kind network) when no
/// response is obtained at all.
class HttpTransport {
  public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& url,
                             const std::vector<std::pair<std::string, std::string>>& headers,
                             double timeout_seconds) = 0;
};

std::shared_ptr<HttpTransport> default_transport();

/// Client over one repository: listing via the index, fetching context files,
/// and a validating local cache.  Cache entries are written only after the
/// payload parses; writes go to a temporary file first, then rename.  In
/// offline mode no network request is ever made.
class RepoClient {
  public:
    explicit RepoClient(RepoConfig config, std::shared_ptr<HttpTransport> transport = nullptr);

    /// Fetches and parses `<base_url>/contexts.yaml`, caching the raw bytes.
    RepositoryIndex list_contexts();

    /// Fetches `<base_url>/contexts/<stem>.cxt` and returns the parsed
    /// context.  `name` is the stem, with or without the ".cxt" extension.
    /// A 404 carries nearest-name suggestions from the index.
    FormalContext load_dataset(const std::string& name);

    /// As load_dataset but returns the exact file bytes (still validated
    /// before any cache write).
    std::string fetch_raw(const std::string& name);

    const RepoConfig& config() const { return config_; }

  private:
    struct Cached {
        std::string content;
        std::string etag;
        std::string last_modified;
        long long fetched_at = 0; // unix seconds
    };

    std::string fetch_resource(const std::string& url, const std::string& cache_name,
                               bool is_index, const std::string& display_name);
    std::optional<Cached> read_cache(const std::string& cache_name) const;
    void write_cache(const std::string& cache_name, const std::string& content,
                     const std::string& etag, const std::string& last_modified) const;
    void validate_payload(const std::string& bytes, bool is_index,
                          const std::string& display_name) const;
    std::vector<std::string> suggestions_for(const std::string& stem);

    RepoConfig config_;
    std::shared_ptr<HttpTransport> transport_;
};

// One-call conveniences mirroring the client methods.
RepositoryIndex list_contexts(const RepoConfig& config);
FormalContext load_dataset(const std::string& name, const RepoConfig& config);
std::string fetch_raw(const std::string& name, const RepoConfig& config);

} // namespace fcarepo
