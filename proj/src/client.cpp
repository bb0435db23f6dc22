#include "fcarepo/client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "fcarepo/formats.hpp"

namespace fcarepo {

namespace fs = std::filesystem;

RepoConfig RepoConfig::from_environment() {
    RepoConfig config;
    if (const char* base = std::getenv("FCAREPO_BASE_URL"); base && *base) {
        config.base_url = base;
    }
    if (const char* cache = std::getenv("FCAREPO_CACHE_DIR"); cache && *cache) {
        config.cache_dir = cache;
    }
    return config;
}

namespace {

fs::path resolve_cache_dir(const RepoConfig& config) {
    if (!config.cache_dir.empty()) return config.cache_dir;
    if (const char* dir = std::getenv("FCAREPO_CACHE_DIR"); dir && *dir) return dir;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return fs::path(xdg) / "fcarepo";
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return fs::path(home) / ".cache" / "fcarepo";
    }
    return fs::path(".fcarepo-cache");
}

std::string strip_cxt_extension(std::string name) {
    constexpr std::string_view ext = ".cxt";
    if (name.size() > ext.size() && name.ends_with(ext)) {
        name.resize(name.size() - ext.size());
    }
    return name;
}

long long now_unix_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t previous = row[j];
            const std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, substitution});
            diagonal = previous;
        }
    }
    return row[b.size()];
}

// Redirects are followed here rather than by httplib: its follow_location
// mode treats every 3xx as a redirect, which turns a Location-less 304
// (the expected answer to a conditional request) into a transport error.
class DefaultTransport : public HttpTransport {
  public:
    HttpResponse get(const std::string& url,
                     const std::vector<std::pair<std::string, std::string>>& headers,
                     double timeout_seconds) override {
        std::string target = url;
        for (int hop = 0; hop < 6; ++hop) {
            const auto scheme_end = target.find("://");
            if (scheme_end == std::string::npos) {
                throw RepoError(RepoError::Kind::network, "malformed URL: " + target, target);
            }
            const auto path_start = target.find('/', scheme_end + 3);
            const std::string origin =
                path_start == std::string::npos ? target : target.substr(0, path_start);
            const std::string path =
                path_start == std::string::npos ? std::string("/") : target.substr(path_start);

            httplib::Client client(origin);
            const auto seconds = static_cast<time_t>(timeout_seconds);
            const auto microseconds =
                static_cast<time_t>((timeout_seconds - static_cast<double>(seconds)) * 1e6);
            client.set_connection_timeout(seconds, microseconds);
            client.set_read_timeout(seconds, microseconds);

            httplib::Headers request_headers;
            for (const auto& [key, value] : headers) request_headers.emplace(key, value);

            httplib::Result result = client.Get(path, request_headers);
            if (!result) {
                throw RepoError(RepoError::Kind::network,
                                "request failed: " + httplib::to_string(result.error()) + " (" +
                                    target + ")",
                                target);
            }

            HttpResponse response;
            response.status = result->status;
            response.body = result->body;
            for (const auto& [key, value] : result->headers) {
                std::string lower(key);
                std::transform(lower.begin(), lower.end(), lower.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                response.headers[lower] = value;
            }

            const bool is_redirect = response.status == 301 || response.status == 302 ||
                                     response.status == 303 || response.status == 307 ||
                                     response.status == 308;
            const auto location = response.headers.find("location");
            if (!is_redirect || location == response.headers.end() || location->second.empty()) {
                return response;
            }
            const std::string& next = location->second;
            if (next.find("://") != std::string::npos) {
                target = next;
            } else if (next.starts_with('/')) {
                target = origin + next;
            } else {
                target = origin + path.substr(0, path.rfind('/') + 1) + next;
            }
        }
        throw RepoError(RepoError::Kind::network, "too many redirects: " + url, url);
    }
};

std::string joined_url(const std::string& base, const std::string& tail) {
    std::string url = base;
    while (!url.empty() && url.back() == '/') url.pop_back();
    return url + tail;
}

} // namespace

std::shared_ptr<HttpTransport> default_transport() {
    return std::make_shared<DefaultTransport>();
}

RepoClient::RepoClient(RepoConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (!config_.base_url.starts_with("http://") && !config_.base_url.starts_with("https://")) {
        throw Error("base URL must use http or https: " + config_.base_url);
    }
    if (config_.timeout_seconds <= 0) {
        throw Error("timeout must be positive");
    }
    config_.cache_dir = resolve_cache_dir(config_);
    if (!transport_) transport_ = default_transport();
}

std::optional<RepoClient::Cached> RepoClient::read_cache(const std::string& cache_name) const {
    const fs::path content_path = config_.cache_dir / cache_name;
    std::ifstream in(content_path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) return std::nullopt;

    Cached cached;
    cached.content = std::move(buffer).str();
    const fs::path meta_path = config_.cache_dir / (cache_name + ".meta.json");
    std::ifstream meta_in(meta_path, std::ios::binary);
    if (meta_in) {
        try {
            nlohmann::json meta = nlohmann::json::parse(meta_in);
            cached.etag = meta.value("etag", "");
            cached.last_modified = meta.value("last_modified", "");
            cached.fetched_at = meta.value("fetched_at", 0LL);
        } catch (const nlohmann::json::exception&) {
            // Damaged metadata: treat the entry as validator-less and stale.
        }
    }
    return cached;
}

void RepoClient::write_cache(const std::string& cache_name, const std::string& content,
                             const std::string& etag, const std::string& last_modified) const {
    std::error_code ec;
    fs::create_directories(config_.cache_dir, ec);
    if (ec) throw IoError("cannot create cache directory: " + config_.cache_dir.string());

    const std::string suffix = ".tmp" + std::to_string(::getpid());
    auto write_one = [&](const fs::path& target, const std::string& bytes) {
        const fs::path temp = target.string() + suffix;
        {
            std::ofstream out(temp, std::ios::binary | std::ios::trunc);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out) throw IoError("cannot write cache file: " + temp.string());
        }
        fs::rename(temp, target, ec);
        if (ec) throw IoError("cannot move cache file into place: " + target.string());
    };

    nlohmann::json meta;
    meta["etag"] = etag;
    meta["last_modified"] = last_modified;
    meta["fetched_at"] = now_unix_seconds();
    write_one(config_.cache_dir / cache_name, content);
    write_one(config_.cache_dir / (cache_name + ".meta.json"), meta.dump(2) + "\n");
}

void RepoClient::validate_payload(const std::string& bytes, bool is_index,
                                  const std::string& display_name) const {
    const std::string text = decode_text(bytes, display_name);
    if (is_index) {
        parse_index(text, display_name);
    } else {
        parse_burmeister(text, display_name);
    }
}

std::string RepoClient::fetch_resource(const std::string& url, const std::string& cache_name,
                                       bool is_index, const std::string& display_name) {
    std::optional<Cached> cached = read_cache(cache_name);

    if (config_.offline) {
        if (cached) return cached->content;
        throw RepoError(RepoError::Kind::offline,
                        "offline mode and \"" + display_name + "\" is not cached", url);
    }

    std::vector<std::pair<std::string, std::string>> headers;
    if (cached) {
        const bool has_validator = !cached->etag.empty() || !cached->last_modified.empty();
        if (has_validator) {
            if (!cached->etag.empty()) headers.emplace_back("If-None-Match", cached->etag);
            if (!cached->last_modified.empty()) {
                headers.emplace_back("If-Modified-Since", cached->last_modified);
            }
        } else {
            const long long age = now_unix_seconds() - cached->fetched_at;
            if (age >= 0 && static_cast<double>(age) < config_.max_age_seconds) {
                return cached->content;
            }
        }
    }

    const HttpResponse response = transport_->get(url, headers, config_.timeout_seconds);
    if (response.status == 304 && cached) {
        write_cache(cache_name, cached->content, cached->etag, cached->last_modified);
        return cached->content;
    }
    if (response.status == 404) {
        std::vector<std::string> nearby;
        if (!is_index) nearby = suggestions_for(strip_cxt_extension(display_name));
        std::string message = "context not found: " + display_name;
        if (is_index) message = "index not found: " + display_name;
        if (!nearby.empty()) {
            message += " (nearest names:";
            for (const auto& s : nearby) message += " " + s;
            message += ")";
        }
        throw RepoError(RepoError::Kind::not_found, message, url, 404, std::move(nearby));
    }
    if (response.status >= 400 || response.status == 0) {
        throw RepoError(RepoError::Kind::http_status,
                        "HTTP " + std::to_string(response.status) + " for " + url, url,
                        response.status);
    }

    validate_payload(response.body, is_index, display_name);
    auto header = [&](const char* key) {
        auto it = response.headers.find(key);
        return it == response.headers.end() ? std::string() : it->second;
    };
    write_cache(cache_name, response.body, header("etag"), header("last-modified"));
    return response.body;
}

RepositoryIndex RepoClient::list_contexts() {
    const std::string url = joined_url(config_.base_url, "/contexts.yaml");
    const std::string bytes = fetch_resource(url, "contexts.yaml", true, "contexts.yaml");
    return parse_index(decode_text(bytes, "contexts.yaml"), "contexts.yaml");
}

FormalContext RepoClient::load_dataset(const std::string& name) {
    const std::string bytes = fetch_raw(name);
    const std::string filename = strip_cxt_extension(name) + ".cxt";
    return parse_burmeister(decode_text(bytes, filename), filename);
}

std::string RepoClient::fetch_raw(const std::string& name) {
    const std::string stem = strip_cxt_extension(name);
    const std::string filename = stem + ".cxt";
    if (auto violations = validate_filename(filename); !violations.empty()) {
        std::string message = "invalid context name \"" + name + "\"";
        for (const auto& violation : violations) message += "; " + violation;
        throw RepoError(RepoError::Kind::invalid_name, message);
    }
    const std::string url = joined_url(config_.base_url, "/contexts/" + filename);
    return fetch_resource(url, filename, false, filename);
}

std::vector<std::string> RepoClient::suggestions_for(const std::string& stem) {
    RepositoryIndex index;
    try {
        index = list_contexts();
    } catch (const Error&) {
        return {};
    }
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const auto& [filename, meta] : index.entries) {
        const std::string candidate = strip_cxt_extension(filename);
        ranked.emplace_back(edit_distance(stem, candidate), candidate);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> out;
    for (const auto& [distance, candidate] : ranked) {
        if (out.size() == 3) break;
        if (distance <= std::max<std::size_t>(3, stem.size() / 2)) out.push_back(candidate);
    }
    return out;
}

RepositoryIndex list_contexts(const RepoConfig& config) {
    return RepoClient(config).list_contexts();
}

FormalContext load_dataset(const std::string& name, const RepoConfig& config) {
    return RepoClient(config).load_dataset(name);
}

std::string fetch_raw(const std::string& name, const RepoConfig& config) {
    return RepoClient(config).fetch_raw(name);
}

} // namespace fcarepo
