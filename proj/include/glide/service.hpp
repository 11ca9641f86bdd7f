#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

namespace glide {

struct ServiceConfig {
    std::filesystem::path scenario_dir = ".";
    std::chrono::seconds session_ttl{1800};
};

/// HTTP+JSON front end over the same code paths as the CLI.
///   POST /plan, /reach, /obstacles           body: scenario JSON
///   GET  /manifold?wx=&wy=&levels=[&x_m=&y_m=&aircraft=]
///   POST /session                            body: scenario JSON
///   POST /session/{id}/wind                  body: {"w_north_mps", "w_east_mps"}
///   POST /session/{id}/advance               body: {"altitude_drop_m"}
///   GET  /session/{id}/state
class GlideService {
 public:
    explicit GlideService(ServiceConfig config);
    ~GlideService();
    GlideService(const GlideService &) = delete;
    GlideService &operator=(const GlideService &) = delete;

    /// Blocks until stop() is called. Returns false when binding fails.
    bool listen(const std::string &host, int port);
    /// Binds to a free port and returns it; call serve() afterwards.
    int bind_any_port(const std::string &host);
    bool serve();
    void stop();
    void wait_until_ready() const;

    std::size_t session_count() const;

 private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace glide
