#include "glide/service.hpp"

#include <map>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "glide/app.hpp"
#include "glide/scenario.hpp"
#include "glide/serialize.hpp"

namespace glide {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char *kJson = "application/json";

int http_status(int exit_code) {
    switch (exit_code) {
        case kExitOk:
            return 200;
        case kExitUnreachable:
            return 422;
        default:
            return 400;
    }
}

void reply(httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(render(body), kJson);
}

void input_error(httplib::Response &res, const std::string &message) {
    json body = {{"status", "error"}, {"reason", "input"}, {"message", message}};
    reply(res, 400, body);
}

double query_number(const httplib::Request &req, const std::string &key, double fallback) {
    if (!req.has_param(key)) return fallback;
    const std::string text = req.get_param_value(key);
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ScenarioError(key + ": '" + text + "' is not a number");
    }
    if (used != text.size() || !std::isfinite(v)) throw ScenarioError(key + ": '" + text + "' is not a number");
    return v;
}

}  // namespace

struct GlideService::Impl {
    struct SessionEntry {
        std::mutex mutex;
        std::unique_ptr<ReplanSession> session;
        std::string aircraft;
        Clock::time_point last_access;
    };

    ServiceConfig config;
    httplib::Server server;
    DtmCache cache;
    mutable std::mutex sessions_mutex;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
    std::size_t next_id = 1;

    explicit Impl(ServiceConfig c) : config(std::move(c)) { routes(); }

    Scenario scenario_from(const httplib::Request &req) {
        return parse_scenario_text(req.body, config.scenario_dir, &cache);
    }

    void expire() {
        const auto now = Clock::now();
        for (auto it = sessions.begin(); it != sessions.end();) {
            if (now - it->second->last_access > config.session_ttl) {
                it = sessions.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::shared_ptr<SessionEntry> find_session(const std::string &id) {
        std::lock_guard lock(sessions_mutex);
        expire();
        auto it = sessions.find(id);
        if (it == sessions.end()) return nullptr;
        return it->second;
    }

    template <typename Fn>
    void guarded(httplib::Response &res, Fn &&fn) {
        try {
            fn();
        } catch (const ScenarioError &e) {
            input_error(res, e.what());
        } catch (const json::exception &e) {
            input_error(res, std::string("request body: ") + e.what());
        } catch (const std::invalid_argument &e) {
            input_error(res, e.what());
        } catch (const std::exception &e) {
            reply(res, 500, {{"status", "error"}, {"reason", "internal"}, {"message", e.what()}});
        }
    }

    void with_session(const httplib::Request &req, httplib::Response &res,
                      const std::function<void(SessionEntry &)> &fn) {
        const std::string id = req.matches[1];
        auto entry = find_session(id);
        if (!entry) {
            reply(res, 404, {{"status", "error"}, {"reason", "unknown-session"}, {"message", "no session '" + id + "'"}});
            return;
        }
        std::lock_guard lock(entry->mutex);
        entry->last_access = Clock::now();
        guarded(res, [&] {
            fn(*entry);
            reply(res, 200, session_state_json(id, *entry->session, entry->aircraft));
        });
    }

    void routes() {
        server.Post("/plan", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const Scenario sc = scenario_from(req);
                bool turns = sc.options.turns;
                if (req.has_param("turns")) turns = req.get_param_value("turns") == "1" ||
                                                    req.get_param_value("turns") == "true";
                const AppResult r = app_plan(sc, turns);
                reply(res, http_status(r.exit_code), r.body);
            });
        });
        server.Post("/reach", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const AppResult r = app_reach(scenario_from(req));
                reply(res, http_status(r.exit_code), r.body);
            });
        });
        server.Post("/obstacles", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const AppResult r = app_obstacles(scenario_from(req));
                reply(res, http_status(r.exit_code), r.body);
            });
        });
        server.Get("/manifold", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                Scenario sc;
                const std::string aircraft = req.has_param("aircraft") ? req.get_param_value("aircraft") : "cessna172";
                std::filesystem::path path = config.scenario_dir / aircraft;
                if (!std::filesystem::exists(path)) path = data_dir() / (aircraft + ".json");
                if (!std::filesystem::exists(path)) throw ScenarioError("aircraft: cannot find '" + aircraft + "'");
                sc.aircraft = load_aircraft(path);
                sc.wind = {query_number(req, "wx", 0.0), query_number(req, "wy", 0.0)};
                sc.cutoff = {query_number(req, "x_m", 0.0), query_number(req, "y_m", 0.0)};
                if (!req.has_param("levels")) throw ScenarioError("levels: missing query parameter");
                const AppResult r = app_manifold(sc, parse_levels(req.get_param_value("levels")));
                reply(res, http_status(r.exit_code), r.body);
            });
        });
        server.Post("/session", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const Scenario sc = scenario_from(req);
                auto entry = std::make_shared<SessionEntry>();
                entry->aircraft = aircraft_label(sc);
                entry->session = std::make_unique<ReplanSession>(
                    sc.dtm, sc.model(), sc.wind, sc.cutoff, sc.cutoff_altitude, sc.sites, sc.options.replan_interval_m,
                    sc.manifold_resolution(), PlannerOptions{.bank_limit = sc.bank_limit()});
                entry->last_access = Clock::now();
                std::string id;
                {
                    std::lock_guard lock(sessions_mutex);
                    expire();
                    id = "s" + std::to_string(next_id++);
                    sessions[id] = entry;
                }
                const int status = entry->session->current_plan() ? 201 : 422;
                reply(res, status, session_state_json(id, *entry->session, entry->aircraft));
            });
        });
        server.Post(R"(/session/([A-Za-z0-9_-]+)/wind)", [this](const httplib::Request &req, httplib::Response &res) {
            with_session(req, res, [&](SessionEntry &e) {
                const json body = json::parse(req.body);
                if (!body.is_object()) throw ScenarioError("wind: expected an object");
                Wind w{body.value("w_north_mps", 0.0), body.value("w_east_mps", 0.0)};
                e.session->update_wind(w);
            });
        });
        server.Post(R"(/session/([A-Za-z0-9_-]+)/advance)",
                    [this](const httplib::Request &req, httplib::Response &res) {
                        with_session(req, res, [&](SessionEntry &e) {
                            const json body = req.body.empty() ? json::object() : json::parse(req.body);
                            if (!body.is_object()) throw ScenarioError("advance: expected an object");
                            const double drop = body.value("altitude_drop_m", kDefaultReplanInterval);
                            if (!(drop > 0.0)) throw ScenarioError("altitude_drop_m: must be positive");
                            e.session->advance(drop);
                        });
                    });
        server.Get(R"(/session/([A-Za-z0-9_-]+)/state)", [this](const httplib::Request &req, httplib::Response &res) {
            with_session(req, res, [](SessionEntry &) {});
        });
    }
};

GlideService::GlideService(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
GlideService::~GlideService() { stop(); }

bool GlideService::listen(const std::string &host, int port) { return impl_->server.listen(host, port); }
int GlideService::bind_any_port(const std::string &host) { return impl_->server.bind_to_any_port(host); }
bool GlideService::serve() { return impl_->server.listen_after_bind(); }
void GlideService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}
void GlideService::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::size_t GlideService::session_count() const {
    std::lock_guard lock(impl_->sessions_mutex);
    return impl_->sessions.size();
}

}  // namespace glide
