#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "glide/app.hpp"
#include "glide/planner.hpp"
#include "glide/serialize.hpp"
#include "glide/service.hpp"

using namespace glide;
using nlohmann::json;

namespace {

struct Units {
    bool feet = false;
    bool knots = false;

    std::string alt(double m) const {
        char buf[64];
        if (feet) {
            std::snprintf(buf, sizeof buf, "%.0f ft", m / 0.3048);
        } else {
            std::snprintf(buf, sizeof buf, "%.1f m", m);
        }
        return buf;
    }
    std::string speed(double mps) const {
        char buf[64];
        if (knots) {
            std::snprintf(buf, sizeof buf, "%.1f kt", mps / 0.514444);
        } else {
            std::snprintf(buf, sizeof buf, "%.1f m/s", mps);
        }
        return buf;
    }
};

bool write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

int input_error(const std::string &message) {
    std::cout << render({{"status", "error"}, {"reason", "input"}, {"message", message}});
    return kExitInputError;
}

template <typename Fn>
int guarded(Fn &&fn) {
    try {
        return fn();
    } catch (const ScenarioError &e) {
        return input_error(e.what());
    } catch (const std::invalid_argument &e) {
        return input_error(e.what());
    } catch (const std::exception &e) {
        std::cout << render({{"status", "error"}, {"reason", "internal"}, {"message", e.what()}});
        return kExitInputError;
    }
}

void print_plan_summary(const json &body, const Units &u) {
    if (!body.contains("segments")) return;
    std::cerr << "site " << body["metadata"]["site_id"].get<std::string>() << ": " << body["segments"].size()
              << " segment(s), loss " << u.alt(body["total_loss_m"].get<double>()) << ", arrival "
              << u.alt(body["arrival_altitude_m"].get<double>()) << "\n";
    for (const auto &s : body["segments"]) {
        std::cerr << "  heading " << static_cast<int>(std::lround(s["heading_g_deg"].get<double>())) << " deg, air "
                  << u.speed(s["v_air_mps"].get<double>()) << ", ground " << u.speed(s["v_ground_mps"].get<double>())
                  << ", loss " << u.alt(s["segment_loss_m"].get<double>()) << "\n";
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Glide trajectory planner for engine-out landing"};
    app.require_subcommand(1);
    Units units;
    app.add_flag("--feet", units.feet, "Show altitudes in feet in the human summary");
    app.add_flag("--knots", units.knots, "Show speeds in knots in the human summary");

    std::string scenario_path;
    std::string out_path;
    std::string csv_path;
    bool turns = false;
    auto *plan = app.add_subcommand("plan", "Plan to the best reachable site");
    plan->add_option("scenario", scenario_path, "Scenario JSON")->required();
    plan->add_option("--out", out_path, "Write trajectory JSON here instead of stdout");
    plan->add_option("--csv", csv_path, "Write waypoint CSV here");
    plan->add_flag("--turns", turns, "Apply turn corrections");

    auto *reach = app.add_subcommand("reach", "Reachability report for every site");
    reach->add_option("scenario", scenario_path, "Scenario JSON")->required();

    std::string levels = "100,200,500";
    auto *manifold = app.add_subcommand("manifold", "Iso-loss contours around the cutoff point");
    manifold->add_option("scenario", scenario_path, "Scenario JSON")->required();
    manifold->add_option("--levels", levels, "Comma-separated altitude-loss levels (m)");
    manifold->add_option("--csv", csv_path, "Also write contour CSV here");

    int connectivity = 16;
    auto *oracle = app.add_subcommand("oracle-compare", "Compare the planner with the dense-grid oracle");
    oracle->add_option("scenario", scenario_path, "Scenario JSON")->required();
    oracle->add_option("--connectivity", connectivity, "Oracle neighborhood (8 or 16)")
        ->check(CLI::IsMember({8, 16}));

    auto *obstacles = app.add_subcommand("obstacles", "Dump obstacle rings and FTPs seen from the cutoff");
    obstacles->add_option("scenario", scenario_path, "Scenario JSON")->required();

    std::vector<std::string> wind_updates;
    auto *session = app.add_subcommand("session", "Simulate a descent with periodic replanning");
    session->add_option("scenario", scenario_path, "Scenario JSON")->required();
    session->add_option("--wind-update", wind_updates, "ALT_M:W_NORTH:W_EAST, applied when descending through ALT_M");

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string scenario_dir = ".";
    auto *serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--scenario-dir", scenario_dir, "Base directory for relative file references");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : kExitInputError;
    }

    if (*plan) {
        return guarded([&] {
            const Scenario sc = load_scenario(scenario_path);
            const AppResult r = app_plan(sc, turns || sc.options.turns);
            if (r.exit_code == kExitOk) {
                print_plan_summary(r.body, units);
                if (!csv_path.empty() && !write_file(csv_path, trajectory_csv(*r.trajectory))) {
                    return input_error("--csv: cannot write '" + csv_path + "'");
                }
                if (!out_path.empty()) {
                    if (!write_file(out_path, render(r.body))) return input_error("--out: cannot write '" + out_path + "'");
                    return r.exit_code;
                }
            }
            std::cout << render(r.body);
            return r.exit_code;
        });
    }
    if (*reach) {
        return guarded([&] {
            const AppResult r = app_reach(load_scenario(scenario_path));
            std::cout << render(r.body);
            return r.exit_code;
        });
    }
    if (*manifold) {
        return guarded([&] {
            const Scenario sc = load_scenario(scenario_path);
            const std::vector<double> lv = parse_levels(levels);
            const AppResult r = app_manifold(sc, lv);
            if (!csv_path.empty()) {
                const AloManifold m(sc.model(), sc.wind, sc.manifold_resolution());
                if (!write_file(csv_path, contours_csv(manifold_contours(m, sc.cutoff, lv)))) {
                    return input_error("--csv: cannot write '" + csv_path + "'");
                }
            }
            std::cout << render(r.body);
            return r.exit_code;
        });
    }
    if (*oracle) {
        return guarded([&] {
            const AppResult r = app_oracle_compare(load_scenario(scenario_path), connectivity);
            std::cout << render(r.body);
            return r.exit_code;
        });
    }
    if (*obstacles) {
        return guarded([&] {
            const AppResult r = app_obstacles(load_scenario(scenario_path));
            std::cout << render(r.body);
            return r.exit_code;
        });
    }
    if (*session) {
        return guarded([&] {
            const Scenario sc = load_scenario(scenario_path);
            std::vector<WindUpdate> updates;
            for (const std::string &item : wind_updates) {
                WindUpdate u;
                if (std::sscanf(item.c_str(), "%lf:%lf:%lf", &u.altitude, &u.wind.w_north, &u.wind.w_east) != 3) {
                    throw ScenarioError("--wind-update: expected ALT_M:W_NORTH:W_EAST, got '" + item + "'");
                }
                updates.push_back(u);
            }
            ReplanSession s(sc.dtm, sc.model(), sc.wind, sc.cutoff, sc.cutoff_altitude, sc.sites,
                            sc.options.replan_interval_m, sc.manifold_resolution(),
                            PlannerOptions{.bank_limit = sc.bank_limit()});
            s.run(updates);
            std::cout << render(session_state_json("cli", s, aircraft_label(sc)));
            return s.events().front().trajectory ? kExitOk : kExitUnreachable;
        });
    }
    if (*serve) {
        GlideService service({scenario_dir});
        std::cerr << "listening on " << host << ":" << port << "\n";
        if (!service.listen(host, port)) {
            std::cerr << "cannot bind " << host << ":" << port << "\n";
            return kExitInputError;
        }
        return kExitOk;
    }
    return kExitInputError;
}
