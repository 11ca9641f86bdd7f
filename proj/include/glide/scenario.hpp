#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <tuple>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "glide/aero.hpp"
#include "glide/planner.hpp"
#include "glide/terrain.hpp"

namespace glide {

/// Input error; the message starts with the offending field path.
class ScenarioError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct ScenarioOptions {
    double clearance_m = kDefaultClearance;
    double bank_limit_deg = 45.0;
    double replan_interval_m = kDefaultReplanInterval;
    double manifold_resolution_deg = 0.25;
    bool turns = false;
    std::optional<double> initial_heading_deg;  // air-mass heading at cutoff
};

struct Scenario {
    AircraftParams aircraft;
    Wind wind;
    Vec2 cutoff;
    double cutoff_altitude = 0.0;
    std::vector<Site> sites;
    std::shared_ptr<const DtmGrid> dtm;
    ScenarioOptions options;
    std::string source;  // file name or "inline"

    AircraftModel model() const { return AircraftModel(aircraft); }
    double bank_limit() const { return options.bank_limit_deg * kPi / 180.0; }
    double manifold_resolution() const { return options.manifold_resolution_deg * kPi / 180.0; }
};

/// Loads a DTM once per (path, format, clearance) and shares it afterwards.
class DtmCache {
 public:
    std::shared_ptr<const DtmGrid> get(const std::filesystem::path &path, DtmFormat format, double clearance);

 private:
    std::mutex mutex_;
    std::map<std::tuple<std::string, int, double>, std::shared_ptr<const DtmGrid>> grids_;
};

AircraftParams parse_aircraft(const nlohmann::json &j, const std::string &field = "aircraft");
AircraftParams load_aircraft(const std::filesystem::path &path);

/// Relative file references resolve against `base_dir`, then the bundled data
/// directory (aircraft only).
Scenario parse_scenario(const nlohmann::json &j, const std::filesystem::path &base_dir, DtmCache *cache = nullptr);
Scenario parse_scenario_text(const std::string &text, const std::filesystem::path &base_dir,
                             DtmCache *cache = nullptr);
Scenario load_scenario(const std::filesystem::path &path, DtmCache *cache = nullptr);

std::filesystem::path data_dir();

}  // namespace glide
