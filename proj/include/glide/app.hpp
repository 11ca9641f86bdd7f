#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glide/scenario.hpp"

namespace glide {

/// Exit codes shared by the CLI; the service maps them to HTTP statuses.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitUnreachable = 2, kExitBoundViolation = 3 };

struct AppResult {
    AppResult(int code, nlohmann::json b, std::optional<Trajectory> t = std::nullopt)
        : exit_code(code), body(std::move(b)), trajectory(std::move(t)) {}

    int exit_code = kExitOk;
    nlohmann::json body;
    std::optional<Trajectory> trajectory;  // set by app_plan on success
};

/// Best reachable site (highest weight, then smallest loss); applies turn
/// corrections when requested and skips sites that fail the re-check.
AppResult app_plan(const Scenario &sc, bool turns);
AppResult app_reach(const Scenario &sc);
AppResult app_manifold(const Scenario &sc, const std::vector<double> &levels);
/// Planner against the dense-grid oracle for every site, with the cutoff and
/// sites snapped to the nearest grid node.
AppResult app_oracle_compare(const Scenario &sc, int connectivity = 16);
/// Obstacle rings and FTPs seen from the cutoff, toward the first site.
AppResult app_obstacles(const Scenario &sc);

std::vector<double> parse_levels(const std::string &csv);

std::string aircraft_label(const Scenario &sc);

}  // namespace glide
