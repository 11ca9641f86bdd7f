#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "glide/aero.hpp"
#include "glide/obstacles.hpp"
#include "glide/planner.hpp"
#include "glide/trajectory.hpp"

namespace glide {

class AloManifold;

struct TrajectoryMeta {
    std::string aircraft;
    Wind wind;
    std::string site_id;
};

nlohmann::json point_json(Vec2 p);
nlohmann::json wind_json(const Wind &w);

nlohmann::json trajectory_json(const Trajectory &traj, const TrajectoryMeta &meta);

/// One row per waypoint: x_m,y_m,altitude_m,heading_deg,v_air_mps.
std::string trajectory_csv(const Trajectory &traj);

nlohmann::json reach_json(const std::vector<SiteReport> &reports, const TrajectoryMeta &meta);

struct Contour {
    double level = 0.0;
    std::vector<std::vector<Vec2>> parts;  // broken at infeasible headings
};

/// Star-shaped iso-loss polylines around `origin`, one vertex per manifold
/// heading sample.
std::vector<Contour> manifold_contours(const AloManifold &manifold, Vec2 origin, const std::vector<double> &levels);
nlohmann::json contours_json(const std::vector<Contour> &contours, const Wind &wind);
std::string contours_csv(const std::vector<Contour> &contours);

nlohmann::json obstacles_json(const std::vector<ObstaclePolygon> &rings, const std::vector<Ftp> &ftps,
                              const DtmGrid &grid);

nlohmann::json failure_json(const std::string &reason, const std::string &message);

nlohmann::json plan_event_json(const PlanEvent &ev);
nlohmann::json session_state_json(const std::string &id, const ReplanSession &session, const std::string &aircraft);

/// Canonical text form used by every output channel.
std::string render(const nlohmann::json &j);

}  // namespace glide
