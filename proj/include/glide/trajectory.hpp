#pragma once

#include <vector>

#include "glide/aero.hpp"
#include "glide/geometry.hpp"

namespace glide {

class AloManifold;
class DtmGrid;

struct TrajectorySegment {
    Vec2 start;
    Vec2 end;
    double heading_g = 0.0;
    double length = 0.0;
    double v_air = 0.0;
    double v_ground = 0.0;
    double segment_loss = 0.0;
};

/// Altitude-only correction for a heading change at one waypoint.
struct TurnCorrection {
    int waypoint_index = 0;  // index into Trajectory::waypoints
    Vec2 at_waypoint;
    double delta_psi_air = 0.0;
    double bank = 0.0;
    double arc_loss = 0.0;
    double energy_term = 0.0;
    double total = 0.0;
    double radius = 0.0;
};

struct ProfileSample {
    double s = 0.0;  // ground arc length from the start
    Vec2 position;
    double altitude = 0.0;
    double dtm = 0.0;
    double t = 0.0;  // flight time since the start at ground speed
};

struct Trajectory {
    Vec2 start;
    double start_altitude = 0.0;
    std::vector<Vec2> waypoints;  // start, FTPs..., target
    std::vector<TrajectorySegment> segments;
    std::vector<TurnCorrection> turn_corrections;
    double total_loss = 0.0;  // segment losses plus applied corrections
    std::vector<ProfileSample> altitude_profile;
    bool turns_applied = false;
    bool infeasible_after_turns = false;

    double straight_loss() const;
    double corrections_loss() const;
    double length() const;
    double flight_time() const;
    double arrival_altitude() const { return start_altitude - total_loss; }
};

/// Builds segments (optimal glide per heading, losses from the manifold) and
/// an altitude profile sampled at one grid spacing.
Trajectory make_trajectory(const std::vector<Vec2> &waypoints, double start_altitude, const AloManifold &manifold,
                           const DtmGrid &grid);

/// Recomputes the altitude profile and total loss from segments and turn
/// corrections. Corrections act as altitude steps at their waypoints.
void rebuild_profile(Trajectory &traj, const DtmGrid &grid);

}  // namespace glide
