#include "glide/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glide/manifold.hpp"
#include "glide/terrain.hpp"

namespace glide {

double Trajectory::straight_loss() const {
    double sum = 0.0;
    for (const auto &s : segments) sum += s.segment_loss;
    return sum;
}

double Trajectory::corrections_loss() const {
    double sum = 0.0;
    for (const auto &c : turn_corrections) sum += c.total;
    return sum;
}

double Trajectory::length() const {
    double sum = 0.0;
    for (const auto &s : segments) sum += s.length;
    return sum;
}

double Trajectory::flight_time() const {
    double sum = 0.0;
    for (const auto &s : segments) {
        if (s.length > 0.0) sum += s.length / s.v_ground;
    }
    return sum;
}

Trajectory make_trajectory(const std::vector<Vec2> &waypoints, double start_altitude, const AloManifold &manifold,
                           const DtmGrid &grid) {
    if (waypoints.empty()) throw std::invalid_argument("trajectory needs at least one waypoint");
    Trajectory traj;
    traj.start = waypoints.front();
    traj.start_altitude = start_altitude;
    traj.waypoints = waypoints;
    for (std::size_t k = 1; k < waypoints.size(); ++k) {
        const Vec2 d = waypoints[k] - waypoints[k - 1];
        TrajectorySegment seg;
        seg.start = waypoints[k - 1];
        seg.end = waypoints[k];
        seg.length = d.norm();
        seg.heading_g = wrap_two_pi(d.heading());
        const GlideSolution sol = optimal_glide(manifold.aircraft(), manifold.wind(), seg.heading_g);
        seg.v_air = sol.v_air;
        seg.v_ground = sol.v_ground;
        seg.segment_loss = manifold.loss(d.x, d.y);
        traj.segments.push_back(seg);
    }
    rebuild_profile(traj, grid);
    return traj;
}

void rebuild_profile(Trajectory &traj, const DtmGrid &grid) {
    traj.altitude_profile.clear();
    const double step = std::min(grid.dx(), grid.dy());
    std::vector<double> step_at(traj.waypoints.size(), 0.0);
    for (const auto &c : traj.turn_corrections) {
        if (c.waypoint_index >= 0 && static_cast<std::size_t>(c.waypoint_index) < step_at.size()) {
            step_at[static_cast<std::size_t>(c.waypoint_index)] += c.total;
        }
    }

    auto sample = [&](double s, Vec2 p, double alt, double t) {
        ProfileSample ps;
        ps.s = s;
        ps.position = p;
        ps.altitude = alt;
        ps.dtm = grid.contains(p) ? grid.dtm_at(p) : std::nan("");
        ps.t = t;
        traj.altitude_profile.push_back(ps);
    };

    double s0 = 0.0;
    double lost = 0.0;
    double t0 = 0.0;
    sample(0.0, traj.start, traj.start_altitude, 0.0);
    if (step_at[0] != 0.0) {
        lost += step_at[0];
        sample(0.0, traj.start, traj.start_altitude - lost, 0.0);
    }
    for (std::size_t k = 0; k < traj.segments.size(); ++k) {
        const TrajectorySegment &seg = traj.segments[k];
        const int pieces = std::max(1, static_cast<int>(std::ceil(seg.length / step - 1e-9)));
        const double dt = seg.length > 0.0 ? seg.length / seg.v_ground : 0.0;
        for (int q = 1; q <= pieces; ++q) {
            const double f = static_cast<double>(q) / pieces;
            const Vec2 p = q == pieces ? seg.end : seg.start + f * (seg.end - seg.start);
            sample(s0 + f * seg.length, p, traj.start_altitude - lost - f * seg.segment_loss, t0 + f * dt);
        }
        s0 += seg.length;
        lost += seg.segment_loss;
        t0 += dt;
        if (step_at[k + 1] != 0.0) {
            lost += step_at[k + 1];
            sample(s0, seg.end, traj.start_altitude - lost, t0);
        }
    }
    traj.total_loss = lost;
}

}  // namespace glide
