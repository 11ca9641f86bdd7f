#include "glide/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "glide/manifold.hpp"
#include "glide/terrain.hpp"

namespace glide {

using nlohmann::json;

namespace {

double deg(double rad) { return rad * 180.0 / kPi; }

const char *side_name(TangentSide s) {
    switch (s) {
        case TangentSide::kPlus:
            return "plus";
        case TangentSide::kMinus:
            return "minus";
        case TangentSide::kOnBoundaryStart:
            return "on-boundary-start";
    }
    return "unknown";
}

}  // namespace

json point_json(Vec2 p) { return {{"x_m", p.x}, {"y_m", p.y}}; }

json wind_json(const Wind &w) { return {{"w_north_mps", w.w_north}, {"w_east_mps", w.w_east}}; }

json trajectory_json(const Trajectory &traj, const TrajectoryMeta &meta) {
    json segments = json::array();
    for (const TrajectorySegment &s : traj.segments) {
        segments.push_back({{"start", point_json(s.start)},
                            {"end", point_json(s.end)},
                            {"heading_g_rad", s.heading_g},
                            {"heading_g_deg", deg(s.heading_g)},
                            {"length_m", s.length},
                            {"v_air_mps", s.v_air},
                            {"v_ground_mps", s.v_ground},
                            {"segment_loss_m", s.segment_loss}});
    }
    json corrections = json::array();
    for (const TurnCorrection &c : traj.turn_corrections) {
        corrections.push_back({{"waypoint_index", c.waypoint_index},
                               {"at_waypoint", point_json(c.at_waypoint)},
                               {"delta_psi_air_rad", c.delta_psi_air},
                               {"bank_rad", c.bank},
                               {"arc_loss_m", c.arc_loss},
                               {"energy_term_m", c.energy_term},
                               {"total_m", c.total},
                               {"radius_m", c.radius}});
    }
    json waypoints = json::array();
    for (const Vec2 &w : traj.waypoints) waypoints.push_back(point_json(w));
    json profile = json::array();
    for (const ProfileSample &p : traj.altitude_profile) {
        profile.push_back({{"s_m", p.s},
                           {"x_m", p.position.x},
                           {"y_m", p.position.y},
                           {"altitude_m", p.altitude},
                           {"dtm_m", p.dtm},
                           {"t_s", p.t}});
    }
    json metadata = {{"aircraft", meta.aircraft},
                     {"wind", wind_json(meta.wind)},
                     {"site_id", meta.site_id},
                     {"timestamps", {{"t_start_s", 0.0}, {"t_end_s", traj.flight_time()}}}};
    return {{"metadata", metadata},
            {"start", {{"x_m", traj.start.x}, {"y_m", traj.start.y}, {"altitude_m", traj.start_altitude}}},
            {"waypoints", waypoints},
            {"segments", segments},
            {"turn_corrections", corrections},
            {"turns_applied", traj.turns_applied},
            {"infeasible_after_turns", traj.infeasible_after_turns},
            {"total_loss_m", traj.total_loss},
            {"arrival_altitude_m", traj.arrival_altitude()},
            {"length_m", traj.length()},
            {"altitude_profile", profile}};
}

std::string trajectory_csv(const Trajectory &traj) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "x_m,y_m,altitude_m,heading_deg,v_air_mps\n";
    std::vector<double> step_at(traj.waypoints.size(), 0.0);
    for (const TurnCorrection &c : traj.turn_corrections) {
        if (c.waypoint_index >= 0 && static_cast<std::size_t>(c.waypoint_index) < step_at.size()) {
            step_at[static_cast<std::size_t>(c.waypoint_index)] += c.total;
        }
    }
    double altitude = traj.start_altitude;
    for (std::size_t k = 0; k < traj.waypoints.size(); ++k) {
        if (k > 0 && k - 1 < traj.segments.size()) altitude -= traj.segments[k - 1].segment_loss;
        altitude -= step_at[k];
        const TrajectorySegment *seg = nullptr;
        if (k < traj.segments.size()) {
            seg = &traj.segments[k];
        } else if (!traj.segments.empty()) {
            seg = &traj.segments.back();
        }
        const Vec2 w = traj.waypoints[k];
        os << w.x << ',' << w.y << ',' << altitude << ',' << (seg ? deg(seg->heading_g) : 0.0) << ','
           << (seg ? seg->v_air : 0.0) << '\n';
    }
    return os.str();
}

json reach_json(const std::vector<SiteReport> &reports, const TrajectoryMeta &meta) {
    json sites = json::array();
    for (const SiteReport &r : reports) {
        json row = {{"id", r.site.id},
                    {"x_m", r.site.position.x},
                    {"y_m", r.site.position.y},
                    {"weight", r.site.weight},
                    {"reachable", r.reachable},
                    {"arrival_margin_m", r.arrival_margin ? json(*r.arrival_margin) : json(nullptr)},
                    {"failure_reason", r.trajectory ? json(nullptr) : json(failure_name(r.reason))},
                    {"total_loss_m", r.trajectory ? json(r.trajectory->total_loss) : json(nullptr)}};
        if (r.trajectory) {
            TrajectoryMeta m = meta;
            m.site_id = r.site.id;
            row["trajectory"] = trajectory_json(*r.trajectory, m);
        } else {
            row["trajectory"] = nullptr;
        }
        sites.push_back(row);
    }
    const std::optional<std::size_t> best = best_site(reports);
    return {{"metadata", {{"aircraft", meta.aircraft}, {"wind", wind_json(meta.wind)}}},
            {"best_site", best ? json(reports[*best].site.id) : json(nullptr)},
            {"sites", sites}};
}

std::vector<Contour> manifold_contours(const AloManifold &manifold, Vec2 origin, const std::vector<double> &levels) {
    std::vector<Contour> out;
    const auto &samples = manifold.samples();
    const std::size_t n = samples.size();
    std::size_t first = 0;
    bool all_feasible = true;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(samples[k].slope)) {
            first = k;
            all_feasible = false;
            break;
        }
    }
    for (double level : levels) {
        Contour c;
        c.level = level;
        if (level <= 0.0) {
            c.parts.push_back({origin});
            out.push_back(c);
            continue;
        }
        std::vector<Vec2> part;
        for (std::size_t q = 0; q < n; ++q) {
            const HeadingSample &s = samples[(first + q) % n];
            if (!std::isfinite(s.slope)) {
                if (part.size() > 1) c.parts.push_back(part);
                part.clear();
                continue;
            }
            const double r = level / s.slope;
            part.push_back({origin.x + r * std::cos(s.heading_g), origin.y + r * std::sin(s.heading_g)});
        }
        if (all_feasible && !part.empty()) part.push_back(part.front());
        if (part.size() > 1) c.parts.push_back(part);
        out.push_back(c);
    }
    return out;
}

json contours_json(const std::vector<Contour> &contours, const Wind &wind) {
    json features = json::array();
    for (const Contour &c : contours) {
        json lines = json::array();
        for (const auto &part : c.parts) {
            json coords = json::array();
            for (const Vec2 &p : part) coords.push_back({p.x, p.y});
            lines.push_back(coords);
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "MultiLineString"}, {"coordinates", lines}}},
                            {"properties", {{"level_m", c.level}}}});
    }
    return {{"type", "FeatureCollection"}, {"wind", wind_json(wind)}, {"features", features}};
}

std::string contours_csv(const std::vector<Contour> &contours) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "level_m,part,x_m,y_m\n";
    for (const Contour &c : contours) {
        for (std::size_t p = 0; p < c.parts.size(); ++p) {
            for (const Vec2 &v : c.parts[p]) os << c.level << ',' << p << ',' << v.x << ',' << v.y << '\n';
        }
    }
    return os.str();
}

json obstacles_json(const std::vector<ObstaclePolygon> &rings, const std::vector<Ftp> &ftps, const DtmGrid &grid) {
    json features = json::array();
    for (const ObstaclePolygon &r : rings) {
        json ring = json::array();
        for (const GridNode &v : r.vertices) {
            const Vec2 p = grid.node_position(v);
            ring.push_back({p.x, p.y});
        }
        if (!r.vertices.empty()) ring.push_back(ring.front());
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
                            {"properties",
                             {{"kind", "obstacle"},
                              {"component_id", r.component_id},
                              {"ring_id", r.ring_id},
                              {"is_hole", r.is_hole}}}});
    }
    for (const Ftp &f : ftps) {
        features.push_back(
            {{"type", "Feature"},
             {"geometry", {{"type", "Point"}, {"coordinates", {f.position.x, f.position.y}}}},
             {"properties", {{"kind", "ftp"}, {"obstacle_id", f.obstacle_id}, {"tangent_side", side_name(f.side)}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
}

json failure_json(const std::string &reason, const std::string &message) {
    return {{"status", "failure"}, {"reason", reason}, {"message", message}};
}

json plan_event_json(const PlanEvent &ev) {
    return {{"trigger", ev.trigger},
            {"position", point_json(ev.position)},
            {"altitude_m", ev.altitude},
            {"wind", wind_json(ev.wind)},
            {"site_id", ev.site_id},
            {"failure_reason", ev.trajectory ? json(nullptr) : json(failure_name(ev.reason))},
            {"remaining_loss_m", ev.trajectory ? json(ev.trajectory->total_loss) : json(nullptr)}};
}

json session_state_json(const std::string &id, const ReplanSession &session, const std::string &aircraft) {
    json events = json::array();
    for (const PlanEvent &ev : session.events()) events.push_back(plan_event_json(ev));
    json plan = nullptr;
    std::string site_id;
    if (session.active_site()) site_id = session.sites()[*session.active_site()].id;
    if (session.current_plan()) plan = trajectory_json(*session.current_plan(), {aircraft, session.wind(), site_id});
    return {{"session_id", id},
            {"position", point_json(session.position())},
            {"altitude_m", session.altitude()},
            {"wind", wind_json(session.wind())},
            {"active_site", site_id.empty() ? json(nullptr) : json(site_id)},
            {"landed", session.landed()},
            {"events", events},
            {"plan", plan}};
}

std::string render(const json &j) { return j.dump(2) + "\n"; }

}  // namespace glide
