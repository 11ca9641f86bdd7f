#include "glide/app.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "glide/manifold.hpp"
#include "glide/obstacles.hpp"
#include "glide/oracle.hpp"
#include "glide/serialize.hpp"
#include "glide/turns.hpp"

namespace glide {

using nlohmann::json;

namespace {

AloManifold scenario_manifold(const Scenario &sc) {
    return AloManifold(sc.model(), sc.wind, sc.manifold_resolution());
}

PlannerOptions scenario_planner(const Scenario &sc) {
    PlannerOptions opts;
    opts.bank_limit = sc.bank_limit();
    return opts;
}

GridNode nearest_node(const DtmGrid &grid, Vec2 p) {
    const Vec2 uv = grid.to_grid(p);
    return {std::clamp(static_cast<int>(std::lround(uv.x)), 0, grid.rows() - 1),
            std::clamp(static_cast<int>(std::lround(uv.y)), 0, grid.cols() - 1)};
}

}  // namespace

std::string aircraft_label(const Scenario &sc) { return sc.aircraft.name; }

std::vector<double> parse_levels(const std::string &csv) {
    std::vector<double> levels;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            throw ScenarioError("levels: '" + item + "' is not a number");
        }
        if (used != item.size() || !std::isfinite(v) || v < 0.0) {
            throw ScenarioError("levels: '" + item + "' must be a nonnegative number");
        }
        levels.push_back(v);
    }
    if (levels.empty()) throw ScenarioError("levels: expected a comma-separated list");
    return levels;
}

AppResult app_plan(const Scenario &sc, bool turns) {
    const AloManifold manifold = scenario_manifold(sc);
    const AircraftModel model = sc.model();
    const std::vector<SiteReport> reports =
        reachability(sc.cutoff, sc.cutoff_altitude, sc.sites, manifold, *sc.dtm, scenario_planner(sc));

    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        if (reports[k].reachable) order.push_back(k);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (reports[a].site.weight != reports[b].site.weight) return reports[a].site.weight > reports[b].site.weight;
        return reports[a].trajectory->total_loss < reports[b].trajectory->total_loss;
    });

    std::optional<double> initial;
    if (sc.options.initial_heading_deg) initial = *sc.options.initial_heading_deg * kPi / 180.0;
    bool turn_rejected = false;
    for (std::size_t k : order) {
        Trajectory traj = *reports[k].trajectory;
        if (turns) {
            traj = apply_turn_corrections(traj, model, sc.wind, sc.bank_limit(), *sc.dtm, initial);
            if (traj.infeasible_after_turns) {
                turn_rejected = true;
                continue;
            }
        }
        json body = trajectory_json(traj, {aircraft_label(sc), sc.wind, reports[k].site.id});
        return {kExitOk, std::move(body), std::move(traj)};
    }

    std::string reason = turn_rejected ? "infeasible-after-turns" : "";
    json sites = json::array();
    for (const SiteReport &r : reports) {
        std::string why = r.trajectory ? (r.reachable ? "infeasible-after-turns" : "insufficient-altitude")
                                       : failure_name(r.reason);
        if (reason.empty()) reason = why;
        sites.push_back({{"id", r.site.id}, {"reason", why}});
    }
    json body = failure_json(reason, "no candidate site is reachable");
    body["sites"] = sites;
    return {kExitUnreachable, body};
}

AppResult app_reach(const Scenario &sc) {
    const AloManifold manifold = scenario_manifold(sc);
    const std::vector<SiteReport> reports =
        reachability(sc.cutoff, sc.cutoff_altitude, sc.sites, manifold, *sc.dtm, scenario_planner(sc));
    return {kExitOk, reach_json(reports, {aircraft_label(sc), sc.wind, ""})};
}

AppResult app_manifold(const Scenario &sc, const std::vector<double> &levels) {
    const AloManifold manifold = scenario_manifold(sc);
    json body = contours_json(manifold_contours(manifold, sc.cutoff, levels), sc.wind);
    body["origin"] = point_json(sc.cutoff);
    return {kExitOk, body};
}

AppResult app_oracle_compare(const Scenario &sc, int connectivity) {
    const AloManifold manifold = scenario_manifold(sc);
    const DtmGrid &grid = *sc.dtm;
    const GridNode a = nearest_node(grid, sc.cutoff);
    const Vec2 pa = grid.node_position(a);
    if (!(sc.cutoff_altitude > grid.dtm_node(a))) {
        return {kExitInputError, failure_json("input", "cutoff.altitude_m: not above DTM at the nearest grid node")};
    }
    json rows = json::array();
    bool violation = false;
    for (const Site &site : sc.sites) {
        const GridNode b = nearest_node(grid, site.position);
        const Vec2 pb = grid.node_position(b);
        const PlanResult plan = alo_search(pa, sc.cutoff_altitude, pb, manifold, grid, scenario_planner(sc));
        const OracleResult oracle = dense_dijkstra(a, sc.cutoff_altitude, b, manifold, grid, connectivity);
        json row = {{"site_id", site.id},
                    {"start", point_json(pa)},
                    {"target", point_json(pb)},
                    {"planner_found", plan.ok()},
                    {"oracle_found", oracle.found}};
        row["planner_loss_m"] = plan.ok() ? json(plan.trajectory->total_loss) : json(nullptr);
        row["oracle_loss_m"] = oracle.found ? json(oracle.loss) : json(nullptr);
        bool ok = true;
        if (oracle.found && !plan.ok()) ok = false;
        if (oracle.found && plan.ok()) {
            const double pl = plan.trajectory->total_loss;
            const double bound = discretization_bound(manifold, grid, pl, plan.trajectory->segments.size(), connectivity);
            row["discretization_bound_m"] = bound;
            row["difference_m"] = oracle.loss - pl;
            ok = pl <= oracle.loss + 1e-9 && oracle.loss - pl <= bound;
        } else {
            row["discretization_bound_m"] = nullptr;
            row["difference_m"] = nullptr;
        }
        row["within_bound"] = ok;
        violation = violation || !ok;
        rows.push_back(row);
    }
    return {violation ? kExitBoundViolation : kExitOk,
            {{"connectivity", connectivity}, {"sites", rows}, {"all_within_bound", !violation}}};
}

AppResult app_obstacles(const Scenario &sc) {
    const AloManifold manifold = scenario_manifold(sc);
    const LocalObstacleMap lomap = build_local_obstacle_map(*sc.dtm, manifold, sc.cutoff, sc.cutoff_altitude);
    const std::vector<ObstaclePolygon> rings = extract_obstacles(lomap);
    std::vector<Ftp> ftps;
    if (in_free(sc.cutoff, lomap)) ftps = find_ftps(sc.cutoff, lomap, rings);
    json body = obstacles_json(rings, ftps, *sc.dtm);
    body["origin"] = point_json(sc.cutoff);
    body["unsafe_squares"] = lomap.unsafe_count();
    return {kExitOk, body};
}

}  // namespace glide
