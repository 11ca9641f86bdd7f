#include "glide/planner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "glide/turns.hpp"

namespace glide {

const char *failure_name(FailureReason r) {
    switch (r) {
        case FailureReason::kNone:
            return "none";
        case FailureReason::kNoPath:
            return "no-path";
        case FailureReason::kInsufficientAltitude:
            return "insufficient-altitude";
    }
    return "unknown";
}

std::vector<Vec2> trace_path(const std::vector<SearchNode> &arena, int terminal) {
    std::vector<Vec2> path;
    int cur = terminal;
    std::size_t guard = 0;
    while (cur >= 0) {
        if (static_cast<std::size_t>(cur) >= arena.size() || ++guard > arena.size()) {
            throw std::logic_error("broken parent chain");
        }
        path.push_back(arena[static_cast<std::size_t>(cur)].position);
        cur = arena[static_cast<std::size_t>(cur)].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

struct OpenEntry {
    double f;
    double g;
    std::size_t seq;
    int index;
};

struct OpenOrder {
    // std::priority_queue pops the "largest"; this makes it pop smallest f,
    // then largest g, then earliest insertion.
    bool operator()(const OpenEntry &a, const OpenEntry &b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return a.seq > b.seq;
    }
};

using Key = std::pair<double, double>;

bool exceeds(double lhs, double rhs, double tol) { return lhs > rhs + tol + 1e-9 * std::abs(rhs); }

}  // namespace

PlanResult alo_search(Vec2 p_a, double z_a, Vec2 p_b, const AloManifold &manifold, const DtmGrid &grid,
                      const PlannerOptions &options) {
    if (!grid.contains(p_a) || !grid.contains(p_b)) throw std::invalid_argument("endpoints must lie on the DTM grid");
    if (!(z_a > grid.dtm_at(p_a))) throw std::invalid_argument("start altitude must be above DTM");

    PlanResult result;
    const Vec2 ab = p_b - p_a;
    result.lower_bound = manifold.loss(ab.x, ab.y);
    const double dtm_b = grid.dtm_at(p_b);
    const Key target_key = [&] {
        const Vec2 uv = grid_coords(grid, p_b);
        return Key{uv.x, uv.y};
    }();
    const AircraftModel &model = manifold.aircraft();
    const double bank = optimal_bank(std::min(options.bank_limit, kPi / 2 - 1e-9));

    std::vector<SearchNode> arena;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    std::map<Key, double> best_g;
    std::set<Key> closed;
    std::vector<int> popped;
    std::size_t seq = 0;

    auto key_of = [&](Vec2 p) {
        const Vec2 uv = grid_coords(grid, p);
        return Key{uv.x, uv.y};
    };

    SearchNode start;
    start.position = p_a;
    start.h = result.lower_bound;
    start.is_target = key_of(p_a) == target_key;
    arena.push_back(start);
    best_g[key_of(p_a)] = 0.0;
    open.push({start.f(), 0.0, seq++, 0});

    int terminal = -1;
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const SearchNode node = arena[static_cast<std::size_t>(top.index)];
        const Key key = key_of(node.position);
        if (closed.contains(key)) continue;
        if (node.g > best_g[key]) continue;

        if (!std::isfinite(node.f()) || z_a - node.f() < dtm_b) {
            result.reason = FailureReason::kInsufficientAltitude;
            return result;
        }
        popped.push_back(top.index);
        if (node.is_target) {
            terminal = top.index;
            break;
        }
        closed.insert(key);
        ++result.stats.nodes_expanded;

        const double altitude = z_a - node.g;
        if (!(altitude > grid.dtm_at(node.position))) continue;
        const LocalObstacleMap lomap = build_local_obstacle_map(grid, manifold, node.position, altitude);
        const ExpandResult er = expand_in_map(node.position, p_b, lomap, options.mode);

        std::vector<std::pair<Vec2, bool>> successors;
        if (er.target_direct) {
            successors.emplace_back(p_b, true);
        } else {
            if (!er.successors.empty()) ++result.stats.ftp_expansions;
            for (const Ftp &f : er.successors) successors.emplace_back(f.position, key_of(f.position) == target_key);
        }

        for (const auto &[pos, is_target] : successors) {
            const Vec2 d = pos - node.position;
            double edge = manifold.loss(d.x, d.y);
            if (!std::isfinite(edge)) continue;
            const double heading = wrap_two_pi(d.heading());
            if (options.turns_in_search && node.parent >= 0 && d.norm() > 0.0) {
                const double dpsi = airmass_turn(model, manifold.wind(), node.heading_in, heading);
                edge += turn_loss(model, dpsi, bank, 0.0, 0.0).arc_loss;
            }
            SearchNode child;
            child.position = is_target ? p_b : pos;
            child.g = node.g + edge;
            const Vec2 rest = p_b - child.position;
            child.h = is_target ? 0.0 : manifold.loss(rest.x, rest.y);
            if (!std::isfinite(child.h)) continue;
            child.parent = top.index;
            child.heading_in = heading;
            child.is_target = is_target;
            if (exceeds(node.h, edge + child.h, options.heuristic_tolerance)) ++result.stats.consistency_violations;

            const Key ck = is_target ? target_key : key_of(child.position);
            if (closed.contains(ck)) continue;
            auto it = best_g.find(ck);
            if (it != best_g.end() && it->second <= child.g) continue;
            best_g[ck] = child.g;
            arena.push_back(child);
            ++result.stats.nodes_generated;
            open.push({child.f(), child.g, seq++, static_cast<int>(arena.size() - 1)});
        }
    }

    if (terminal < 0) {
        result.reason = FailureReason::kNoPath;
        return result;
    }
    const double final_g = arena[static_cast<std::size_t>(terminal)].g;
    for (int idx : popped) {
        if (exceeds(arena[static_cast<std::size_t>(idx)].f(), final_g, options.heuristic_tolerance)) {
            ++result.stats.admissibility_violations;
        }
    }
    std::vector<Vec2> waypoints = trace_path(arena, terminal);
    if (waypoints.size() == 1) waypoints.push_back(p_b);
    result.trajectory = make_trajectory(waypoints, z_a, manifold, grid);
    return result;
}

PlanResult alo_search(Vec2 p_a, double z_a, Vec2 p_b, const AircraftModel &model, const Wind &wind,
                      const DtmGrid &grid, const PlannerOptions &options) {
    const AloManifold manifold(model, wind);
    return alo_search(p_a, z_a, p_b, manifold, grid, options);
}

std::vector<SiteReport> reachability(Vec2 p_a, double z_a, const std::vector<Site> &sites,
                                     const AloManifold &manifold, const DtmGrid &grid,
                                     const PlannerOptions &options) {
    std::vector<std::future<SiteReport>> jobs;
    jobs.reserve(sites.size());
    for (const Site &site : sites) {
        jobs.push_back(std::async(std::launch::async, [&, site] {
            SiteReport report;
            report.site = site;
            if (!grid.contains(site.position)) {
                report.reason = FailureReason::kNoPath;
                return report;
            }
            PlanResult r = alo_search(p_a, z_a, site.position, manifold, grid, options);
            report.reason = r.reason;
            report.stats = r.stats;
            if (r.ok()) {
                report.arrival_margin = r.trajectory->arrival_altitude() - grid.dtm_at(site.position);
                report.reachable = *report.arrival_margin >= 0.0;
                report.trajectory = std::move(r.trajectory);
            }
            return report;
        }));
    }
    std::vector<SiteReport> reports;
    reports.reserve(sites.size());
    for (auto &job : jobs) reports.push_back(job.get());
    return reports;
}

std::optional<std::size_t> best_site(const std::vector<SiteReport> &reports) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const SiteReport &r = reports[k];
        if (!r.reachable) continue;
        if (!best) {
            best = k;
            continue;
        }
        const SiteReport &b = reports[*best];
        if (r.site.weight > b.site.weight ||
            (r.site.weight == b.site.weight && r.trajectory->total_loss < b.trajectory->total_loss)) {
            best = k;
        }
    }
    return best;
}

ReplanSession::ReplanSession(std::shared_ptr<const DtmGrid> grid, AircraftModel model, Wind wind, Vec2 position,
                             double altitude, std::vector<Site> sites, double replan_interval,
                             double manifold_resolution, PlannerOptions options)
    : grid_(std::move(grid)), model_(std::move(model)), resolution_(manifold_resolution), options_(options),
      sites_(std::move(sites)), abandoned_(sites_.size(), false), position_(position), altitude_(altitude),
      interval_(replan_interval), next_replan_(altitude - replan_interval) {
    if (!grid_) throw std::invalid_argument("session needs a DTM");
    if (sites_.empty()) throw std::invalid_argument("session needs at least one site");
    if (!(replan_interval > 0.0)) throw std::invalid_argument("replan interval must be positive");
    manifold_ = std::make_unique<AloManifold>(model_, wind, resolution_);
    plan("initial");
}

void ReplanSession::plan(const std::string &trigger) {
    auto search_to = [&](std::size_t k) {
        PlanEvent ev;
        ev.trigger = trigger;
        ev.position = position_;
        ev.altitude = altitude_;
        ev.wind = manifold_->wind();
        ev.site_id = sites_[k].id;
        try {
            PlanResult r = alo_search(position_, altitude_, sites_[k].position, *manifold_, *grid_, options_);
            ev.reason = r.reason;
            ev.trajectory = std::move(r.trajectory);
        } catch (const std::invalid_argument &) {
            ev.reason = FailureReason::kInsufficientAltitude;
        }
        return ev;
    };

    if (active_site_) {
        PlanEvent ev = search_to(*active_site_);
        const bool ok = ev.trajectory.has_value();
        current_ = ev.trajectory;
        events_.push_back(std::move(ev));
        if (ok) return;
        abandoned_[*active_site_] = true;
        active_site_.reset();
    }

    std::vector<Site> remaining;
    std::vector<std::size_t> index;
    for (std::size_t k = 0; k < sites_.size(); ++k) {
        if (!abandoned_[k]) {
            remaining.push_back(sites_[k]);
            index.push_back(k);
        }
    }
    if (remaining.empty()) {
        if (events_.empty()) events_.push_back(search_to(0));
        current_ = events_.back().trajectory;
        return;
    }
    std::vector<SiteReport> reports;
    try {
        reports = reachability(position_, altitude_, remaining, *manifold_, *grid_, options_);
    } catch (const std::invalid_argument &) {
        reports.clear();
    }
    const std::optional<std::size_t> best = best_site(reports);
    PlanEvent ev;
    ev.trigger = events_.empty() ? trigger : "fallback";
    ev.position = position_;
    ev.altitude = altitude_;
    ev.wind = manifold_->wind();
    if (best) {
        active_site_ = index[*best];
        ev.site_id = sites_[*active_site_].id;
        ev.trajectory = std::move(reports[*best].trajectory);
        current_ = ev.trajectory;
    } else {
        current_.reset();
        ev.site_id = remaining.front().id;
        ev.reason = reports.empty() ? FailureReason::kInsufficientAltitude : reports.front().reason;
        if (ev.reason == FailureReason::kNone) ev.reason = FailureReason::kInsufficientAltitude;
        for (std::size_t k : index) abandoned_[k] = true;
    }
    events_.push_back(std::move(ev));
}

void ReplanSession::fly(double loss) {
    if (!current_) return;
    double left = loss;
    std::vector<Vec2> rest{position_};
    Vec2 pos = position_;
    bool moving = true;
    for (const TrajectorySegment &seg : current_->segments) {
        if (!moving) {
            rest.push_back(seg.end);
            continue;
        }
        if (seg.segment_loss <= left) {
            left -= seg.segment_loss;
            pos = seg.end;
            continue;
        }
        const double f = left / seg.segment_loss;
        pos = seg.start + f * (seg.end - seg.start);
        left = 0.0;
        moving = false;
        rest.front() = pos;
        rest.push_back(seg.end);
    }
    position_ = pos;
    altitude_ -= loss - left;
    if (moving) {
        landed_ = true;
        current_.reset();
        return;
    }
    current_ = make_trajectory(rest, altitude_, *manifold_, *grid_);
}

const PlanEvent &ReplanSession::update_wind(const Wind &wind) {
    manifold_ = std::make_unique<AloManifold>(model_, wind, resolution_);
    if (!landed_) plan("wind");
    return events_.back();
}

std::size_t ReplanSession::advance(double altitude_drop) {
    std::size_t replans = 0;
    while (altitude_drop > 1e-9 && current_) {
        const double step = std::min(altitude_drop, altitude_ - next_replan_);
        if (step >= current_->total_loss - 1e-9) {
            fly(current_->total_loss + 1.0);
            break;
        }
        fly(step);
        altitude_drop -= step;
        if (altitude_ <= next_replan_ + 1e-9) {
            next_replan_ -= interval_;
            plan("interval");
            ++replans;
        }
    }
    return replans;
}

void ReplanSession::run(std::vector<WindUpdate> updates) {
    std::sort(updates.begin(), updates.end(),
              [](const WindUpdate &a, const WindUpdate &b) { return a.altitude > b.altitude; });
    std::size_t next = 0;
    while (current_) {
        while (next < updates.size() && updates[next].altitude >= altitude_) update_wind(updates[next++].wind);
        if (!current_) break;
        double stop = next_replan_;
        bool wind_stop = false;
        if (next < updates.size() && updates[next].altitude > stop) {
            stop = updates[next].altitude;
            wind_stop = true;
        }
        const double step = altitude_ - stop;
        if (step >= current_->total_loss - 1e-9) {
            fly(current_->total_loss + 1.0);
            break;
        }
        fly(step);
        if (wind_stop) {
            update_wind(updates[next++].wind);
        } else {
            next_replan_ -= interval_;
            plan("interval");
        }
    }
}

std::vector<PlanEvent> replan_session(Vec2 position, double altitude, const std::vector<Site> &sites,
                                      std::vector<WindUpdate> wind_updates, Wind initial_wind,
                                      std::shared_ptr<const DtmGrid> grid, const AircraftModel &model,
                                      double replan_interval) {
    ReplanSession session(std::move(grid), model, initial_wind, position, altitude, sites, replan_interval);
    session.run(std::move(wind_updates));
    return session.events();
}

}  // namespace glide
