#include "glide/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "glide/manifold.hpp"
#include "glide/terrain.hpp"

namespace glide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<GridNode> step_set(int connectivity) {
    std::vector<GridNode> steps{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    if (connectivity == 16) {
        for (int a : {-1, 1}) {
            for (int b : {-2, 2}) {
                steps.push_back({a, b});
                steps.push_back({b, a});
            }
        }
    } else if (connectivity != 8) {
        throw std::invalid_argument("connectivity must be 8 or 16");
    }
    return steps;
}

}  // namespace

OracleResult dense_dijkstra(GridNode a, double z_a, GridNode b, const AloManifold &manifold, const DtmGrid &grid,
                            int connectivity) {
    const std::vector<GridNode> steps = step_set(connectivity);
    const int rows = grid.rows();
    const int cols = grid.cols();
    auto on_grid = [&](GridNode n) { return n.i >= 0 && n.j >= 0 && n.i < rows && n.j < cols; };
    if (!on_grid(a) || !on_grid(b)) throw std::invalid_argument("oracle endpoints must be grid nodes");

    OracleResult result;
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    auto id = [&](GridNode g) { return static_cast<std::size_t>(g.i) * cols + g.j; };
    std::vector<double> dist(n, kInf);
    std::vector<std::int64_t> parent(n, -1);
    std::vector<bool> done(n, false);
    if (z_a < grid.dtm_node(a)) return result;

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[id(a)] = 0.0;
    pq.push({0.0, id(a)});

    while (!pq.empty()) {
        const auto [d, k] = pq.top();
        pq.pop();
        if (done[k]) continue;
        done[k] = true;
        ++result.settled;
        const GridNode u{static_cast<int>(k / cols), static_cast<int>(k % cols)};
        if (u == b) break;
        const double alt = z_a - d;
        const Vec2 pu = grid.node_position(u);

        auto corner_ok = [&](int ci, int cj) {
            const Vec2 pc = grid.node_position(ci, cj);
            const double lo = alt - manifold.loss(pc.x - pu.x, pc.y - pu.y) - grid.dtm_node(ci, cj);
            return lo >= 0.0;
        };
        auto square_safe = [&](int si, int sj) {
            if (si < 0 || sj < 0 || si >= rows - 1 || sj >= cols - 1) return false;
            return corner_ok(si, sj) && corner_ok(si + 1, sj) && corner_ok(si, sj + 1) && corner_ok(si + 1, sj + 1);
        };

        for (const GridNode &s : steps) {
            const GridNode w{u.i + s.i, u.j + s.j};
            if (!on_grid(w) || done[id(w)]) continue;
            bool allowed = true;
            for (int q = 0; q < 8 && allowed; ++q) {
                const double t = (q + 0.5) / 8.0;
                const double pu_i = u.i + t * s.i;
                const double pv_j = u.j + t * s.j;
                if (s.i == 0) {
                    const int sj = static_cast<int>(std::floor(pv_j));
                    allowed = square_safe(u.i - 1, sj) || square_safe(u.i, sj);
                } else if (s.j == 0) {
                    const int si = static_cast<int>(std::floor(pu_i));
                    allowed = square_safe(si, u.j - 1) || square_safe(si, u.j);
                } else {
                    allowed = square_safe(static_cast<int>(std::floor(pu_i)), static_cast<int>(std::floor(pv_j)));
                }
            }
            if (!allowed) continue;
            const Vec2 pw = grid.node_position(w);
            const double weight = manifold.loss(pw.x - pu.x, pw.y - pu.y);
            if (!std::isfinite(weight)) continue;
            if (weight < 0.0) throw std::logic_error("negative oracle edge weight");
            const double nd = d + weight;
            if (nd < dist[id(w)]) {
                dist[id(w)] = nd;
                parent[id(w)] = static_cast<std::int64_t>(k);
                pq.push({nd, id(w)});
            }
        }
    }

    if (!done[id(b)]) return result;
    result.found = true;
    result.loss = dist[id(b)];
    for (std::int64_t k = static_cast<std::int64_t>(id(b)); k >= 0; k = parent[static_cast<std::size_t>(k)]) {
        result.path.push_back({static_cast<int>(k / cols), static_cast<int>(k % cols)});
    }
    std::reverse(result.path.begin(), result.path.end());
    return result;
}

double lattice_ratio(const AloManifold &manifold, const DtmGrid &grid, int connectivity) {
    std::vector<Vec2> dirs;
    for (const GridNode &s : step_set(connectivity)) dirs.push_back({s.i * grid.dx(), s.j * grid.dy()});
    std::sort(dirs.begin(), dirs.end(),
              [](Vec2 a, Vec2 b) { return wrap_two_pi(a.heading()) < wrap_two_pi(b.heading()); });
    double worst = 1.0;
    constexpr int kSamples = 7200;
    for (int q = 0; q < kSamples; ++q) {
        const double theta = kTwoPi * q / kSamples;
        const Vec2 d{std::cos(theta), std::sin(theta)};
        const double direct = manifold.loss(d.x, d.y);
        if (!std::isfinite(direct)) continue;
        std::size_t k = 0;
        while (k < dirs.size() && wrap_two_pi(dirs[k].heading()) <= theta) ++k;
        const Vec2 e1 = dirs[(k + dirs.size() - 1) % dirs.size()];
        const Vec2 e2 = dirs[k % dirs.size()];
        const double det = cross(e1, e2);
        if (det == 0.0) continue;
        const double ca = cross(d, e2) / det;
        const double cb = cross(e1, d) / det;
        const double lattice = ca * manifold.loss(e1.x, e1.y) + cb * manifold.loss(e2.x, e2.y);
        if (!std::isfinite(lattice)) continue;
        worst = std::max(worst, lattice / direct);
    }
    return worst;
}

double discretization_bound(const AloManifold &manifold, const DtmGrid &grid, double planner_loss,
                            std::size_t segments, int connectivity) {
    const double ratio = lattice_ratio(manifold, grid, connectivity);
    const double diagonal = std::hypot(grid.dx(), grid.dy());
    return (ratio - 1.0) * planner_loss +
           2.0 * diagonal * manifold.max_finite_slope() * static_cast<double>(segments + 1);
}

FeasibilityReport verify_feasibility(const Trajectory &traj, const DtmGrid &grid) {
    FeasibilityReport report;
    report.min_clearance = kInf;
    std::vector<double> step_at(traj.waypoints.size() + 1, 0.0);
    for (const TurnCorrection &c : traj.turn_corrections) {
        if (c.waypoint_index >= 0 && static_cast<std::size_t>(c.waypoint_index) < step_at.size()) {
            step_at[static_cast<std::size_t>(c.waypoint_index)] += c.total;
        }
    }
    const double spacing = std::min(grid.dx(), grid.dy());

    auto check = [&](Vec2 p, double altitude, double s) {
        ++report.samples;
        double clearance = -kInf;
        if (grid.contains(p)) clearance = altitude - grid.dtm_at(p);
        if (clearance < report.min_clearance) {
            report.min_clearance = clearance;
            report.worst_position = p;
            report.worst_s = s;
        }
        if (clearance < 0.0) {
            report.feasible = false;
            report.violations.push_back(p);
        }
    };

    double altitude = traj.start_altitude;
    double s0 = 0.0;
    check(traj.start, altitude, 0.0);
    for (std::size_t k = 0; k < traj.segments.size(); ++k) {
        const TrajectorySegment &seg = traj.segments[k];
        altitude -= step_at[k];
        const int pieces = std::max(1, static_cast<int>(std::ceil(seg.length / spacing)));
        for (int q = 0; q <= pieces; ++q) {
            const double f = static_cast<double>(q) / pieces;
            check(seg.start + f * (seg.end - seg.start), altitude - f * seg.segment_loss, s0 + f * seg.length);
        }
        altitude -= seg.segment_loss;
        s0 += seg.length;
    }
    if (!traj.segments.empty()) {
        altitude -= step_at[traj.segments.size()];
        check(traj.segments.back().end, altitude, s0);
    }
    return report;
}

}  // namespace glide
