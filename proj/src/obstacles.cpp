#include "glide/obstacles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <cstdint>
#include <stdexcept>

#include "glide/aero.hpp"
#include "glide/manifold.hpp"

namespace glide {

namespace {

constexpr double kSnap = 1e-9;
constexpr double kMinParam = 1e-12;

Vec2 node_uv(GridNode n) { return {static_cast<double>(n.i), static_cast<double>(n.j)}; }

double snap(double s) {
    const double r = std::round(s);
    return std::abs(s - r) <= kSnap ? r : s;
}

bool is_integer(double s) { return std::abs(s - std::round(s)) <= kSnap; }

int sign_of(double s, double scale) {
    if (std::abs(s) <= 1e-12 * scale) return 0;
    return s > 0.0 ? 1 : -1;
}

// The obstacle ray p -> V is extended an infinitesimal step past V: the
// square (or both squares, for axis-aligned rays) it enters must be safe.
bool departure_free(GridNode v, Vec2 d, const LocalObstacleMap &m) {
    const double scale = std::max(std::abs(d.x), std::abs(d.y));
    const int su = sign_of(d.x, scale);
    const int sv = sign_of(d.y, scale);
    if (su != 0 && sv != 0) return !m.unsafe(v.i + (su > 0 ? 0 : -1), v.j + (sv > 0 ? 0 : -1));
    if (su == 0) {
        const int jj = v.j + (sv > 0 ? 0 : -1);
        return !m.unsafe(v.i - 1, jj) && !m.unsafe(v.i, jj);
    }
    const int ii = v.i + (su > 0 ? 0 : -1);
    return !m.unsafe(ii, v.j - 1) && !m.unsafe(ii, v.j);
}

TangentSide side_of(GridNode v, Vec2 d, const LocalObstacleMap &m) {
    int score = 0;
    for (int di = -1; di <= 0; ++di) {
        for (int dj = -1; dj <= 0; ++dj) {
            if (!m.unsafe(v.i + di, v.j + dj)) continue;
            const Vec2 center{v.i + di + 0.5 - v.i, v.j + dj + 0.5 - v.j};
            score += cross(d, center) > 0.0 ? 1 : -1;
        }
    }
    return score >= 0 ? TangentSide::kPlus : TangentSide::kMinus;
}

bool on_segment(Vec2 q, Vec2 a, Vec2 b, double tol) {
    const Vec2 ab = b - a;
    const double len = ab.norm();
    if (len == 0.0) return (q - a).norm() <= tol;
    if (std::abs(cross(ab, q - a)) > tol * len) return false;
    const double t = dot(q - a, ab);
    return t >= -tol * len && t <= len * len + tol * len;
}

bool inside_polygon(Vec2 q, const std::vector<Vec2> &poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t k = 0, l = n - 1; k < n; l = k++) {
        const Vec2 a = poly[l];
        const Vec2 b = poly[k];
        if ((a.y > q.y) != (b.y > q.y)) {
            const double x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (q.x < x) inside = !inside;
        }
    }
    return inside;
}

bool on_polygon(Vec2 q, const std::vector<Vec2> &poly, double tol) {
    const std::size_t n = poly.size();
    for (std::size_t k = 0, l = n - 1; k < n; l = k++) {
        if (on_segment(q, poly[l], poly[k], tol)) return true;
    }
    return false;
}

// Angular coverage of a ring seen from p, as a list of [start, start + len]
// arcs. Returns the middle of the widest uncovered gap, or nullopt when the
// ring surrounds p.
std::optional<double> coverage_gap(Vec2 p, const ObstaclePolygon &ring) {
    std::vector<std::pair<double, double>> arcs;
    const std::size_t n = ring.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 a = node_uv(ring.vertices[k]);
        const Vec2 b = node_uv(ring.vertices[(k + 1) % n]);
        if (a == p || b == p) {
            const Vec2 far = a == p ? b : a;
            arcs.emplace_back(wrap_two_pi((far - p).heading()), 0.0);
            continue;
        }
        if (on_segment(p, a, b, 1e-12)) {
            arcs.emplace_back(wrap_two_pi((a - p).heading()), 0.0);
            arcs.emplace_back(wrap_two_pi((b - p).heading()), 0.0);
            continue;
        }
        const double ta = (a - p).heading();
        const double delta = wrap_pi((b - p).heading() - ta);
        if (delta >= 0.0) {
            arcs.emplace_back(wrap_two_pi(ta), delta);
        } else {
            arcs.emplace_back(wrap_two_pi(ta + delta), -delta);
        }
    }
    std::sort(arcs.begin(), arcs.end());
    // Sweep twice around the circle so wrap-around arcs are merged; gaps are
    // only recorded on the second lap.
    double best_gap = 0.0;
    double best_mid = 0.0;
    const std::size_t m = arcs.size();
    double reach = arcs.front().first + arcs.front().second;
    for (std::size_t k = 1; k < 2 * m; ++k) {
        const double start = arcs[k % m].first + (k >= m ? kTwoPi : 0.0);
        if (k >= m && start > reach) {
            const double gap = start - reach;
            if (gap > best_gap) {
                best_gap = gap;
                best_mid = reach + 0.5 * gap;
            }
        }
        reach = std::max(reach, start + arcs[k % m].second);
    }
    if (best_gap <= 1e-12) return std::nullopt;
    return wrap_two_pi(best_mid);
}

}  // namespace

Vec2 grid_coords(const DtmGrid &grid, Vec2 p) {
    const Vec2 uv = grid.to_grid(p);
    return {snap(uv.x), snap(uv.y)};
}

std::vector<ObstaclePolygon> extract_obstacles(const LocalObstacleMap &lomap) {
    const int rows = lomap.rows();
    const int cols = lomap.cols();
    const int srows = rows - 1;
    const int scols = cols - 1;
    const std::size_t nsq = static_cast<std::size_t>(srows) * scols;
    auto sq_index = [&](int i, int j) { return static_cast<std::size_t>(i) * scols + j; };
    auto in_grid_unsafe = [&](int i, int j) {
        return i >= 0 && j >= 0 && i < srows && j < scols && lomap.unsafe(i, j);
    };

    // 4-connected component labels.
    std::vector<int> label(nsq, -1);
    int components = 0;
    std::deque<std::pair<int, int>> queue;
    for (int i = 0; i < srows; ++i) {
        for (int j = 0; j < scols; ++j) {
            if (!lomap.unsafe(i, j) || label[sq_index(i, j)] >= 0) continue;
            label[sq_index(i, j)] = components;
            queue.emplace_back(i, j);
            while (!queue.empty()) {
                auto [ci, cj] = queue.front();
                queue.pop_front();
                const int di[] = {1, -1, 0, 0};
                const int dj[] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int ni = ci + di[d];
                    const int nj = cj + dj[d];
                    if (in_grid_unsafe(ni, nj) && label[sq_index(ni, nj)] < 0) {
                        label[sq_index(ni, nj)] = components;
                        queue.emplace_back(ni, nj);
                    }
                }
            }
            ++components;
        }
    }
    if (components == 0) return {};

    // Directed boundary edges, interior on the left. Side s of square (i, j):
    // 0: (i,j)->(i+1,j)  1: (i+1,j)->(i+1,j+1)  2: (i+1,j+1)->(i,j+1)  3: (i,j+1)->(i,j)
    static constexpr int kStart[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    static constexpr int kNeighbor[4][2] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    const std::size_t nvert = static_cast<std::size_t>(rows) * cols;
    std::vector<std::int64_t> out(nvert * 2, -1);
    std::vector<std::uint8_t> boundary(nsq * 4, 0);
    auto vid = [&](int i, int j) { return static_cast<std::size_t>(i) * cols + j; };
    for (int i = 0; i < srows; ++i) {
        for (int j = 0; j < scols; ++j) {
            if (!lomap.unsafe(i, j)) continue;
            for (int s = 0; s < 4; ++s) {
                if (in_grid_unsafe(i + kNeighbor[s][0], j + kNeighbor[s][1])) continue;
                const std::size_t e = sq_index(i, j) * 4 + s;
                boundary[e] = 1;
                const std::size_t v = vid(i + kStart[s][0], j + kStart[s][1]);
                if (out[2 * v] < 0) {
                    out[2 * v] = static_cast<std::int64_t>(e);
                } else {
                    out[2 * v + 1] = static_cast<std::int64_t>(e);
                }
            }
        }
    }

    auto edge_start = [&](std::size_t e) {
        const std::size_t sq = e / 4;
        const int s = static_cast<int>(e % 4);
        const int i = static_cast<int>(sq / scols);
        const int j = static_cast<int>(sq % scols);
        return GridNode{i + kStart[s][0], j + kStart[s][1]};
    };
    auto edge_end = [&](std::size_t e) {
        const std::size_t sq = e / 4;
        const int s = static_cast<int>((e % 4 + 1) % 4);
        const int i = static_cast<int>(sq / scols);
        const int j = static_cast<int>(sq % scols);
        return GridNode{i + kStart[s][0], j + kStart[s][1]};
    };

    std::vector<ObstaclePolygon> rings;
    std::vector<std::uint8_t> visited(nsq * 4, 0);
    for (std::size_t e0 = 0; e0 < nsq * 4; ++e0) {
        if (!boundary[e0] || visited[e0]) continue;
        std::vector<GridNode> raw;
        std::size_t cur = e0;
        do {
            visited[cur] = 1;
            raw.push_back(edge_start(cur));
            const GridNode w = edge_end(cur);
            const std::size_t v = vid(w.i, w.j);
            std::int64_t next = out[2 * v];
            if (out[2 * v + 1] >= 0 && static_cast<std::size_t>(next) / 4 != cur / 4) next = out[2 * v + 1];
            if (next < 0) throw std::logic_error("open obstacle boundary");
            cur = static_cast<std::size_t>(next);
        } while (cur != e0);

        std::vector<GridNode> verts;
        const std::size_t n = raw.size();
        for (std::size_t k = 0; k < n; ++k) {
            const GridNode a = raw[(k + n - 1) % n];
            const GridNode b = raw[k];
            const GridNode c = raw[(k + 1) % n];
            const long long cr = static_cast<long long>(b.i - a.i) * (c.j - b.j) -
                                 static_cast<long long>(b.j - a.j) * (c.i - b.i);
            if (cr != 0) verts.push_back(b);
        }
        long long area2 = 0;
        for (std::size_t k = 0; k < verts.size(); ++k) {
            const GridNode a = verts[k];
            const GridNode b = verts[(k + 1) % verts.size()];
            area2 += static_cast<long long>(a.i) * b.j - static_cast<long long>(b.i) * a.j;
        }
        ObstaclePolygon ring;
        ring.component_id = label[e0 / 4];
        ring.ring_id = static_cast<int>(rings.size());
        ring.is_hole = area2 < 0;
        ring.vertices = std::move(verts);
        rings.push_back(std::move(ring));
    }
    return rings;
}

bool in_free(Vec2 p, const LocalObstacleMap &lomap) {
    const Vec2 uv = lomap.grid().to_grid(p);
    const double u = snap(uv.x);
    const double v = snap(uv.y);
    int is[2];
    int js[2];
    int ni = 0;
    int nj = 0;
    if (is_integer(u)) {
        is[ni++] = static_cast<int>(std::round(u)) - 1;
        is[ni++] = static_cast<int>(std::round(u));
    } else {
        is[ni++] = static_cast<int>(std::floor(u));
    }
    if (is_integer(v)) {
        js[nj++] = static_cast<int>(std::round(v)) - 1;
        js[nj++] = static_cast<int>(std::round(v));
    } else {
        js[nj++] = static_cast<int>(std::floor(v));
    }
    for (int a = 0; a < ni; ++a) {
        for (int b = 0; b < nj; ++b) {
            if (!lomap.unsafe(is[a], js[b])) return true;
        }
    }
    return false;
}

namespace {

bool in_free_grid(Vec2 uv, const LocalObstacleMap &lomap) { return in_free(lomap.grid().from_grid(uv), lomap); }

void line_params(double s, double d, std::vector<double> &out) {
    if (d == 0.0) return;
    const double lo = std::min(s, s + d);
    const double hi = std::max(s, s + d);
    for (double k = std::ceil(lo); k <= std::floor(hi); k += 1.0) out.push_back((k - s) / d);
}

}  // namespace

bool directly_reachable_grid(Vec2 a, Vec2 b, const LocalObstacleMap &lomap) {
    const double du = b.x - a.x;
    const double dv = b.y - a.y;
    if (du == 0.0 && dv == 0.0) return in_free_grid(a, lomap);
    thread_local std::vector<double> ts;
    ts.clear();
    ts.push_back(0.0);
    ts.push_back(1.0);
    line_params(a.x, du, ts);
    line_params(a.y, dv, ts);
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 1; k < ts.size(); ++k) {
        const double t0 = std::clamp(ts[k - 1], 0.0, 1.0);
        const double t1 = std::clamp(ts[k], 0.0, 1.0);
        if (t1 - t0 <= kMinParam) continue;
        const double tm = 0.5 * (t0 + t1);
        const double mu = a.x + tm * du;
        const double mv = a.y + tm * dv;
        if (du == 0.0 && is_integer(mu)) {
            const int line = static_cast<int>(std::round(mu));
            const int j = static_cast<int>(std::floor(mv));
            if (lomap.unsafe(line - 1, j) && lomap.unsafe(line, j)) return false;
            continue;
        }
        if (dv == 0.0 && is_integer(mv)) {
            const int line = static_cast<int>(std::round(mv));
            const int i = static_cast<int>(std::floor(mu));
            if (lomap.unsafe(i, line - 1) && lomap.unsafe(i, line)) return false;
            continue;
        }
        if (lomap.unsafe(static_cast<int>(std::floor(mu)), static_cast<int>(std::floor(mv)))) return false;
    }
    return true;
}

bool directly_reachable(Vec2 p, Vec2 q, const LocalObstacleMap &lomap) {
    return directly_reachable_grid(grid_coords(lomap.grid(), p), grid_coords(lomap.grid(), q), lomap);
}

std::vector<Ftp> find_ftps(Vec2 p, const LocalObstacleMap &lomap, const std::vector<ObstaclePolygon> &obstacles) {
    if (!in_free(p, lomap)) throw std::domain_error("find_ftps: point lies inside an obstacle");
    const DtmGrid &grid = lomap.grid();
    const Vec2 uv = grid_coords(grid, p);
    std::vector<Ftp> found;

    for (const ObstaclePolygon &ring : obstacles) {
        for (const GridNode &v : ring.vertices) {
            const Vec2 vv = node_uv(v);
            if (vv == uv) continue;
            const Vec2 d = vv - uv;
            if (!departure_free(v, d, lomap)) continue;
            if (!directly_reachable_grid(uv, vv, lomap)) continue;
            found.push_back({v, grid.node_position(v), ring.ring_id, side_of(v, d, lomap)});
        }
    }

    // Walking along the boundary when p sits on it.
    for (const ObstaclePolygon &ring : obstacles) {
        const std::size_t n = ring.vertices.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 a = node_uv(ring.vertices[k]);
            const Vec2 b = node_uv(ring.vertices[(k + 1) % n]);
            std::vector<GridNode> walk;
            if (a == uv) {
                walk.push_back(ring.vertices[(k + 1) % n]);
                walk.push_back(ring.vertices[(k + n - 1) % n]);
            } else if (b != uv && on_segment(uv, a, b, 1e-12)) {
                walk.push_back(ring.vertices[k]);
                walk.push_back(ring.vertices[(k + 1) % n]);
            }
            for (const GridNode &w : walk) {
                const bool known = std::any_of(found.begin(), found.end(), [&](const Ftp &f) { return f.node == w; });
                if (known || !directly_reachable_grid(uv, node_uv(w), lomap)) continue;
                found.push_back({w, grid.node_position(w), ring.ring_id, TangentSide::kOnBoundaryStart});
            }
        }
    }

    // Collinear candidates: keep the nearest along each direction.
    std::vector<bool> drop(found.size(), false);
    for (std::size_t a = 0; a < found.size(); ++a) {
        const Vec2 da = node_uv(found[a].node) - uv;
        for (std::size_t b = 0; b < found.size(); ++b) {
            if (a == b || drop[b]) continue;
            const Vec2 db = node_uv(found[b].node) - uv;
            if (dot(da, db) <= 0.0) continue;
            if (std::abs(cross(da, db)) > 1e-12 * da.norm() * db.norm()) continue;
            if (db.norm() < da.norm()) {
                drop[a] = true;
                break;
            }
        }
    }
    std::vector<Ftp> result;
    for (std::size_t k = 0; k < found.size(); ++k) {
        if (!drop[k]) result.push_back(found[k]);
    }
    return result;
}

std::vector<Ftp> find_ftps(Vec2 p, const LocalObstacleMap &lomap) {
    return find_ftps(p, lomap, extract_obstacles(lomap));
}

std::vector<Ftp> essential_ftps(Vec2 p, Vec2 target, const std::vector<Ftp> &ftps, const ObstaclePolygon &obstacle,
                                const DtmGrid &grid) {
    if (ftps.size() <= 2) return ftps;
    const Vec2 uv = grid_coords(grid, p);
    const Vec2 t = grid_coords(grid, target);

    std::vector<Vec2> ring_uv;
    ring_uv.reserve(obstacle.vertices.size());
    std::map<GridNode, std::size_t> index_of;
    for (std::size_t k = 0; k < obstacle.vertices.size(); ++k) {
        ring_uv.push_back(node_uv(obstacle.vertices[k]));
        index_of[obstacle.vertices[k]] = k;
    }
    if (inside_polygon(t, ring_uv) || on_polygon(t, ring_uv, 1e-9)) return ftps;
    for (const Ftp &f : ftps) {
        if (!index_of.contains(f.node)) return ftps;
    }

    const std::optional<double> gap = coverage_gap(uv, obstacle);
    const double origin = gap.value_or(0.0);
    std::vector<std::size_t> order(ftps.size());
    std::vector<double> angle(ftps.size());
    for (std::size_t k = 0; k < ftps.size(); ++k) {
        order[k] = k;
        angle[k] = wrap_two_pi((node_uv(ftps[k].node) - uv).heading() - origin);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });

    const std::size_t n = order.size();
    const std::size_t sectors = gap ? n - 1 : n;
    const std::size_t ring_n = ring_uv.size();
    int hits = 0;
    std::size_t hit = 0;
    for (std::size_t s = 0; s < sectors; ++s) {
        const Ftp &fa = ftps[order[s]];
        const Ftp &fb = ftps[order[(s + 1) % n]];
        std::vector<Vec2> poly{uv};
        std::size_t k = index_of[fa.node];
        const std::size_t kb = index_of[fb.node];
        poly.push_back(ring_uv[k]);
        while (k != kb) {
            k = (k + 1) % ring_n;
            poly.push_back(ring_uv[k]);
        }
        if (on_polygon(t, poly, 1e-9)) return ftps;
        if (inside_polygon(t, poly)) {
            ++hits;
            hit = s;
        }
    }
    if (hits == 1) return {ftps[order[hit]], ftps[order[(hit + 1) % n]]};
    if (hits == 0 && gap) return {ftps[order.front()], ftps[order.back()]};
    return ftps;
}

ExpandResult expand_in_map(Vec2 p, Vec2 target, const LocalObstacleMap &lomap, ExpandMode mode) {
    ExpandResult result;
    if (!in_free(p, lomap)) return result;
    if (directly_reachable(p, target, lomap)) {
        result.target_direct = true;
        return result;
    }
    const std::vector<ObstaclePolygon> rings = extract_obstacles(lomap);
    const std::vector<Ftp> ftps = find_ftps(p, lomap, rings);
    result.ftp_count = ftps.size();
    if (mode == ExpandMode::kAll) {
        result.successors = ftps;
        return result;
    }
    std::vector<std::vector<Ftp>> per_ring(rings.size());
    for (const Ftp &f : ftps) per_ring[static_cast<std::size_t>(f.obstacle_id)].push_back(f);
    for (std::size_t r = 0; r < rings.size(); ++r) {
        if (per_ring[r].empty()) continue;
        for (const Ftp &f : essential_ftps(p, target, per_ring[r], rings[r], lomap.grid())) {
            const bool dup = std::any_of(result.successors.begin(), result.successors.end(),
                                         [&](const Ftp &g) { return g.node == f.node; });
            if (!dup) result.successors.push_back(f);
        }
    }
    return result;
}

ExpandResult expand(Vec2 p, double altitude, Vec2 target, const DtmGrid &grid, const AloManifold &manifold,
                    ExpandMode mode) {
    const LocalObstacleMap lomap = build_local_obstacle_map(grid, manifold, p, altitude);
    return expand_in_map(p, target, lomap, mode);
}

}  // namespace glide
