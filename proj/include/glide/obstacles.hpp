#pragma once

#include <cstddef>
#include <vector>

#include "glide/geometry.hpp"
#include "glide/terrain.hpp"

namespace glide {

class AloManifold;

/// Closed boundary ring of one 4-connected UNSAFE component. Vertices are
/// grid nodes, collinear runs collapsed. Outer rings have positive signed
/// area in (x, y); holes have negative area. The unsafe interior is always on
/// the left of the traversal direction.
struct ObstaclePolygon {
    int component_id = 0;
    int ring_id = 0;
    bool is_hole = false;
    std::vector<GridNode> vertices;
};

enum class TangentSide { kPlus, kMinus, kOnBoundaryStart };

/// Free tangent point. `side` tells on which side of the ray p -> position
/// the obstacle lies (plus = left in (x, y)); boundary-walk points carry
/// kOnBoundaryStart.
struct Ftp {
    GridNode node;
    Vec2 position;
    int obstacle_id = 0;
    TangentSide side = TangentSide::kPlus;
};

std::vector<ObstaclePolygon> extract_obstacles(const LocalObstacleMap &lomap);

/// Grid-index coordinates of p with near-integer components snapped.
Vec2 grid_coords(const DtmGrid &grid, Vec2 p);

/// True iff p lies in the closure of at least one SAFE square.
bool in_free(Vec2 p, const LocalObstacleMap &lomap);

/// True iff the segment p -> q (meters) crosses no UNSAFE square interior.
/// Running along a square edge is allowed unless both adjacent squares are
/// UNSAFE; passing through a corner is always allowed.
bool directly_reachable(Vec2 p, Vec2 q, const LocalObstacleMap &lomap);

/// Same test in grid-index coordinates.
bool directly_reachable_grid(Vec2 a, Vec2 b, const LocalObstacleMap &lomap);

/// Free tangent points seen from p. Throws std::domain_error when p is not in FREE.
std::vector<Ftp> find_ftps(Vec2 p, const LocalObstacleMap &lomap, const std::vector<ObstaclePolygon> &obstacles);
std::vector<Ftp> find_ftps(Vec2 p, const LocalObstacleMap &lomap);

/// At most two FTPs of `obstacle` that bound the sector containing `target`.
/// Falls back to every FTP of the obstacle when the sector is ambiguous.
std::vector<Ftp> essential_ftps(Vec2 p, Vec2 target, const std::vector<Ftp> &ftps, const ObstaclePolygon &obstacle,
                                const DtmGrid &grid);

enum class ExpandMode { kEssential, kAll };

struct ExpandResult {
    bool target_direct = false;
    std::vector<Ftp> successors;  // empty when target_direct
    std::size_t ftp_count = 0;    // FTPs found before pruning
};

ExpandResult expand_in_map(Vec2 p, Vec2 target, const LocalObstacleMap &lomap, ExpandMode mode = ExpandMode::kEssential);

/// Builds the local obstacle map at (p, altitude) and expands in it.
ExpandResult expand(Vec2 p, double altitude, Vec2 target, const DtmGrid &grid, const AloManifold &manifold,
                    ExpandMode mode = ExpandMode::kEssential);

}  // namespace glide
