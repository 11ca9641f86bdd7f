#pragma once

#include <cstddef>
#include <vector>

#include "glide/geometry.hpp"
#include "glide/trajectory.hpp"

namespace glide {

class AloManifold;
class DtmGrid;

struct OracleResult {
    bool found = false;
    double loss = 0.0;
    std::vector<GridNode> path;
    double discretization_bound = 0.0;
    std::size_t settled = 0;
};

/// Dense-grid Dijkstra over DTM nodes with 8- or 16-neighbor steps. A step
/// u -> w taken with accumulated loss d is allowed iff every square the step
/// crosses has all four corners at or below the straight glide from
/// (u, z_a - d), i.e. the square is safe as seen from that state.
/// Throws std::invalid_argument for off-grid endpoints or bad connectivity.
OracleResult dense_dijkstra(GridNode a, double z_a, GridNode b, const AloManifold &manifold, const DtmGrid &grid,
                            int connectivity = 16);

/// Worst ratio between the cheapest lattice path and the straight loss over
/// all headings, for the given step set.
double lattice_ratio(const AloManifold &manifold, const DtmGrid &grid, int connectivity = 16);

/// (ratio - 1) * planner_loss + 2 * diagonal * max_slope * (segments + 1).
double discretization_bound(const AloManifold &manifold, const DtmGrid &grid, double planner_loss,
                            std::size_t segments, int connectivity = 16);

struct FeasibilityReport {
    bool feasible = true;
    double min_clearance = 0.0;
    Vec2 worst_position;
    double worst_s = 0.0;
    std::size_t samples = 0;
    std::vector<Vec2> violations;
};

/// Re-samples the trajectory at one grid spacing (segments plus turn
/// corrections) and checks altitude >= DTM everywhere.
FeasibilityReport verify_feasibility(const Trajectory &traj, const DtmGrid &grid);

}  // namespace glide
