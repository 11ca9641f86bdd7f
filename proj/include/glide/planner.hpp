#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glide/aero.hpp"
#include "glide/geometry.hpp"
#include "glide/manifold.hpp"
#include "glide/obstacles.hpp"
#include "glide/terrain.hpp"
#include "glide/trajectory.hpp"

namespace glide {

enum class FailureReason { kNone, kNoPath, kInsufficientAltitude };

const char *failure_name(FailureReason r);

struct SearchStats {
    std::size_t nodes_expanded = 0;
    std::size_t nodes_generated = 0;
    std::size_t ftp_expansions = 0;  // expansions that produced FTP successors
    std::size_t admissibility_violations = 0;
    std::size_t consistency_violations = 0;
};

struct PlannerOptions {
    ExpandMode mode = ExpandMode::kEssential;
    /// Adds the arc part of the turn loss at node generation.
    bool turns_in_search = false;
    double bank_limit = kPi / 4;
    /// Absolute slack (m) for the heuristic soundness checks.
    double heuristic_tolerance = 1e-6;
};

struct PlanResult {
    FailureReason reason = FailureReason::kNone;
    std::optional<Trajectory> trajectory;
    SearchStats stats;
    double lower_bound = 0.0;  // manifold_loss(p_b - p_a)

    bool ok() const { return trajectory.has_value(); }
};

struct SearchNode {
    Vec2 position;
    double g = 0.0;
    double h = 0.0;
    int parent = -1;
    double heading_in = 0.0;  // ground heading of the arriving segment
    bool is_target = false;

    double f() const { return g + h; }
};

/// Parent-chain reversal from `terminal`; throws std::logic_error on a broken chain.
std::vector<Vec2> trace_path(const std::vector<SearchNode> &arena, int terminal);

PlanResult alo_search(Vec2 p_a, double z_a, Vec2 p_b, const AloManifold &manifold, const DtmGrid &grid,
                      const PlannerOptions &options = {});

PlanResult alo_search(Vec2 p_a, double z_a, Vec2 p_b, const AircraftModel &model, const Wind &wind,
                      const DtmGrid &grid, const PlannerOptions &options = {});

struct Site {
    std::string id;
    Vec2 position;
    double weight = 1.0;
};

struct SiteReport {
    Site site;
    bool reachable = false;
    std::optional<double> arrival_margin;
    FailureReason reason = FailureReason::kNone;
    std::optional<Trajectory> trajectory;
    SearchStats stats;
};

/// One concurrent search per site over shared immutable inputs.
std::vector<SiteReport> reachability(Vec2 p_a, double z_a, const std::vector<Site> &sites,
                                     const AloManifold &manifold, const DtmGrid &grid,
                                     const PlannerOptions &options = {});

/// Highest weight among reachable sites, ties broken by smaller loss.
std::optional<std::size_t> best_site(const std::vector<SiteReport> &reports);

inline constexpr double kDefaultReplanInterval = 91.44;

struct WindUpdate {
    double altitude = 0.0;  // applied once the aircraft descends to this altitude
    Wind wind;
};

struct PlanEvent {
    std::string trigger;  // "initial", "interval", "wind", "fallback"
    Vec2 position;
    double altitude = 0.0;
    Wind wind;
    std::string site_id;
    FailureReason reason = FailureReason::kNone;
    std::optional<Trajectory> trajectory;

    double remaining_loss() const { return trajectory ? trajectory->total_loss : 0.0; }
};

/// Simulated descent along the current plan with periodic and wind-triggered
/// replanning. Not thread-safe; callers serialize access.
class ReplanSession {
 public:
    ReplanSession(std::shared_ptr<const DtmGrid> grid, AircraftModel model, Wind wind, Vec2 position,
                  double altitude, std::vector<Site> sites, double replan_interval = kDefaultReplanInterval,
                  double manifold_resolution = kDefaultManifoldResolution, PlannerOptions options = {});

    Vec2 position() const { return position_; }
    double altitude() const { return altitude_; }
    const Wind &wind() const { return manifold_->wind(); }
    const std::vector<PlanEvent> &events() const { return events_; }
    const PlanEvent &latest() const { return events_.back(); }
    std::optional<std::size_t> active_site() const { return active_site_; }
    const std::vector<Site> &sites() const { return sites_; }
    bool landed() const { return landed_; }
    const std::optional<Trajectory> &current_plan() const { return current_; }

    /// Replaces the wind and replans from the current state.
    const PlanEvent &update_wind(const Wind &wind);

    /// Flies the current plan for up to `altitude_drop` meters of altitude
    /// loss, replanning at every interval crossing. Returns the number of
    /// replans performed.
    std::size_t advance(double altitude_drop);

    /// Flies to the end of the plan, applying altitude-tagged wind updates.
    void run(std::vector<WindUpdate> updates = {});

 private:
    void plan(const std::string &trigger);
    // Moves along the active trajectory by `loss` meters of altitude.
    void fly(double loss);

    std::shared_ptr<const DtmGrid> grid_;
    AircraftModel model_;
    std::unique_ptr<AloManifold> manifold_;
    double resolution_;
    PlannerOptions options_;
    std::vector<Site> sites_;
    std::vector<bool> abandoned_;
    Vec2 position_;
    double altitude_;
    double interval_;
    double next_replan_;
    std::optional<std::size_t> active_site_;
    std::vector<PlanEvent> events_;
    std::optional<Trajectory> current_;  // remaining part of the active plan
    bool landed_ = false;
};

std::vector<PlanEvent> replan_session(Vec2 position, double altitude, const std::vector<Site> &sites,
                                      std::vector<WindUpdate> wind_updates, Wind initial_wind,
                                      std::shared_ptr<const DtmGrid> grid, const AircraftModel &model,
                                      double replan_interval = kDefaultReplanInterval);

}  // namespace glide
