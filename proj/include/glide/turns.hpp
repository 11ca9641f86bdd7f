#pragma once

#include <optional>

#include "glide/aero.hpp"
#include "glide/trajectory.hpp"

namespace glide {

class DtmGrid;

/// Altitude loss of a heading change flown at bank `bank` and V_stall(n(bank)),
/// plus the kinetic-energy exchange (v_g_after^2 - v_g_before^2) / 2g.
/// Throws std::invalid_argument unless bank is in (0, pi/2).
TurnCorrection turn_loss(const AircraftModel &model, double delta_psi_air, double bank, double v_g_before,
                         double v_g_after);

/// Air-mass frame turn radius at V_stall(n(bank)).
double turn_radius(const AircraftModel &model, double bank);

/// min(pi/4, constraint). Throws std::invalid_argument unless constraint is in (0, pi/2).
double optimal_bank(double constraint_max_bank);

/// Signed air-mass heading change between two straight optimal glides with
/// ground headings heading_in and heading_out.
double airmass_turn(const AircraftModel &model, const Wind &wind, double heading_in, double heading_out);

/// Adds a correction at every interior waypoint (and at the start when an
/// initial air-mass heading is given), then re-checks the profile against the
/// DTM and sets infeasible_after_turns on any violation.
Trajectory apply_turn_corrections(const Trajectory &traj, const AircraftModel &model, const Wind &wind,
                                  double bank_limit, const DtmGrid &grid,
                                  std::optional<double> initial_heading_air = std::nullopt);

}  // namespace glide
