#include "glide/turns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glide/terrain.hpp"

namespace glide {

namespace {

void check_bank(double bank) {
    if (!(bank > 0.0 && bank < kPi / 2)) throw std::invalid_argument("bank angle must be in (0, pi/2)");
}

}  // namespace

double turn_radius(const AircraftModel &model, double bank) {
    check_bank(bank);
    const double v = v_stall(model, 1.0 / std::cos(bank));
    return v * v / (model.gravity() * std::tan(bank));
}

TurnCorrection turn_loss(const AircraftModel &model, double delta_psi_air, double bank, double v_g_before,
                         double v_g_after) {
    check_bank(bank);
    const double vs4 = std::pow(model.v_stall1(), 4);
    const double v04 = std::pow(model.v0(), 4);
    TurnCorrection c;
    c.delta_psi_air = delta_psi_air;
    c.bank = bank;
    c.arc_loss = 2.0 * model.k_sr() / model.gravity() * (vs4 + v04) / std::sin(2.0 * bank) * std::abs(delta_psi_air);
    c.energy_term = (v_g_after * v_g_after - v_g_before * v_g_before) / (2.0 * model.gravity());
    c.total = c.arc_loss + c.energy_term;
    c.radius = turn_radius(model, bank);
    return c;
}

double optimal_bank(double constraint_max_bank) {
    if (!(constraint_max_bank > 0.0 && constraint_max_bank < kPi / 2)) {
        throw std::invalid_argument("bank constraint must be in (0, pi/2)");
    }
    return std::min(kPi / 4, constraint_max_bank);
}

double airmass_turn(const AircraftModel &model, const Wind &wind, double heading_in, double heading_out) {
    const GlideSolution a = optimal_glide(model, wind, heading_in);
    const GlideSolution b = optimal_glide(model, wind, heading_out);
    const double psi_a = airmass_heading(heading_in, a.v_ground, wind).heading;
    const double psi_b = airmass_heading(heading_out, b.v_ground, wind).heading;
    return wrap_pi(psi_b - psi_a);
}

Trajectory apply_turn_corrections(const Trajectory &traj, const AircraftModel &model, const Wind &wind,
                                  double bank_limit, const DtmGrid &grid, std::optional<double> initial_heading_air) {
    if (traj.segments.empty()) throw std::invalid_argument("trajectory has no segments");
    const double bank = optimal_bank(bank_limit);
    Trajectory out = traj;
    out.turn_corrections.clear();

    auto psi_of = [&](const TrajectorySegment &s) {
        return airmass_heading(s.heading_g, s.v_ground, wind).heading;
    };

    if (initial_heading_air) {
        const TrajectorySegment &first = out.segments.front();
        TurnCorrection c = turn_loss(model, wrap_pi(psi_of(first) - *initial_heading_air), bank, first.v_ground,
                                     first.v_ground);
        c.waypoint_index = 0;
        c.at_waypoint = first.start;
        out.turn_corrections.push_back(c);
    }
    for (std::size_t k = 1; k < out.segments.size(); ++k) {
        const TrajectorySegment &before = out.segments[k - 1];
        const TrajectorySegment &after = out.segments[k];
        if (before.length == 0.0 || after.length == 0.0) continue;
        TurnCorrection c =
            turn_loss(model, wrap_pi(psi_of(after) - psi_of(before)), bank, before.v_ground, after.v_ground);
        c.waypoint_index = static_cast<int>(k);
        c.at_waypoint = after.start;
        out.turn_corrections.push_back(c);
    }
    rebuild_profile(out, grid);
    out.turns_applied = true;
    out.infeasible_after_turns = false;
    for (const ProfileSample &s : out.altitude_profile) {
        if (std::isnan(s.dtm) || s.altitude < s.dtm) {
            out.infeasible_after_turns = true;
            break;
        }
    }
    return out;
}

}  // namespace glide
