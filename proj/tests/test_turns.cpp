#include <gtest/gtest.h>

#include "glide/oracle.hpp"
#include "glide/trajectory.hpp"
#include "glide/turns.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace glide;
using testsupport::cessna;

namespace {

double deg(double d) { return d * kPi / 180.0; }

}  // namespace

TEST(TurnLoss, ArcTermMatchesQuadrature) {
    const AircraftParams p = cessna();
    const AircraftModel m(p);
    for (double dpsi : {10.0, 45.0, 90.0, 135.0, 180.0}) {
        for (double bank : {15.0, 30.0, 45.0}) {
            const double v = oracle::stall_speed(p, 1.0 / std::cos(deg(bank)));
            const double ref = oracle::turn_quadrature(p, deg(dpsi), deg(bank), v);
            const TurnCorrection c = turn_loss(m, deg(dpsi), deg(bank), 40.0, 40.0);
            EXPECT_LT(std::abs(c.arc_loss - ref) / ref, 1e-3) << dpsi << " " << bank;
        }
    }
}

TEST(TurnLoss, CessnaQuarterTurnAtFortyFiveDegrees) {
    const TurnCorrection c = turn_loss(AircraftModel(cessna()), kPi / 2, kPi / 4, 35.0, 35.0);
    EXPECT_NEAR(c.arc_loss, 23.84816, 1e-4);
    EXPECT_EQ(c.energy_term, 0.0);
    EXPECT_EQ(c.total, c.arc_loss);
}

TEST(TurnLoss, ZeroHeadingChangeLeavesOnlyEnergyTerm) {
    const AircraftModel m(cessna());
    const TurnCorrection c = turn_loss(m, 0.0, kPi / 4, 30.0, 40.0);
    EXPECT_EQ(c.arc_loss, 0.0);
    EXPECT_NEAR(c.total, (1600.0 - 900.0) / (2.0 * m.gravity()), 1e-12);
    EXPECT_LT(turn_loss(m, 0.0, kPi / 4, 40.0, 30.0).total, 0.0);
}

TEST(TurnLoss, ArcProportionalToHeadingChange) {
    const AircraftModel m(cessna());
    const double unit = turn_loss(m, 1.0, deg(30.0), 1.0, 1.0).arc_loss;
    for (double d : {0.1, 0.7, 2.5, -1.3}) EXPECT_NEAR(turn_loss(m, d, deg(30.0), 1.0, 1.0).arc_loss, std::abs(d) * unit, 1e-12);
}

TEST(TurnLoss, BankSweepMinimumAtFortyFive) {
    const AircraftModel m(cessna());
    double best = 1e300, best_bank = 0.0;
    for (double b : {15.0, 30.0, 45.0, 60.0}) {
        const double a = turn_loss(m, kPi / 2, deg(b), 1.0, 1.0).arc_loss;
        if (a < best) {
            best = a;
            best_bank = b;
        }
    }
    EXPECT_EQ(best_bank, 45.0);
    EXPECT_THROW(turn_loss(m, 1.0, 0.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(turn_loss(m, 1.0, kPi / 2, 1.0, 1.0), std::invalid_argument);
}

TEST(TurnLoss, StallSpeedIsTheCheapestTurnSpeed) {
    const AircraftParams p = cessna();
    for (double bank : {15.0, 30.0, 45.0, 60.0}) {
        const double n = 1.0 / std::cos(deg(bank));
        const double vs = oracle::stall_speed(p, n);
        auto per_rad = [&](double v) { return oracle::drag_sink_rate(p, v, n) * v / (p.gravity * std::tan(deg(bank))); };
        for (double v = vs; v < p.v_max_mps; v += 0.5) EXPECT_LE(per_rad(vs), per_rad(v) + 1e-12);
    }
}

TEST(TurnRadius, FlownAtLoadFactorStallSpeed) {
    const AircraftParams p = cessna();
    const AircraftModel m(p);
    for (double bank : {15.0, 30.0, 45.0}) {
        const double v = oracle::stall_speed(p, 1.0 / std::cos(deg(bank)));
        EXPECT_NEAR(turn_radius(m, deg(bank)), v * v / (p.gravity * std::tan(deg(bank))), 1e-9);
        EXPECT_GT(turn_radius(m, deg(bank)), 0.0);
    }
}

TEST(OptimalBank, ClampsToFortyFive) {
    EXPECT_DOUBLE_EQ(optimal_bank(deg(89.0)), kPi / 4);
    EXPECT_DOUBLE_EQ(optimal_bank(deg(80.0)), kPi / 4);
    EXPECT_DOUBLE_EQ(optimal_bank(deg(30.0)), deg(30.0));
    EXPECT_THROW(optimal_bank(0.0), std::invalid_argument);
    EXPECT_THROW(optimal_bank(deg(95.0)), std::invalid_argument);
}

TEST(AirmassTurn, StillAirMatchesGroundTurn) {
    const AircraftModel m(cessna());
    EXPECT_NEAR(airmass_turn(m, {}, 0.0, kPi / 2), kPi / 2, 1e-12);
    EXPECT_NEAR(airmass_turn(m, {}, 0.3, -0.4), -0.7, 1e-12);
}

TEST(AirmassTurn, CrosswindChangesTheTurnAngle) {
    const AircraftModel m(cessna());
    const Wind w{0.0, 10.0};
    const double dpsi = airmass_turn(m, w, 0.0, kPi / 2);
    EXPECT_GT(std::abs(dpsi - kPi / 2), deg(1.0));
    // Forward check on the wind triangle for each leg.
    for (double h : {0.0, kPi / 2}) {
        const GlideSolution g = optimal_glide(m, w, h);
        const AirmassHeading a = airmass_heading(h, g.v_ground, w);
        EXPECT_NEAR(a.v_air, g.v_air, 1e-9);
    }
}

namespace {

Trajectory zigzag(const AloManifold &m, const DtmGrid &g, double altitude) {
    return make_trajectory({{300.0, 300.0}, {1200.0, 300.0}, {1200.0, 1200.0}, {300.0, 1200.0}, {300.0, 2100.0}},
                           altitude, m, g);
}

}  // namespace

TEST(ApplyTurns, CorrectionsAtInteriorWaypoints) {
    const DtmGrid g = testsupport::flat_grid(90, 90, 30.0, 0.0, 50.0);
    const AircraftModel model(cessna());
    const AloManifold m(model, {});
    const Trajectory t = zigzag(m, g, 2000.0);
    const Trajectory c = apply_turn_corrections(t, model, {}, kPi / 4, g);
    ASSERT_EQ(c.turn_corrections.size(), 3u);
    double sum = 0.0;
    for (const TurnCorrection &tc : c.turn_corrections) {
        EXPECT_NEAR(std::abs(tc.delta_psi_air), kPi / 2, 1e-12);
        EXPECT_NEAR(tc.total, tc.arc_loss + tc.energy_term, 1e-12);
        EXPECT_NEAR(tc.arc_loss, 23.84816, 1e-4);
        sum += tc.total;
    }
    EXPECT_NEAR(c.total_loss, t.total_loss + sum, 1e-9);
    EXPECT_TRUE(c.turns_applied);
    EXPECT_FALSE(c.infeasible_after_turns);
    EXPECT_TRUE(verify_feasibility(c, g).feasible);
}

TEST(ApplyTurns, EnergyTermsTelescope) {
    const DtmGrid g = testsupport::flat_grid(90, 90, 30.0, 0.0, 50.0);
    const AircraftModel model(cessna());
    const Wind w{7.0, -3.0};
    const AloManifold m(model, w);
    const Trajectory c = apply_turn_corrections(zigzag(m, g, 2000.0), model, w, kPi / 4, g);
    double energy = 0.0;
    for (const TurnCorrection &tc : c.turn_corrections) energy += tc.energy_term;
    const double first = c.segments.front().v_ground, last = c.segments.back().v_ground;
    EXPECT_NEAR(energy, (last * last - first * first) / (2.0 * model.gravity()), 1e-9);
    // A closed loop returns to the starting ground speed.
    const Trajectory loop = make_trajectory(
        {{300.0, 300.0}, {1200.0, 300.0}, {1200.0, 1200.0}, {300.0, 1200.0}, {300.0, 300.0}, {1200.0, 300.0}}, 2000.0,
        m, g);
    double loop_energy = 0.0;
    for (const TurnCorrection &tc : apply_turn_corrections(loop, model, w, kPi / 4, g).turn_corrections) {
        loop_energy += tc.energy_term;
    }
    EXPECT_NEAR(loop_energy, 0.0, 1e-9);
}

TEST(ApplyTurns, SingleSegmentUnchangedWithoutInitialHeading) {
    const DtmGrid g = testsupport::flat_grid(40, 40, 30.0, 0.0, 50.0);
    const AircraftModel model(cessna());
    const AloManifold m(model, {});
    const Trajectory t = make_trajectory({{100.0, 100.0}, {900.0, 700.0}}, 800.0, m, g);
    const Trajectory c = apply_turn_corrections(t, model, {}, kPi / 4, g);
    EXPECT_TRUE(c.turn_corrections.empty());
    EXPECT_EQ(c.total_loss, t.total_loss);
    const Trajectory h = apply_turn_corrections(t, model, {}, kPi / 4, g, t.segments[0].heading_g + kPi / 2);
    ASSERT_EQ(h.turn_corrections.size(), 1u);
    EXPECT_EQ(h.turn_corrections[0].waypoint_index, 0);
    EXPECT_NEAR(h.turn_corrections[0].arc_loss, 23.84816, 1e-4);
}

TEST(ApplyTurns, ClearanceRecheckFlagsTightPlans) {
    const DtmGrid g = testsupport::flat_grid(90, 90, 30.0, 0.0, 50.0);
    const AircraftModel model(cessna());
    const AloManifold m(model, {});
    const Trajectory probe = zigzag(m, g, 2000.0);
    // Arrive with less margin than the three turns cost.
    const Trajectory tight = zigzag(m, g, 50.0 + probe.total_loss + 30.0);
    EXPECT_TRUE(verify_feasibility(tight, g).feasible);
    const Trajectory c = apply_turn_corrections(tight, model, {}, kPi / 4, g);
    EXPECT_TRUE(c.infeasible_after_turns);
    EXPECT_FALSE(verify_feasibility(c, g).feasible);
    const Trajectory roomy = apply_turn_corrections(zigzag(m, g, 50.0 + probe.total_loss + 80.0), model, {}, kPi / 4, g);
    EXPECT_FALSE(roomy.infeasible_after_turns);
}
