#include <gtest/gtest.h>

#include <random>

#include "glide/aero.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace glide;
using testsupport::cessna;

TEST(Aero, DerivedConstantsMatchDirectEvaluation) {
    const AircraftParams p = cessna();
    const AircraftModel m(p);
    const double w = p.mass_kg * p.gravity;
    EXPECT_NEAR(m.k_sr(), p.air_density_kgpm3 * p.wing_area_m2 * p.cd0 / (2.0 * w), 1e-15);
    EXPECT_NEAR(m.v0(), oracle::min_drag_speed(p), 1e-12);
    EXPECT_NEAR(m.v_stall1(), oracle::stall_speed(p), 1e-12);
    // Pinned values for the stock Cessna constants.
    EXPECT_NEAR(m.k_sr(), 3.618957200311992e-05, 1e-15);
    EXPECT_NEAR(m.v0(), 35.02385583708146, 1e-9);
}

TEST(Aero, SinkRateMatchesDragPolar) {
    const AircraftParams p = cessna();
    const AircraftModel m(p);
    for (double v : {30.0, 35.0, 45.0, 60.0}) {
        EXPECT_NEAR(sink_rate(m, v, 0.0), oracle::drag_sink_rate(p, v), 1e-12) << v;
    }
    const double bank = 30.0 * kPi / 180.0;
    const double v = 40.0;
    EXPECT_NEAR(sink_rate(m, v, bank), oracle::drag_sink_rate(p, v, 1.0 / std::cos(bank)), 1e-12);
    EXPECT_NEAR(sink_rate(m, m.v0(), 0.0), 3.1096056, 1e-6);
}

TEST(Aero, StallSpeedScalesWithLoadFactor) {
    const AircraftModel m(cessna());
    EXPECT_NEAR(v_stall(m, std::sqrt(2.0)), 32.4297, 1e-4);
    EXPECT_THROW(v_stall(m, 0.5), std::domain_error);
    EXPECT_THROW(sink_rate(m, 20.0, 0.0), std::domain_error);
}

TEST(Aero, RejectsNonPositiveParameters) {
    AircraftParams p = cessna();
    p.cd0 = 0.0;
    EXPECT_THROW(AircraftModel{p}, std::invalid_argument);
    p = cessna();
    p.v_max_mps = 20.0;
    EXPECT_THROW(AircraftModel{p}, std::invalid_argument);
}

TEST(Aero, WindComponentsDecomposeTheWindVector) {
    const Wind w{3.0, -4.0};
    for (double h = 0.0; h < kTwoPi; h += 0.3) {
        const WindComponents wc = wind_components(w, h);
        EXPECT_NEAR(wc.parallel * wc.parallel + wc.cross * wc.cross, 25.0, 1e-12);
        EXPECT_NEAR(wc.parallel, w.w_north * std::cos(h) + w.w_east * std::sin(h), 1e-12);
    }
}

TEST(Aero, GroundSpeedUndefinedWhenCrosswindDominates) {
    EXPECT_FALSE(ground_speed(10.0, {0.0, 10.0}).has_value());
    EXPECT_FALSE(ground_speed(10.0, {-12.0, 0.0}).has_value());
    EXPECT_NEAR(*ground_speed(5.0, {1.0, 3.0}), 5.0, 1e-12);
}

TEST(Aero, StillAirSpeedToFlyIsMinDragSpeed) {
    const AircraftParams p = cessna();
    const AircraftModel m(p);
    EXPECT_NEAR(speed_to_fly(m, {0.0, 0.0}), oracle::min_drag_speed(p), 1e-6);
    const GlideSolution g = optimal_glide(m, {}, 1.0);
    EXPECT_NEAR(g.slope, 0.08878535915, 1e-9);
    EXPECT_NEAR(g.v_ground, g.v_air, 1e-12);
}

TEST(Aero, ResidualChangesSignOnceAboveLowerBound) {
    const AircraftModel m(cessna());
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        const WindComponents wc{U(rng), U(rng)};
        const double vb = std::sqrt(wc.cross * wc.cross + std::pow(std::max(0.0, -wc.parallel), 2));
        int changes = 0;
        double prev = speed_to_fly_residual(m, vb + 1e-6, wc);
        for (double v = vb + 0.05; v < 250.0; v += 0.05) {
            const double cur = speed_to_fly_residual(m, v, wc);
            if ((prev < 0.0) != (cur < 0.0)) ++changes;
            prev = cur;
        }
        EXPECT_EQ(changes, 1) << wc.parallel << " " << wc.cross;
    }
}

TEST(Aero, SpeedToFlyAgreesWithDirectMinimizer) {
    const AircraftParams p = cessna();
    const AircraftModel m(p);
    for (double mag : {0.0, 5.0, 12.0, 20.0, 25.0}) {
        for (double dir = 0.0; dir < 360.0; dir += 30.0) {
            const Wind w{mag * std::cos(dir * kPi / 180.0), mag * std::sin(dir * kPi / 180.0)};
            const WindComponents wc = wind_components(w, 0.0);
            EXPECT_NEAR(speed_to_fly(m, wc), oracle::best_airspeed(p, wc.parallel, wc.cross), 0.01)
                << mag << " " << dir;
        }
    }
}

TEST(Aero, HeadwindRaisesAndTailwindLowersSpeedToFly) {
    const AircraftModel m(cessna());
    const double still = speed_to_fly(m, {0.0, 0.0});
    EXPECT_GT(speed_to_fly(m, {-10.0, 0.0}), still);
    EXPECT_LT(speed_to_fly(m, {10.0, 0.0}), still);
}

TEST(Aero, OptimalGlideClampsToEnvelope) {
    const AircraftModel m(cessna());
    // Strong headwind pushes V* past V_max.
    const GlideSolution g = optimal_glide(m, {-45.0, 0.0}, 0.0);
    EXPECT_GT(speed_to_fly(m, wind_components({-45.0, 0.0}, 0.0)), m.v_max());
    EXPECT_DOUBLE_EQ(g.v_air, m.v_max());
    EXPECT_TRUE(g.feasible);
    const GlideSolution blocked = optimal_glide(m, {-70.0, 0.0}, 0.0);
    EXPECT_FALSE(blocked.feasible);
    EXPECT_TRUE(std::isinf(blocked.slope));
}

TEST(Aero, AirmassHeadingInvertsWindTriangle) {
    const Wind w{4.0, 7.0};
    const double heading = 0.8;
    const double vg = 38.0;
    const AirmassHeading a = airmass_heading(heading, vg, w);
    const double gx = a.v_air * std::cos(a.heading) + w.w_north;
    const double gy = a.v_air * std::sin(a.heading) + w.w_east;
    EXPECT_NEAR(gx, vg * std::cos(heading), 1e-12);
    EXPECT_NEAR(gy, vg * std::sin(heading), 1e-12);
    EXPECT_NEAR(airmass_heading(1.2, 30.0, {}).heading, 1.2, 1e-15);
}

TEST(Aero, AngleWrapping) {
    EXPECT_NEAR(wrap_two_pi(-0.5), kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(wrap_pi(3.5 * kPi), -0.5 * kPi, 1e-12);
    EXPECT_GE(wrap_two_pi(-1e-18), 0.0);
    EXPECT_LT(wrap_two_pi(-1e-18), kTwoPi);
}
