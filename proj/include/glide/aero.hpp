#pragma once

// Reduced-order glide performance of a thrustless aircraft in a constant wind.
// SI units throughout: meters, m/s, radians. Ground frame is NED; x points
// north, y points east, headings are measured from north towards east.

#include <optional>
#include <stdexcept>
#include <string>

namespace glide {

inline constexpr double kStandardGravity = 9.81;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct AircraftParams {
    std::string name = "aircraft";
    double mass_kg = 0.0;
    double wing_area_m2 = 0.0;
    double cd0 = 0.0;
    double k_induced = 0.0;
    double cl_max = 0.0;
    double v_max_mps = 0.0;
    double air_density_kgpm3 = 1.225;
    double gravity = kStandardGravity;
};

/// Parabolic-drag point-mass glider. Construction validates the envelope and
/// caches the derived constants K_SR, V0 and V_stall(1).
class AircraftModel {
 public:
    explicit AircraftModel(AircraftParams params);

    const AircraftParams &params() const { return params_; }
    double k_sr() const { return k_sr_; }
    double v0() const { return v0_; }
    double v_stall1() const { return v_stall1_; }
    double v_max() const { return params_.v_max_mps; }
    double gravity() const { return params_.gravity; }

    /// True when V0 < V_stall(1); the stall clamp of the optimal glide speed is
    /// then active even in still air.
    bool v0_below_stall() const { return v0_ < v_stall1_; }

 private:
    AircraftParams params_;
    double k_sr_;
    double v0_;
    double v_stall1_;
};

/// Constant air-mass velocity in the ground frame.
struct Wind {
    double w_north = 0.0;
    double w_east = 0.0;

    double magnitude() const;
    bool operator==(const Wind &) const = default;
};

/// Wind split along a ground track: `parallel` is tailwind-positive, `cross`
/// points to the right of the track (heading + pi/2).
struct WindComponents {
    double parallel = 0.0;
    double cross = 0.0;
};

struct GlideSolution {
    double v_air = 0.0;
    double v_ground = 0.0;
    double slope = 0.0;  // altitude lost per meter of ground track
    bool feasible = false;
};

class InfeasibleDirection : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

WindComponents wind_components(const Wind &wind, double heading_g);

/// Ground speed along the track for airspeed `v_air`; nullopt when the
/// aircraft cannot make forward progress.
std::optional<double> ground_speed(double v_air, const WindComponents &wc);

/// f0(V, phi) = K_SR (V^4 + n^2 V0^4) / V with n = 1/cos(phi).
/// Throws std::domain_error below V_stall(n) or for |bank| >= pi/2.
double sink_rate(const AircraftModel &model, double v_air, double bank);

double v_stall(const AircraftModel &model, double load_factor);

/// Altitude lost per ground meter at airspeed v; +inf where V_g <= 0.
double glide_slope(const AircraftModel &model, double v_air, const WindComponents &wc);

/// Left-hand side of the sextic speed-to-fly equation. Its sign matches the
/// sign of d(glide_slope)/dV on (V_b, inf).
double speed_to_fly_residual(const AircraftModel &model, double v_air, const WindComponents &wc);

/// Unconstrained minimizer V* of the glide slope along the track.
/// Throws InfeasibleDirection when no airspeed gives positive ground speed.
double speed_to_fly(const AircraftModel &model, const WindComponents &wc);

/// Speed-to-fly clamped into [V_stall(1), V_max]. Never throws.
GlideSolution optimal_glide(const AircraftModel &model, const Wind &wind, double heading_g);

struct AirmassHeading {
    double heading = 0.0;  // psi, heading relative to the air mass
    double v_air = 0.0;
};

/// Inverts the wind triangle for a ground velocity (ground_heading, v_ground).
/// Throws std::domain_error when the implied airspeed is below 1e-9 m/s.
AirmassHeading airmass_heading(double ground_heading, double v_ground, const Wind &wind);

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double angle);
/// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

}  // namespace glide
