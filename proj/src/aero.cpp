#include "glide/aero.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace glide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double value, const char *field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "aircraft parameter '" << field << "' must be finite and positive, got " << value;
        throw std::invalid_argument(os.str());
    }
}

double sq(double x) { return x * x; }

// Golden-section search on a unimodal function; used only when the sextic
// cannot be bracketed.
template <typename F>
double golden_minimize(F &&f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 300 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

AircraftModel::AircraftModel(AircraftParams params) : params_(std::move(params)) {
    require_positive(params_.mass_kg, "mass_kg");
    require_positive(params_.wing_area_m2, "wing_area_m2");
    require_positive(params_.cd0, "cd0");
    require_positive(params_.k_induced, "k_induced");
    require_positive(params_.cl_max, "cl_max");
    require_positive(params_.v_max_mps, "v_max_mps");
    require_positive(params_.air_density_kgpm3, "air_density_kgpm3");
    require_positive(params_.gravity, "gravity");

    const double weight = params_.mass_kg * params_.gravity;
    const double rho_s = params_.air_density_kgpm3 * params_.wing_area_m2;
    k_sr_ = rho_s * params_.cd0 / (2.0 * weight);
    v0_ = std::sqrt(2.0 * weight / rho_s * std::sqrt(params_.k_induced / params_.cd0));
    v_stall1_ = std::sqrt(2.0 * weight / (rho_s * params_.cl_max));
    if (!(v_stall1_ < params_.v_max_mps)) {
        std::ostringstream os;
        os << "empty flight envelope: V_stall(1) = " << v_stall1_ << " m/s >= v_max = " << params_.v_max_mps
           << " m/s";
        throw std::invalid_argument(os.str());
    }
}

double Wind::magnitude() const { return std::hypot(w_north, w_east); }

double wrap_two_pi(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

double wrap_pi(double angle) {
    double a = wrap_two_pi(angle);
    if (a > kPi) a -= kTwoPi;
    return a;
}

WindComponents wind_components(const Wind &wind, double heading_g) {
    const double c = std::cos(heading_g);
    const double s = std::sin(heading_g);
    return {.parallel = wind.w_north * c + wind.w_east * s, .cross = -wind.w_north * s + wind.w_east * c};
}

std::optional<double> ground_speed(double v_air, const WindComponents &wc) {
    const double c2 = sq(wc.cross);
    const double v2 = sq(v_air);
    if (!(v2 > c2)) return std::nullopt;
    const double vg = std::sqrt(v2 - c2) + wc.parallel;
    if (!(vg > 0.0)) return std::nullopt;
    return vg;
}

double v_stall(const AircraftModel &model, double load_factor) {
    if (!(load_factor >= 1.0)) throw std::domain_error("load factor must be >= 1");
    return model.v_stall1() * std::sqrt(load_factor);
}

double sink_rate(const AircraftModel &model, double v_air, double bank) {
    if (!(std::abs(bank) < kPi / 2.0)) throw std::domain_error("bank angle must satisfy |bank| < pi/2");
    const double n = 1.0 / std::cos(bank);
    // Tolerate rounding at the stall boundary itself.
    if (!(v_air >= v_stall(model, n) * (1.0 - 1e-12))) {
        std::ostringstream os;
        os << "airspeed " << v_air << " m/s below stall speed " << v_stall(model, n) << " m/s";
        throw std::domain_error(os.str());
    }
    const double v04 = sq(sq(model.v0()));
    return model.k_sr() * (sq(sq(v_air)) + sq(n) * v04) / v_air;
}

double glide_slope(const AircraftModel &model, double v_air, const WindComponents &wc) {
    const auto vg = ground_speed(v_air, wc);
    if (!vg) return kInf;
    const double v04 = sq(sq(model.v0()));
    return model.k_sr() * (sq(sq(v_air)) + v04) / v_air / *vg;
}

double speed_to_fly_residual(const AircraftModel &model, double v, const WindComponents &wc) {
    const double c2 = sq(wc.cross);
    const double v2 = sq(v);
    const double v4 = sq(v2);
    const double v04 = sq(sq(model.v0()));
    const double s = std::sqrt(std::max(0.0, v2 - c2));
    return v4 * v2 - 1.5 * v4 * c2 + 0.5 * wc.parallel * s * (3.0 * v4 - v04) - v2 * v04 + 0.5 * c2 * v04;
}

namespace {

double residual_derivative(double v0, double v, const WindComponents &wc) {
    const double c2 = sq(wc.cross);
    const double v2 = sq(v);
    const double v3 = v2 * v;
    const double v4 = sq(v2);
    const double v04 = sq(sq(v0));
    const double s = std::sqrt(std::max(1e-300, v2 - c2));
    return 6.0 * v4 * v - 6.0 * v3 * c2 + 0.5 * wc.parallel * ((v / s) * (3.0 * v4 - v04) + s * 12.0 * v3) -
           2.0 * v * v04;
}

}  // namespace

double speed_to_fly(const AircraftModel &model, const WindComponents &wc) {
    const double v0 = model.v0();
    const double c2 = sq(wc.cross);
    const double headwind = std::max(0.0, -wc.parallel);
    const double v_b = std::sqrt(c2 + sq(headwind));
    const double w_mag = std::sqrt(c2 + sq(wc.parallel));
    double lo = v_b + 1e-6 * v0;
    double hi = 3.0 * std::max({v0, w_mag, model.v_max()});
    if (!(hi > lo) || !ground_speed(hi, wc)) {
        throw InfeasibleDirection("no airspeed below the search ceiling yields positive ground speed");
    }

    double f_lo = speed_to_fly_residual(model, lo, wc);
    double f_hi = speed_to_fly_residual(model, hi, wc);
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
        return golden_minimize([&](double v) { return glide_slope(model, v, wc); }, lo, hi);
    }

    double x = 0.5 * (lo + hi);
    const double tol = 1e-14 * v0;
    for (int it = 0; it < 200; ++it) {
        const double fx = speed_to_fly_residual(model, x, wc);
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo < tol) break;
        const double dfx = residual_derivative(v0, x, wc);
        double next = (dfx != 0.0 && std::isfinite(dfx)) ? x - fx / dfx : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

GlideSolution optimal_glide(const AircraftModel &model, const Wind &wind, double heading_g) {
    const WindComponents wc = wind_components(wind, heading_g);
    double v_star;
    try {
        v_star = speed_to_fly(model, wc);
    } catch (const InfeasibleDirection &) {
        return {.v_air = model.v_max(), .v_ground = 0.0, .slope = kInf, .feasible = false};
    }
    const double v = std::min(std::max(model.v_stall1(), v_star), model.v_max());
    const auto vg = ground_speed(v, wc);
    if (!vg) return {.v_air = v, .v_ground = 0.0, .slope = kInf, .feasible = false};
    return {.v_air = v, .v_ground = *vg, .slope = sink_rate(model, v, 0.0) / *vg, .feasible = true};
}

AirmassHeading airmass_heading(double ground_heading, double v_ground, const Wind &wind) {
    if (!(v_ground > 0.0)) throw std::domain_error("ground speed must be positive");
    const double ax = v_ground * std::cos(ground_heading) - wind.w_north;
    const double ay = v_ground * std::sin(ground_heading) - wind.w_east;
    const double v = std::hypot(ax, ay);
    if (v < 1e-9) throw std::domain_error("degenerate wind triangle: airspeed vanishes");
    return {.heading = std::atan2(ay, ax), .v_air = v};
}

}  // namespace glide
