#include "glide/manifold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace glide {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AloManifold::AloManifold(const AircraftModel &model, const Wind &wind, double resolution)
    : model_(model), wind_(wind) {
    if (!(resolution > 0.0 && resolution <= 0.05)) {
        throw std::invalid_argument("manifold resolution must be in (0, 0.05] rad");
    }
    const auto count = static_cast<std::size_t>(std::ceil(kTwoPi / resolution - 1e-9));
    resolution_ = kTwoPi / static_cast<double>(count);
    samples_.reserve(count);
    slopes_.reserve(count + 1);
    min_slope_ = kInf;
    max_slope_ = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double heading = static_cast<double>(k) * resolution_;
        const GlideSolution sol = optimal_glide(model_, wind_, heading);
        const double slope = sol.feasible ? sol.slope : kInf;
        samples_.push_back({.heading_g = heading,
                            .slope = slope,
                            .v_opt = sol.v_air,
                            .v_ground = sol.v_ground,
                            .feasible = sol.feasible});
        slopes_.push_back(slope);
        if (sol.feasible) {
            min_slope_ = std::min(min_slope_, slope);
            max_slope_ = std::max(max_slope_, slope);
        }
    }
    slopes_.push_back(slopes_.front());
}

double AloManifold::slope_at(double heading_g) const {
    const double t = wrap_two_pi(heading_g) / resolution_;
    auto k = static_cast<std::size_t>(t);
    if (k >= samples_.size()) k = samples_.size() - 1;
    const double a = slopes_[k];
    const double b = slopes_[k + 1];
    if (std::isinf(a) || std::isinf(b)) return kInf;
    const double frac = t - static_cast<double>(k);
    return a + (b - a) * frac;
}

double AloManifold::loss(double dx, double dy) const {
    if (dx == 0.0 && dy == 0.0) return 0.0;
    return std::hypot(dx, dy) * slope_at(std::atan2(dy, dx));
}

AloManifold build_manifold(const AircraftModel &model, const Wind &wind, double resolution) {
    return AloManifold(model, wind, resolution);
}

}  // namespace glide
