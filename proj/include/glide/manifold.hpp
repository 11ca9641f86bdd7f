#pragma once

#include <vector>

#include "glide/aero.hpp"

namespace glide {

inline constexpr double kDefaultManifoldResolution = 0.25 * kPi / 180.0;

struct HeadingSample {
    double heading_g = 0.0;
    double slope = 0.0;  // +inf when the heading is infeasible
    double v_opt = 0.0;
    double v_ground = 0.0;
    bool feasible = false;
};

/// Minimal altitude loss of a straight optimal glide to any horizontal
/// displacement under one wind. Immutable after construction.
///
/// loss(dx, dy) = |(dx, dy)| * slope(atan2(dy, dx)), where slope is linearly
/// interpolated between uniformly spaced heading samples on [0, 2pi).
class AloManifold {
 public:
    AloManifold(const AircraftModel &model, const Wind &wind, double resolution = kDefaultManifoldResolution);

    double loss(double dx, double dy) const;
    double slope_at(double heading_g) const;

    const std::vector<HeadingSample> &samples() const { return samples_; }
    double resolution() const { return resolution_; }
    const Wind &wind() const { return wind_; }
    const AircraftModel &aircraft() const { return model_; }

    /// Smallest sampled slope (lower bound of loss per ground meter).
    double min_slope() const { return min_slope_; }
    /// Largest finite sampled slope.
    double max_finite_slope() const { return max_slope_; }

 private:
    AircraftModel model_;
    Wind wind_;
    double resolution_;
    std::vector<HeadingSample> samples_;
    std::vector<double> slopes_;
    double min_slope_;
    double max_slope_;
};

/// Convenience form of AloManifold construction with argument validation.
/// Throws std::invalid_argument unless resolution is in (0, 0.05] rad.
AloManifold build_manifold(const AircraftModel &model, const Wind &wind,
                           double resolution = kDefaultManifoldResolution);

inline double manifold_loss(const AloManifold &m, double dx, double dy) { return m.loss(dx, dy); }

}  // namespace glide
