#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>

namespace glide {

/// Horizontal position or displacement in local planar meters (x north, y east).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;

    double norm() const { return std::hypot(x, y); }
    double heading() const { return std::atan2(y, x); }
};

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Integer DTM sample index: i along x (north), j along y (east).
struct GridNode {
    int i = 0;
    int j = 0;

    auto operator<=>(const GridNode &) const = default;
};

struct GridNodeHash {
    std::size_t operator()(const GridNode &n) const noexcept {
        return std::hash<long long>{}((static_cast<long long>(n.i) << 32) ^ static_cast<unsigned int>(n.j));
    }
};

}  // namespace glide
