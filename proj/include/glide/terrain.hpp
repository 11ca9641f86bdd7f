#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glide/geometry.hpp"

namespace glide {

class AloManifold;

inline constexpr double kDefaultClearance = 50.0;

class TerrainError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Elevation raster in local planar meters. Sample (i, j) sits at
/// (origin_x + i * dx, origin_y + j * dy); i runs north, j runs east.
/// Every DTM query includes the clearance.
class DtmGrid {
 public:
    DtmGrid(Vec2 origin, double dx, double dy, int rows, int cols, std::vector<double> elevations,
            double clearance = kDefaultClearance);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    Vec2 origin() const { return origin_; }
    double clearance() const { return clearance_; }

    /// Raw elevation sample without clearance.
    double elevation(int i, int j) const { return elevations_[index(i, j)]; }
    /// Sample plus clearance.
    double dtm_node(int i, int j) const { return elevations_[index(i, j)] + clearance_; }
    double dtm_node(GridNode n) const { return dtm_node(n.i, n.j); }

    Vec2 node_position(int i, int j) const { return {origin_.x + i * dx_, origin_.y + j * dy_}; }
    Vec2 node_position(GridNode n) const { return node_position(n.i, n.j); }

    /// Continuous grid coordinates (u along rows, v along columns).
    Vec2 to_grid(Vec2 p) const { return {(p.x - origin_.x) / dx_, (p.y - origin_.y) / dy_}; }
    Vec2 from_grid(Vec2 uv) const { return {origin_.x + uv.x * dx_, origin_.y + uv.y * dy_}; }

    bool contains(Vec2 p) const;
    /// Bilinear interpolation plus clearance; throws std::out_of_range off the hull.
    double dtm_at(double x, double y) const;
    double dtm_at(Vec2 p) const { return dtm_at(p.x, p.y); }

    /// Minimum of DTM (with clearance) over all samples.
    double min_dtm() const { return min_elevation_ + clearance_; }
    double max_dtm() const { return max_elevation_ + clearance_; }

    const std::vector<double> &elevations() const { return elevations_; }
    DtmGrid with_clearance(double clearance) const;

 private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
    }

    Vec2 origin_;
    double dx_;
    double dy_;
    int rows_;
    int cols_;
    std::vector<double> elevations_;
    double clearance_;
    double min_elevation_;
    double max_elevation_;
};

enum class DtmFormat { kEsriAscii, kSrtmHgt, kSyntheticSpec };

DtmFormat parse_dtm_format(const std::string &name);

DtmGrid load_dtm(const std::filesystem::path &source, DtmFormat format, double clearance = kDefaultClearance);

/// ESRI ASCII grid. Honors ncols, nrows, xllcorner/xllcenter, yllcorner/yllcenter,
/// cellsize and NODATA_value; ESRI x is easting and y is northing.
DtmGrid parse_esri_ascii(std::istream &in, double clearance = kDefaultClearance);

/// SRTM .hgt tile: big-endian int16, row-major from the north-west corner,
/// 1201x1201 (3 arc-sec) or 3601x3601 (1 arc-sec). Voids (-32768) are filled
/// from the nearest valid sample. `tile_name` (e.g. "N32E035") sets the
/// latitude used for the fixed east-west meters-per-degree scaling.
DtmGrid parse_srtm_hgt(std::span<const std::uint8_t> bytes, double clearance = kDefaultClearance,
                       const std::string &tile_name = "");

/// Synthetic terrain recipe (JSON text): grid shape plus flat base, planar ramp
/// and Gaussian hills.
DtmGrid parse_synthetic_spec(const std::string &json_text, double clearance = kDefaultClearance);

inline constexpr double kMetersPerDegree = 111320.0;

enum class SquareClass : std::uint8_t { kSafe = 0, kUnsafe = 1 };

/// Safe-squares obstacle map seen from one anchor state. Square (i, j) spans
/// nodes (i, j) .. (i + 1, j + 1). A square is unsafe iff any corner has
/// LO < 0; the region outside the grid counts as unsafe.
class LocalObstacleMap {
 public:
    LocalObstacleMap(const DtmGrid &grid, Vec2 anchor, double altitude, std::vector<double> lo_values,
                     std::vector<SquareClass> squares);

    const DtmGrid &grid() const { return *grid_; }
    Vec2 anchor() const { return anchor_; }
    double altitude() const { return altitude_; }
    int rows() const { return grid_->rows(); }
    int cols() const { return grid_->cols(); }

    double lo(int i, int j) const { return lo_[static_cast<std::size_t>(i) * cols() + j]; }
    bool unsafe(int i, int j) const {
        if (i < 0 || j < 0 || i >= rows() - 1 || j >= cols() - 1) return true;
        return squares_[static_cast<std::size_t>(i) * (cols() - 1) + j] == SquareClass::kUnsafe;
    }
    SquareClass square(int i, int j) const { return unsafe(i, j) ? SquareClass::kUnsafe : SquareClass::kSafe; }
    std::size_t unsafe_count() const;

 private:
    const DtmGrid *grid_;
    Vec2 anchor_;
    double altitude_;
    std::vector<double> lo_;
    std::vector<SquareClass> squares_;
};

/// LO[m, n] = altitude - M(node - p) - DTM(node); squares classified per the
/// safe-squares rule. Nodes provably below the cone (beyond the radius where
/// the cheapest glide already reaches min DTM) are set to -inf without
/// evaluating the manifold. Throws TerrainError when altitude <= DTM(p).
LocalObstacleMap build_local_obstacle_map(const DtmGrid &grid, const AloManifold &manifold, Vec2 p,
                                          double altitude);

}  // namespace glide
