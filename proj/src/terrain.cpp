#include "glide/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "glide/manifold.hpp"

namespace glide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int16_t kHgtVoid = -32768;

// Fills invalid cells from the nearest valid cell (breadth-first over the
// 4-neighborhood).
void fill_voids(std::vector<double> &values, const std::vector<bool> &valid, int rows, int cols) {
    std::deque<std::size_t> queue;
    std::vector<bool> known = valid;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (known[k]) queue.push_back(k);
    }
    if (queue.empty()) throw TerrainError("elevation tile contains only void samples");
    while (!queue.empty()) {
        const std::size_t k = queue.front();
        queue.pop_front();
        const int i = static_cast<int>(k / cols);
        const int j = static_cast<int>(k % cols);
        const int di[] = {1, -1, 0, 0};
        const int dj[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ni = i + di[d];
            const int nj = j + dj[d];
            if (ni < 0 || nj < 0 || ni >= rows || nj >= cols) continue;
            const std::size_t nk = static_cast<std::size_t>(ni) * cols + nj;
            if (known[nk]) continue;
            known[nk] = true;
            values[nk] = values[k];
            queue.push_back(nk);
        }
    }
}

}  // namespace

DtmGrid::DtmGrid(Vec2 origin, double dx, double dy, int rows, int cols, std::vector<double> elevations,
                 double clearance)
    : origin_(origin), dx_(dx), dy_(dy), rows_(rows), cols_(cols), elevations_(std::move(elevations)),
      clearance_(clearance) {
    if (rows < 2 || cols < 2) throw TerrainError("DTM grid needs at least 2x2 samples");
    if (!(dx > 0.0) || !(dy > 0.0)) throw TerrainError("DTM spacing must be positive");
    if (elevations_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw TerrainError("DTM sample count does not match rows x cols");
    }
    if (!std::isfinite(clearance)) throw TerrainError("clearance must be finite");
    min_elevation_ = kInf;
    max_elevation_ = -kInf;
    for (double e : elevations_) {
        if (!std::isfinite(e)) throw TerrainError("DTM contains non-finite elevation");
        min_elevation_ = std::min(min_elevation_, e);
        max_elevation_ = std::max(max_elevation_, e);
    }
}

DtmGrid DtmGrid::with_clearance(double clearance) const {
    return DtmGrid(origin_, dx_, dy_, rows_, cols_, elevations_, clearance);
}

bool DtmGrid::contains(Vec2 p) const {
    const Vec2 uv = to_grid(p);
    constexpr double tol = 1e-9;
    return uv.x >= -tol && uv.y >= -tol && uv.x <= rows_ - 1 + tol && uv.y <= cols_ - 1 + tol;
}

double DtmGrid::dtm_at(double x, double y) const {
    if (!contains({x, y})) {
        std::ostringstream os;
        os << "DTM query (" << x << ", " << y << ") outside the grid hull";
        throw std::out_of_range(os.str());
    }
    const Vec2 uv = to_grid({x, y});
    const double u = std::clamp(uv.x, 0.0, static_cast<double>(rows_ - 1));
    const double v = std::clamp(uv.y, 0.0, static_cast<double>(cols_ - 1));
    const int i = std::min(static_cast<int>(u), rows_ - 2);
    const int j = std::min(static_cast<int>(v), cols_ - 2);
    const double fu = u - i;
    const double fv = v - j;
    const double e00 = elevation(i, j);
    const double e10 = elevation(i + 1, j);
    const double e01 = elevation(i, j + 1);
    const double e11 = elevation(i + 1, j + 1);
    const double e = (1 - fu) * (1 - fv) * e00 + fu * (1 - fv) * e10 + (1 - fu) * fv * e01 + fu * fv * e11;
    return e + clearance_;
}

DtmFormat parse_dtm_format(const std::string &name) {
    if (name == "esri-ascii" || name == "asc") return DtmFormat::kEsriAscii;
    if (name == "srtm-hgt" || name == "hgt") return DtmFormat::kSrtmHgt;
    if (name == "synthetic-spec" || name == "synthetic") return DtmFormat::kSyntheticSpec;
    throw TerrainError("unknown DTM format '" + name + "'");
}

DtmGrid parse_esri_ascii(std::istream &in, double clearance) {
    std::map<std::string, double> header;
    std::string key;
    // Header lines are "keyword value"; the first numeric token starts the data.
    while (in >> std::ws && in.peek() != EOF) {
        const int c = in.peek();
        if (std::isdigit(c) || c == '-' || c == '+' || c == '.') break;
        in >> key;
        double value;
        if (!(in >> value)) throw TerrainError("malformed ESRI ASCII header near '" + key + "'");
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
        header[key] = value;
    }
    auto need = [&](const char *k) {
        auto it = header.find(k);
        if (it == header.end()) throw TerrainError(std::string("ESRI ASCII header missing '") + k + "'");
        return it->second;
    };
    const int cols = static_cast<int>(need("ncols"));
    const int rows = static_cast<int>(need("nrows"));
    const double cell = need("cellsize");
    double east0;
    double north0;
    if (header.contains("xllcorner")) {
        east0 = header["xllcorner"] + 0.5 * cell;
    } else {
        east0 = need("xllcenter");
    }
    if (header.contains("yllcorner")) {
        north0 = header["yllcorner"] + 0.5 * cell;
    } else {
        north0 = need("yllcenter");
    }
    const bool has_nodata = header.contains("nodata_value");
    const double nodata = has_nodata ? header["nodata_value"] : 0.0;
    if (rows < 2 || cols < 2) throw TerrainError("ESRI ASCII grid needs at least 2x2 samples");

    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    std::vector<double> values(n);
    std::vector<bool> valid(n, true);
    bool any_void = false;
    for (int r = 0; r < rows; ++r) {
        const int i = rows - 1 - r;  // file rows run north to south
        for (int j = 0; j < cols; ++j) {
            double v;
            if (!(in >> v)) throw TerrainError("ESRI ASCII data shorter than nrows x ncols");
            const std::size_t k = static_cast<std::size_t>(i) * cols + j;
            values[k] = v;
            if (has_nodata && v == nodata) {
                valid[k] = false;
                any_void = true;
            }
        }
    }
    double extra;
    if (in >> extra) throw TerrainError("ESRI ASCII data longer than nrows x ncols");
    if (any_void) fill_voids(values, valid, rows, cols);
    return DtmGrid({north0, east0}, cell, cell, rows, cols, std::move(values), clearance);
}

DtmGrid parse_srtm_hgt(std::span<const std::uint8_t> bytes, double clearance, const std::string &tile_name) {
    int side;
    double arc_seconds;
    if (bytes.size() == 1201u * 1201u * 2u) {
        side = 1201;
        arc_seconds = 3.0;
    } else if (bytes.size() == 3601u * 3601u * 2u) {
        side = 3601;
        arc_seconds = 1.0;
    } else {
        throw TerrainError("HGT size " + std::to_string(bytes.size()) +
                           " bytes matches neither 1201x1201 nor 3601x3601 samples");
    }
    double lat_center = 0.0;
    static const std::regex name_re(R"(([NnSs])(\d{1,2})[EeWw]\d{1,3})");
    std::smatch match;
    if (std::regex_search(tile_name, match, name_re)) {
        const double lat = std::stod(match[2].str());
        lat_center = (match[1].str() == "S" || match[1].str() == "s") ? -lat + 0.5 : lat + 0.5;
    }
    const double spacing_north = arc_seconds / 3600.0 * kMetersPerDegree;
    const double spacing_east = spacing_north * std::cos(lat_center * kPi / 180.0);

    const std::size_t n = static_cast<std::size_t>(side) * side;
    std::vector<double> values(n);
    std::vector<bool> valid(n, true);
    bool any_void = false;
    for (int r = 0; r < side; ++r) {
        const int i = side - 1 - r;
        for (int j = 0; j < side; ++j) {
            const std::size_t off = (static_cast<std::size_t>(r) * side + j) * 2;
            const auto raw = static_cast<std::int16_t>((static_cast<std::uint16_t>(bytes[off]) << 8) |
                                                       static_cast<std::uint16_t>(bytes[off + 1]));
            const std::size_t k = static_cast<std::size_t>(i) * side + j;
            if (raw == kHgtVoid) {
                valid[k] = false;
                any_void = true;
                values[k] = 0.0;
            } else {
                values[k] = raw;
            }
        }
    }
    if (any_void) fill_voids(values, valid, side, side);
    return DtmGrid({0.0, 0.0}, spacing_north, spacing_east, side, side, std::move(values), clearance);
}

DtmGrid parse_synthetic_spec(const std::string &json_text, double clearance) {
    nlohmann::json recipe;
    try {
        recipe = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception &e) {
        throw TerrainError(std::string("synthetic terrain recipe is not valid JSON: ") + e.what());
    }
    try {
        const int rows = recipe.at("rows").get<int>();
        const int cols = recipe.at("cols").get<int>();
        const double dx = recipe.value("dx", 30.0);
        const double dy = recipe.value("dy", dx);
        const Vec2 origin{recipe.value("origin_x", 0.0), recipe.value("origin_y", 0.0)};
        const double base = recipe.value("base", 0.0);
        double ramp_north = 0.0;
        double ramp_east = 0.0;
        if (recipe.contains("ramp")) {
            ramp_north = recipe["ramp"].value("north", 0.0);
            ramp_east = recipe["ramp"].value("east", 0.0);
        }
        struct Hill {
            double x, y, height, sigma;
        };
        std::vector<Hill> hills;
        if (recipe.contains("hills")) {
            for (const auto &h : recipe["hills"]) {
                Hill hill{h.at("x").get<double>(), h.at("y").get<double>(), h.at("height").get<double>(),
                          h.at("sigma").get<double>()};
                if (!(hill.sigma > 0.0)) throw TerrainError("hill sigma must be positive");
                hills.push_back(hill);
            }
        }
        if (rows < 2 || cols < 2) throw TerrainError("synthetic terrain needs at least 2x2 samples");
        std::vector<double> values(static_cast<std::size_t>(rows) * cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                const double x = origin.x + i * dx;
                const double y = origin.y + j * dy;
                double e = base + ramp_north * (x - origin.x) + ramp_east * (y - origin.y);
                for (const Hill &h : hills) {
                    const double r2 = (x - h.x) * (x - h.x) + (y - h.y) * (y - h.y);
                    e += h.height * std::exp(-r2 / (2.0 * h.sigma * h.sigma));
                }
                values[static_cast<std::size_t>(i) * cols + j] = e;
            }
        }
        return DtmGrid(origin, dx, dy, rows, cols, std::move(values), clearance);
    } catch (const nlohmann::json::exception &e) {
        throw TerrainError(std::string("synthetic terrain recipe: ") + e.what());
    }
}

DtmGrid load_dtm(const std::filesystem::path &source, DtmFormat format, double clearance) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw TerrainError("cannot open DTM file '" + source.string() + "'");
    switch (format) {
        case DtmFormat::kEsriAscii:
            return parse_esri_ascii(in, clearance);
        case DtmFormat::kSrtmHgt: {
            std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            return parse_srtm_hgt(bytes, clearance, source.stem().string());
        }
        case DtmFormat::kSyntheticSpec: {
            std::ostringstream os;
            os << in.rdbuf();
            return parse_synthetic_spec(os.str(), clearance);
        }
    }
    throw TerrainError("unsupported DTM format");
}

LocalObstacleMap::LocalObstacleMap(const DtmGrid &grid, Vec2 anchor, double altitude, std::vector<double> lo_values,
                                   std::vector<SquareClass> squares)
    : grid_(&grid), anchor_(anchor), altitude_(altitude), lo_(std::move(lo_values)), squares_(std::move(squares)) {}

std::size_t LocalObstacleMap::unsafe_count() const {
    return static_cast<std::size_t>(std::count(squares_.begin(), squares_.end(), SquareClass::kUnsafe));
}

LocalObstacleMap build_local_obstacle_map(const DtmGrid &grid, const AloManifold &manifold, Vec2 p,
                                          double altitude) {
    if (!grid.contains(p)) throw TerrainError("anchor position outside the DTM grid");
    const double ground = grid.dtm_at(p);
    if (!(altitude > ground)) {
        std::ostringstream os;
        os << "aircraft altitude " << altitude << " m is not above DTM " << ground << " m at the anchor";
        throw TerrainError(os.str());
    }
    const int rows = grid.rows();
    const int cols = grid.cols();
    std::vector<double> lo(static_cast<std::size_t>(rows) * cols, -kInf);

    // Outside this disc even the cheapest heading ends below min(DTM).
    const double budget = altitude - grid.min_dtm();
    const double min_slope = manifold.min_slope();
    const double radius = std::isfinite(min_slope) && min_slope > 0.0 ? budget / min_slope : kInf;
    const Vec2 uv = grid.to_grid(p);
    int i_lo = 0, i_hi = rows - 1, j_lo = 0, j_hi = cols - 1;
    if (std::isfinite(radius)) {
        i_lo = std::max(0, static_cast<int>(std::floor(uv.x - radius / grid.dx())) - 1);
        i_hi = std::min(rows - 1, static_cast<int>(std::ceil(uv.x + radius / grid.dx())) + 1);
        j_lo = std::max(0, static_cast<int>(std::floor(uv.y - radius / grid.dy())) - 1);
        j_hi = std::min(cols - 1, static_cast<int>(std::ceil(uv.y + radius / grid.dy())) + 1);
    }
    const double r2 = radius * radius;
    for (int i = i_lo; i <= i_hi; ++i) {
        const double ddx = grid.origin().x + i * grid.dx() - p.x;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double ddy = grid.origin().y + j * grid.dy() - p.y;
            if (ddx * ddx + ddy * ddy > r2) continue;
            lo[static_cast<std::size_t>(i) * cols + j] = altitude - manifold.loss(ddx, ddy) - grid.dtm_node(i, j);
        }
    }

    std::vector<SquareClass> squares(static_cast<std::size_t>(rows - 1) * (cols - 1), SquareClass::kUnsafe);
    for (int i = std::max(0, i_lo); i < std::min(rows - 1, i_hi + 1); ++i) {
        const double *row0 = &lo[static_cast<std::size_t>(i) * cols];
        const double *row1 = row0 + cols;
        for (int j = std::max(0, j_lo); j < std::min(cols - 1, j_hi + 1); ++j) {
            const bool safe = row0[j] >= 0.0 && row0[j + 1] >= 0.0 && row1[j] >= 0.0 && row1[j + 1] >= 0.0;
            squares[static_cast<std::size_t>(i) * (cols - 1) + j] = safe ? SquareClass::kSafe : SquareClass::kUnsafe;
        }
    }
    return LocalObstacleMap(grid, p, altitude, std::move(lo), std::move(squares));
}

}  // namespace glide
