#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "glide/manifold.hpp"
#include "glide/terrain.hpp"
#include "support.hpp"

using namespace glide;
using testsupport::cessna;

TEST(DtmGrid, BilinearInterpolationReproducesPlanes) {
    std::vector<double> e;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 5; ++j) e.push_back(3.0 * i * 10.0 - 2.0 * j * 20.0 + 7.0);
    }
    const DtmGrid g({100.0, 200.0}, 10.0, 20.0, 4, 5, e, 5.0);
    EXPECT_NEAR(g.dtm_at(113.0, 247.0), 3.0 * 13.0 - 2.0 * 47.0 + 7.0 + 5.0, 1e-9);
    EXPECT_NEAR(g.dtm_at(130.0, 280.0), g.dtm_node(3, 4), 1e-12);
    EXPECT_THROW(g.dtm_at(99.0, 200.0), std::out_of_range);
    EXPECT_TRUE(g.contains({130.0, 280.0}));
    EXPECT_FALSE(g.contains({130.1, 280.0}));
    EXPECT_DOUBLE_EQ(g.min_dtm(), g.dtm_node(0, 4));
}

TEST(DtmGrid, InterpolationStaysWithinCellCornerRange) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(0.0, 500.0);
    std::vector<double> e(36);
    for (double &v : e) v = U(rng);
    const DtmGrid g({0.0, 0.0}, 1.0, 1.0, 6, 6, e, 0.0);
    std::uniform_real_distribution<double> P(0.0, 5.0);
    for (int k = 0; k < 1000; ++k) {
        const double x = P(rng), y = P(rng);
        const int i = std::min(4, static_cast<int>(x)), j = std::min(4, static_cast<int>(y));
        const double lo = std::min({g.elevation(i, j), g.elevation(i + 1, j), g.elevation(i, j + 1),
                                    g.elevation(i + 1, j + 1)});
        const double hi = std::max({g.elevation(i, j), g.elevation(i + 1, j), g.elevation(i, j + 1),
                                    g.elevation(i + 1, j + 1)});
        const double v = g.dtm_at(x, y);
        EXPECT_GE(v, lo - 1e-9);
        EXPECT_LE(v, hi + 1e-9);
    }
}

TEST(DtmGrid, RejectsMalformedInput) {
    EXPECT_THROW(DtmGrid({0, 0}, 1.0, 1.0, 1, 5, std::vector<double>(5, 0.0)), TerrainError);
    EXPECT_THROW(DtmGrid({0, 0}, 0.0, 1.0, 2, 2, std::vector<double>(4, 0.0)), TerrainError);
    EXPECT_THROW(DtmGrid({0, 0}, 1.0, 1.0, 2, 2, std::vector<double>(3, 0.0)), TerrainError);
    EXPECT_THROW(DtmGrid({0, 0}, 1.0, 1.0, 2, 2, {0.0, NAN, 0.0, 0.0}), TerrainError);
}

TEST(EsriAscii, OrientationAndCornerShift) {
    std::istringstream in(
        "ncols 3\nnrows 2\nxllcorner 1000\nyllcorner 2000\ncellsize 30\nNODATA_value -9999\n"
        "10 11 12\n"
        "20 21 22\n");
    const DtmGrid g = parse_esri_ascii(in, 0.0);
    EXPECT_EQ(g.rows(), 2);
    EXPECT_EQ(g.cols(), 3);
    // Bottom file row is the southernmost grid row.
    EXPECT_EQ(g.elevation(0, 0), 20.0);
    EXPECT_EQ(g.elevation(1, 2), 12.0);
    EXPECT_DOUBLE_EQ(g.origin().x, 2015.0);  // northing of the first cell center
    EXPECT_DOUBLE_EQ(g.origin().y, 1015.0);  // easting
}

TEST(EsriAscii, CenterRegistrationAndVoidFill) {
    std::istringstream in(
        "NCOLS 3\nNROWS 3\nXLLCENTER 0\nYLLCENTER 0\nCELLSIZE 10\nNODATA_VALUE -1\n"
        "5 5 5\n"
        "5 -1 5\n"
        "5 5 5\n");
    const DtmGrid g = parse_esri_ascii(in, 50.0);
    EXPECT_DOUBLE_EQ(g.origin().x, 0.0);
    EXPECT_DOUBLE_EQ(g.elevation(1, 1), 5.0);
    EXPECT_DOUBLE_EQ(g.dtm_node(1, 1), 55.0);
}

TEST(EsriAscii, TruncatedDataRejected) {
    std::istringstream in("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n");
    EXPECT_THROW(parse_esri_ascii(in), TerrainError);
    std::istringstream missing("ncols 2\nnrows 2\ncellsize 1\n1 2 3 4\n");
    EXPECT_THROW(parse_esri_ascii(missing), TerrainError);
}

namespace {

std::vector<std::uint8_t> hgt_tile(int side, std::int16_t fill) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(side) * side * 2);
    for (std::size_t k = 0; k < bytes.size(); k += 2) {
        bytes[k] = static_cast<std::uint8_t>(static_cast<std::uint16_t>(fill) >> 8);
        bytes[k + 1] = static_cast<std::uint8_t>(static_cast<std::uint16_t>(fill) & 0xff);
    }
    return bytes;
}

void put(std::vector<std::uint8_t> &b, int side, int r, int c, std::int16_t v) {
    const std::size_t off = (static_cast<std::size_t>(r) * side + c) * 2;
    b[off] = static_cast<std::uint8_t>(static_cast<std::uint16_t>(v) >> 8);
    b[off + 1] = static_cast<std::uint8_t>(static_cast<std::uint16_t>(v) & 0xff);
}

}  // namespace

TEST(SrtmHgt, ThreeArcSecondTile) {
    auto b = hgt_tile(1201, 100);
    put(b, 1201, 0, 0, 1234);      // north-west corner
    put(b, 1201, 1200, 5, -20);    // south edge, below sea level
    put(b, 1201, 600, 600, -32768);
    const DtmGrid g = parse_srtm_hgt(b, 0.0, "N32E035.hgt");
    EXPECT_EQ(g.rows(), 1201);
    EXPECT_DOUBLE_EQ(g.elevation(1200, 0), 1234.0);
    EXPECT_DOUBLE_EQ(g.elevation(0, 5), -20.0);
    EXPECT_DOUBLE_EQ(g.elevation(600, 600), 100.0);
    EXPECT_NEAR(g.dx(), 3.0 / 3600.0 * kMetersPerDegree, 1e-9);
    EXPECT_NEAR(g.dy(), g.dx() * std::cos(32.5 * kPi / 180.0), 1e-9);
}

TEST(SrtmHgt, OneArcSecondTileSize) {
    const DtmGrid g = parse_srtm_hgt(hgt_tile(3601, 7), 0.0, "S10W070");
    EXPECT_EQ(g.cols(), 3601);
    EXPECT_NEAR(g.dy(), g.dx() * std::cos(-9.5 * kPi / 180.0), 1e-9);
}

TEST(SrtmHgt, WrongSizeRejected) {
    std::vector<std::uint8_t> b(2882402, 0);
    EXPECT_THROW(parse_srtm_hgt(b), TerrainError);
}

TEST(SyntheticSpec, HillsAndRamp) {
    const DtmGrid g = parse_synthetic_spec(
        R"({"rows": 11, "cols": 11, "dx": 10, "dy": 10, "base": 100,
            "ramp": {"north": 0.5, "east": 0.0},
            "hills": [{"x": 50, "y": 50, "height": 300, "sigma": 20}]})",
        0.0);
    EXPECT_NEAR(g.elevation(5, 5), 100.0 + 0.5 * 50.0 + 300.0, 1e-9);
    EXPECT_LT(g.elevation(0, 10), 101.0);
    EXPECT_THROW(parse_synthetic_spec("{"), TerrainError);
    EXPECT_THROW(parse_synthetic_spec(R"({"rows": 3, "cols": 3, "hills": [{"x":0,"y":0,"height":1,"sigma":0}]})"),
                 TerrainError);
}

TEST(DtmFormat, NamesAndFileLoading) {
    EXPECT_EQ(parse_dtm_format("esri-ascii"), DtmFormat::kEsriAscii);
    EXPECT_EQ(parse_dtm_format("hgt"), DtmFormat::kSrtmHgt);
    EXPECT_EQ(parse_dtm_format("synthetic-spec"), DtmFormat::kSyntheticSpec);
    EXPECT_THROW(parse_dtm_format("geotiff"), TerrainError);

    const auto path = std::filesystem::temp_directory_path() / "glide_terrain_test.asc";
    {
        std::ofstream out(path);
        out << "ncols 2\nnrows 2\nxllcenter 0\nyllcenter 0\ncellsize 5\n1 2\n3 4\n";
    }
    const DtmGrid g = load_dtm(path, DtmFormat::kEsriAscii, 10.0);
    EXPECT_DOUBLE_EQ(g.dtm_node(0, 0), 13.0);
    std::filesystem::remove(path);
    EXPECT_THROW(load_dtm("/nonexistent/x.asc", DtmFormat::kEsriAscii), TerrainError);
}

TEST(LocalObstacleMap, SquaresUnsafeIffAnyCornerBelowGlide) {
    const AloManifold m(AircraftModel(cessna()), {5.0, -3.0});
    std::vector<testsupport::Hill> hills = {{400.0, 600.0, 350.0, 120.0}, {900.0, 300.0, 250.0, 90.0}};
    const DtmGrid g({0.0, 0.0}, 30.0, 30.0, 40, 40, testsupport::hill_elevations(40, 40, 30.0, hills), 50.0);
    const Vec2 p{60.0, 60.0};
    const double z = 420.0;
    const LocalObstacleMap lomap = build_local_obstacle_map(g, m, p, z);
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 40; ++j) {
            const Vec2 d = g.node_position(i, j) - p;
            const double expected = z - m.loss(d.x, d.y) - g.dtm_node(i, j);
            if (std::isfinite(lomap.lo(i, j))) {
                EXPECT_NEAR(lomap.lo(i, j), expected, 1e-9);
            } else {
                EXPECT_LT(expected, 0.0);
            }
        }
    }
    std::size_t unsafe = 0;
    for (int i = 0; i < 39; ++i) {
        for (int j = 0; j < 39; ++j) {
            const bool any_below = lomap.lo(i, j) < 0 || lomap.lo(i + 1, j) < 0 || lomap.lo(i, j + 1) < 0 ||
                                   lomap.lo(i + 1, j + 1) < 0;
            EXPECT_EQ(lomap.unsafe(i, j), any_below) << i << "," << j;
            unsafe += any_below;
        }
    }
    EXPECT_EQ(lomap.unsafe_count(), unsafe);
    EXPECT_TRUE(lomap.unsafe(-1, 0));
    EXPECT_TRUE(lomap.unsafe(0, 39));
    EXPECT_THROW(build_local_obstacle_map(g, m, p, 10.0), TerrainError);
}
