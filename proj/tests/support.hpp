#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "glide/aero.hpp"
#include "glide/manifold.hpp"
#include "glide/terrain.hpp"

namespace testsupport {

using namespace glide;

// Cessna 172 constants, kept here rather than read from data/ so the oracles
// do not depend on the loader under test.
inline AircraftParams cessna() {
    AircraftParams p;
    p.name = "Cessna 172";
    p.mass_kg = 907.0;
    p.wing_area_m2 = 15.9793;
    p.cd0 = 0.0329;
    p.k_induced = 0.0599;
    p.cl_max = 1.22248;
    p.v_max_mps = 62.0;
    p.air_density_kgpm3 = 1.225;
    return p;
}

inline DtmGrid flat_grid(int rows, int cols, double d, double elevation = 0.0, double clearance = 0.0) {
    return DtmGrid({0.0, 0.0}, d, d, rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, elevation),
                   clearance);
}

struct Hill {
    double x, y, height, sigma;
};

inline std::vector<double> hill_elevations(int rows, int cols, double d, const std::vector<Hill> &hills,
                                           double base = 0.0) {
    std::vector<double> e(static_cast<std::size_t>(rows) * cols, base);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            double s = base;
            for (const Hill &h : hills) {
                const double r2 = std::pow(i * d - h.x, 2) + std::pow(j * d - h.y, 2);
                s += h.height * std::exp(-r2 / (2.0 * h.sigma * h.sigma));
            }
            e[static_cast<std::size_t>(i) * cols + j] = s;
        }
    }
    return e;
}

// Randomized 64x64 Gaussian-hill instance with start and target nodes near
// opposite corners and an altitude a little above the straight-line need.
struct Fixture {
    int seed = 0;
    std::shared_ptr<DtmGrid> grid;
    Wind wind;
    GridNode a, b;
    double z = 0.0;
};

inline Fixture random_fixture(int seed, const AircraftModel &model) {
    std::mt19937 rng(static_cast<unsigned>(seed));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int n = 64;
    const double d = 30.0;
    const int count = 3 + static_cast<int>(rng() % 4);
    std::vector<Hill> hills;
    for (int k = 0; k < count; ++k) {
        hills.push_back({U(rng) * n * d, U(rng) * n * d, 200.0 + U(rng) * 500.0, 80.0 + U(rng) * 200.0});
    }
    Fixture f;
    f.seed = seed;
    f.grid = std::make_shared<DtmGrid>(Vec2{0.0, 0.0}, d, d, n, n, hill_elevations(n, n, d, hills), 50.0);
    f.wind = {(U(rng) - 0.5) * 20.0, (U(rng) - 0.5) * 20.0};
    const AloManifold m(model, f.wind);
    f.a = {2 + static_cast<int>(rng() % 5), 2 + static_cast<int>(rng() % 5)};
    f.b = {n - 3 - static_cast<int>(rng() % 5), n - 3 - static_cast<int>(rng() % 5)};
    const Vec2 delta = f.grid->node_position(f.b) - f.grid->node_position(f.a);
    f.z = std::max(f.grid->dtm_node(f.a), f.grid->dtm_node(f.b)) + m.loss(delta.x, delta.y) + 20.0 + U(rng) * 120.0;
    return f;
}

// Obstacle map from an explicit unsafe-square mask over a flat grid, for the
// geometry tests. mask[i][j] covers square (i, j); rows/cols are node counts.
struct MaskMap {
    std::shared_ptr<DtmGrid> grid;
    std::unique_ptr<LocalObstacleMap> map;
};

inline MaskMap mask_map(const std::vector<std::string> &mask, double d = 1.0) {
    const int sr = static_cast<int>(mask.size());
    const int sc = static_cast<int>(mask.front().size());
    MaskMap mm;
    mm.grid = std::make_shared<DtmGrid>(flat_grid(sr + 1, sc + 1, d));
    std::vector<SquareClass> squares;
    for (const std::string &row : mask) {
        for (char c : row) squares.push_back(c == '#' ? SquareClass::kUnsafe : SquareClass::kSafe);
    }
    std::vector<double> lo(static_cast<std::size_t>(sr + 1) * (sc + 1), 1.0);
    mm.map = std::make_unique<LocalObstacleMap>(*mm.grid, Vec2{0.0, 0.0}, 100.0, std::move(lo), std::move(squares));
    return mm;
}

}  // namespace testsupport
