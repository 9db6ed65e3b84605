#pragma once

#include "dominative/geometry.hpp"
#include "dominative/params.hpp"
#include "dominative/payoff.hpp"
#include "dominative/quadrature.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace dominative {

// Discretization of the value function: uniform Cartesian nodes with spacing
// h covering Omega plus the eps-strip, time levels t_j = j * dt for
// j = -1, 0, ..., J with t_J the least level >= T.
struct GridConfig {
    double h = 0.0;        // 0 = eps/4
    int ball_cells = 0;    // 0 = auto: 21 at h = eps/8, scaled so the
                           // quadrature cell tracks h on finer grids
    int directions = 0;    // 0 = dimension default
};

class ValueGrid {
public:
    GameParams params;
    SpaceTimeDomain domain;
    BoundaryStrip strip;       // width eps
    GridConfig config;         // resolved values (h, cells, directions)

    Point origin;              // node (0,...,0)
    double h = 0.0;
    std::vector<int> dims;     // nodes per axis
    std::vector<std::int64_t> strides; // row-major, last axis contiguous
    std::int64_t nodes_per_level = 0;

    double dt = 0.0;
    int levels = 0;            // J + 2 slices, j = -1 .. J
    int top_level = 0;         // J

    std::vector<double> values;        // levels * nodes_per_level
    std::vector<std::uint8_t> interior; // per node
    DirectionSet directions;
    BallRule ball;

    double level_time(int j) const { return j * dt; }
    std::span<const double> level(int j) const {
        return {values.data() + static_cast<size_t>(j + 1) * nodes_per_level,
                static_cast<size_t>(nodes_per_level)};
    }
    std::span<double> level_mut(int j) {
        return {values.data() + static_cast<size_t>(j + 1) * nodes_per_level,
                static_cast<size_t>(nodes_per_level)};
    }
    void node_coords(std::int64_t flat, std::span<double> out) const;

    // Multilinear interpolation in space, nearest level in time.  Queries
    // above T, beyond half a step outside the ladder, or outside the node
    // coverage are rejected.
    double value_at(std::span<const double> x, double t) const;
};

struct DppResidualReport {
    double max_abs_residual = 0.0;
    std::int64_t argmax_node = -1;
    int argmax_level = 0;
    std::vector<double> per_level; // levels 1..J
};

struct ComparisonReport {
    bool ok = false;
    double max_violation = 0.0; // max over nodes of u2 - u1, clamped at 0
};

// Marches the dynamic programming principle from the lowest level upward:
// interior nodes at level j are the convex combination
//   beta * (ball-rule average of the interpolated level j-1 slice)
//   + alpha * (max over the direction set of interpolated midpoints),
// strip nodes and levels t_j <= 0 carry F.
ValueGrid solve_dpp(const SpaceTimeDomain& domain, const PayoffField& F,
                    const GameParams& params, const GridConfig& config = {});

inline double value_at(const ValueGrid& grid, std::span<const double> x, double t) {
    return grid.value_at(x, t);
}

// Recomputes the update at every interior node with the solver's own rule
// and reports the worst |stored - recomputed|.
DppResidualReport dpp_residual(const ValueGrid& grid);

// Solves with both payoffs and checks u1 >= u2 - 1e-10 everywhere.
// F1 >= F2 is validated first on every node where boundary data is consumed;
// a violation there is an input error, not a comparison failure.
ComparisonReport check_comparison(const SpaceTimeDomain& domain, const PayoffField& F1,
                                  const PayoffField& F2, const GameParams& params,
                                  const GridConfig& config = {});

// Boundary data backed by a solved grid.
PayoffField payoff_from_grid(std::shared_ptr<const ValueGrid> grid);

} // namespace dominative
