#pragma once

#include <span>
#include <vector>

namespace dominative {

// Deterministic rules shared by the mean-value checker and the DPP solver.
//
// Ball averages use a tensor lattice of ball_cells^n cells over the bounding
// cube of B_eps(x), midpoint rule restricted to cells whose centers lie in
// the ball.  The sup over unit directions is taken over a fixed finite set:
// {+1} in 1-D, equally spaced angles in 2-D, a Fibonacci sphere in 3-D.
struct QuadratureConfig {
    int ball_cells = 21;
    int directions = 0;     // 0 = dimension default (1 / 64 / 256)
    bool refine_sup = true; // golden-section polish around the argmax (2-D only)
    int refine_steps = 20;

    int direction_count(int dim) const;
};

// Midpoint offsets relative to the ball center, uniform weights 1/K.
struct BallRule {
    int dim = 0;
    double radius = 0.0;
    std::vector<double> offsets; // K x dim, row-major
    int count() const { return static_cast<int>(offsets.size()) / dim; }

    static BallRule make(int dim, double radius, int cells_per_axis);
};

// Unit directions; sigma and -sigma are interchangeable in every use, so
// only one representative per antipodal pair is stored.
struct DirectionSet {
    int dim = 0;
    std::vector<double> dirs; // N x dim, row-major
    int count() const { return static_cast<int>(dirs.size()) / dim; }
    std::span<const double> at(int i) const { return {dirs.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)}; }

    static DirectionSet make(int dim, int count);
};

} // namespace dominative
