#include "dominative/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dominative {

int QuadratureConfig::direction_count(int dim) const {
    if (directions > 0) return directions;
    switch (dim) {
        case 1: return 1;
        case 2: return 64;
        case 3: return 256;
        default: return 0;
    }
}

BallRule BallRule::make(int dim, double radius, int cells_per_axis) {
    if (dim < 1) throw std::invalid_argument("BallRule: dimension must be >= 1");
    if (cells_per_axis < 1) throw std::invalid_argument("BallRule: need at least one cell");
    if (!(radius > 0.0)) throw std::invalid_argument("BallRule: radius must be positive");

    BallRule rule;
    rule.dim = dim;
    rule.radius = radius;

    const int M = cells_per_axis;
    const double cell = 2.0 * radius / M;
    std::vector<int> idx(dim, 0);
    std::vector<double> pt(dim, 0.0);
    while (true) {
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            pt[d] = -radius + (idx[d] + 0.5) * cell;
            r2 += pt[d] * pt[d];
        }
        if (r2 <= radius * radius)
            rule.offsets.insert(rule.offsets.end(), pt.begin(), pt.end());
        int d = dim - 1;
        while (d >= 0 && ++idx[d] == M) idx[d--] = 0;
        if (d < 0) break;
    }
    if (rule.offsets.empty())
        throw std::invalid_argument("BallRule: no lattice cell center falls in the ball");
    return rule;
}

DirectionSet DirectionSet::make(int dim, int count) {
    DirectionSet set;
    set.dim = dim;
    if (dim == 1) {
        set.dirs = {1.0};
        return set;
    }
    if (count < 1) throw std::invalid_argument("DirectionSet: need at least one direction");
    if (dim == 2) {
        // Equally spaced angles over [0, pi); antipodes are redundant.
        set.dirs.reserve(static_cast<size_t>(count) * 2);
        for (int k = 0; k < count; ++k) {
            const double th = std::numbers::pi * k / count;
            set.dirs.push_back(std::cos(th));
            set.dirs.push_back(std::sin(th));
        }
        return set;
    }
    if (dim == 3) {
        // Fibonacci sphere.
        const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
        set.dirs.reserve(static_cast<size_t>(count) * 3);
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - (2.0 * k + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = ga * k;
            set.dirs.push_back(rho * std::cos(phi));
            set.dirs.push_back(rho * std::sin(phi));
            set.dirs.push_back(z);
        }
        return set;
    }
    throw std::invalid_argument("DirectionSet: dimensions above 3 are not supported");
}

} // namespace dominative
