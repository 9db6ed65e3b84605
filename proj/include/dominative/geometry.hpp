#pragma once

#include <span>
#include <string>
#include <vector>

namespace dominative {

using Point = std::vector<double>;

enum class Side { inside, on_boundary, outside };

struct BoundaryDistance {
    double dist = 0.0; // nonnegative distance to the lateral boundary
    Side side = Side::inside;
};

// Bounded convex domain Omega (box or ball) together with the horizon T.
// The parabolic cylinder is Omega x (0, T).
struct SpaceTimeDomain {
    enum class Shape { box, ball };

    Shape shape = Shape::box;
    Point lower, upper;  // box corners
    Point center;        // ball center
    double radius = 0.0; // ball radius
    double T = 0.0;

    static SpaceTimeDomain box(Point lower, Point upper, double T);
    static SpaceTimeDomain ball(Point center, double radius, double T);

    int dim() const {
        return static_cast<int>(shape == Shape::box ? lower.size() : center.size());
    }

    bool contains(std::span<const double> x) const; // open set
    BoundaryDistance boundary_distance(std::span<const double> x) const;

    // Axis-aligned bounding box of Omega.
    void bounding_box(Point& lo, Point& hi) const;
};

// dist(x, boundary of Omega), reported nonnegative with an inside/outside flag.
BoundaryDistance dist_to_lateral_boundary(const SpaceTimeDomain& domain,
                                          std::span<const double> x);

// Space-time strip where the overshooting token lands and the payoff is
// collected:
//   (x in S_w, t in [-w^2, T]) or (x in closure(Omega), t in [-w^2, 0]),
// with S_w = { x not in Omega : dist(x, boundary) <= w }.  The lateral part
// spans all of [-w^2, T] because the token can leave Omega at any time.
struct BoundaryStrip {
    SpaceTimeDomain domain;
    double width = 0.0;

    static BoundaryStrip make(const SpaceTimeDomain& domain, double width);

    double time_floor() const { return -width * width; }
    bool contains(std::span<const double> x, double t) const;
};

inline bool strip_contains(const BoundaryStrip& strip, std::span<const double> x,
                           double t) {
    return strip.contains(x, t);
}

} // namespace dominative
