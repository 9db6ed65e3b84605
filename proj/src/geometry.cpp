#include "dominative/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dominative {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

} // namespace

SpaceTimeDomain SpaceTimeDomain::box(Point lower, Point upper, double T) {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("box: corner dimensions mismatch");
    for (size_t d = 0; d < lower.size(); ++d)
        if (!(lower[d] < upper[d]))
            throw std::invalid_argument("box: lower corner must be strictly below upper");
    if (!(T > 0.0)) throw std::invalid_argument("domain: horizon T must be positive");
    SpaceTimeDomain dom;
    dom.shape = Shape::box;
    dom.lower = std::move(lower);
    dom.upper = std::move(upper);
    dom.T = T;
    return dom;
}

SpaceTimeDomain SpaceTimeDomain::ball(Point center, double radius, double T) {
    if (center.empty()) throw std::invalid_argument("ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("domain: horizon T must be positive");
    SpaceTimeDomain dom;
    dom.shape = Shape::ball;
    dom.center = std::move(center);
    dom.radius = radius;
    dom.T = T;
    return dom;
}

bool SpaceTimeDomain::contains(std::span<const double> x) const {
    if (shape == Shape::box) {
        for (size_t d = 0; d < lower.size(); ++d)
            if (!(x[d] > lower[d] && x[d] < upper[d])) return false;
        return true;
    }
    Point diff(center.size());
    for (size_t d = 0; d < center.size(); ++d) diff[d] = x[d] - center[d];
    return norm2(diff) < radius;
}

BoundaryDistance SpaceTimeDomain::boundary_distance(std::span<const double> x) const {
    BoundaryDistance bd;
    if (shape == Shape::ball) {
        Point diff(center.size());
        for (size_t d = 0; d < center.size(); ++d) diff[d] = x[d] - center[d];
        const double r = norm2(diff);
        bd.dist = std::abs(r - radius);
        bd.side = r < radius ? Side::inside : (r > radius ? Side::outside : Side::on_boundary);
        if (bd.dist == 0.0) bd.side = Side::on_boundary;
        return bd;
    }
    // Box: inside distance is the smallest face margin, outside distance is
    // the norm of the componentwise excess over the box.
    double inside_margin = std::numeric_limits<double>::infinity();
    double excess2 = 0.0;
    bool outside = false;
    for (size_t d = 0; d < lower.size(); ++d) {
        const double lo = x[d] - lower[d];
        const double hi = upper[d] - x[d];
        inside_margin = std::min(inside_margin, std::min(lo, hi));
        const double e = std::max({lower[d] - x[d], x[d] - upper[d], 0.0});
        excess2 += e * e;
        if (e > 0.0) outside = true;
    }
    if (outside) {
        bd.dist = std::sqrt(excess2);
        bd.side = Side::outside;
    } else {
        bd.dist = inside_margin;
        bd.side = inside_margin > 0.0 ? Side::inside : Side::on_boundary;
    }
    return bd;
}

void SpaceTimeDomain::bounding_box(Point& lo, Point& hi) const {
    if (shape == Shape::box) {
        lo = lower;
        hi = upper;
        return;
    }
    lo.assign(center.size(), 0.0);
    hi.assign(center.size(), 0.0);
    for (size_t d = 0; d < center.size(); ++d) {
        lo[d] = center[d] - radius;
        hi[d] = center[d] + radius;
    }
}

BoundaryDistance dist_to_lateral_boundary(const SpaceTimeDomain& domain,
                                          std::span<const double> x) {
    return domain.boundary_distance(x);
}

BoundaryStrip BoundaryStrip::make(const SpaceTimeDomain& domain, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("strip: width must be positive");
    BoundaryStrip strip;
    strip.domain = domain;
    strip.width = width;
    return strip;
}

bool BoundaryStrip::contains(std::span<const double> x, double t) const {
    if (t < time_floor() || t > domain.T) return false;
    const BoundaryDistance bd = domain.boundary_distance(x);
    const bool in_open_domain = bd.side == Side::inside;
    if (!in_open_domain && bd.dist <= width) return true;   // lateral strip
    if (t <= 0.0 && (in_open_domain || bd.side == Side::on_boundary))
        return true;                                        // bottom layer
    return false;
}

} // namespace dominative
