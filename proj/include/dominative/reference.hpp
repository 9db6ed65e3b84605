#pragma once

#include "dominative/geometry.hpp"
#include "dominative/matrix.hpp"
#include "dominative/params.hpp"
#include "dominative/payoff.hpp"
#include "dominative/quadrature.hpp"
#include "dominative/smooth_field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dominative {

// Closed-form solutions of the scaled heat-type equation, used as oracles:
//   standard:  2(n+p) u_t = D_p u
//   remark24:  u_t = D_p u
// The time coefficients below adapt to the scaling so each family solves the
// equation matching params.scaling.
//   quadratic_time: |x - c|^2 + slope * t, slope = (n+p-2)/(n+p) resp. 2(n+p-2)
//   cosh_exp:       e^{kappa t} cosh(x_1), kappa = (p-1)/(2(n+p)) resp. p-1
struct ReferenceSolution {
    enum class Kind { constant, linear, quadratic_time, cosh_exp };

    Kind kind = Kind::constant;
    std::string id;
    GameParams params;
    double c0 = 0.0;            // constant value / linear offset
    std::vector<double> a;      // linear coefficients
    Point center;               // quadratic_time center
    double time_slope = 0.0;    // quadratic_time
    double kappa = 0.0;         // cosh_exp

    static ReferenceSolution constant(double c, const GameParams& params);
    static ReferenceSolution linear(std::vector<double> a, double b, const GameParams& params);
    static ReferenceSolution quadratic_time(Point center, const GameParams& params);
    static ReferenceSolution cosh_exp(const GameParams& params);
    static ReferenceSolution by_id(const std::string& id, const GameParams& params);

    double value(std::span<const double> x, double t) const;
    std::vector<double> gradient(std::span<const double> x, double t) const;
    SquareMatrix hessian(std::span<const double> x, double t) const;
    double time_derivative(std::span<const double> x, double t) const;

    SmoothField as_smooth_field() const;
    PayoffField as_payoff() const;
};

// 2(n+p) u_t - D_p u (resp. u_t - D_p u under remark24); identically zero
// for a valid reference solution.
double pde_residual(const ReferenceSolution& sol, std::span<const double> x, double t,
                    const GameParams& params);

// Radial comparison function on the annulus delta < |x-z| < R:
//   w(x) = -a |x-z|^2 - b |x-z|^{-xi} + c,  xi = n+p-4,
// with a = 2(n+p)/(n+p-2), b = (2a/xi) R^{xi+2}, c = a delta^2 + b delta^{-xi},
// so that w(delta) = 0, dw/dr(R) = 0 and D_p w = -2a(n+p-2) identically.
// The same formula extends to delta - eps < |x-z| < R + eps.
struct BarrierFunction {
    Point z;
    double delta = 0.0;
    double R = 0.0;
    double xi = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    static BarrierFunction make(Point z, double delta, double R, const GameParams& params);
    // b = 0 variant; drops the singular term, keeping w(delta) = 0.  Its
    // one-step drift has a closed form, which makes it a handy sanity mode.
    static BarrierFunction quadratic_only(Point z, double delta, double R,
                                          const GameParams& params);

    double radius_of(std::span<const double> x) const;
    double value(std::span<const double> x) const;
    double radial_derivative(double r) const;
    std::vector<double> gradient(std::span<const double> x) const;
    SquareMatrix hessian(std::span<const double> x) const;
};

// D_p applied to the barrier's analytic Hessian; equals -2a(n+p-2) on the
// extended annulus.
double barrier_dominative(const BarrierFunction& w, std::span<const double> x,
                          const GameParams& params);

struct BarrierDriftRow {
    Point x;
    double r = 0.0;
    double increment = 0.0;     // alpha * worst midpoint + beta * ball average
    double increment_mc = 0.0;  // whole-kernel resampling oracle
    double std_error = 0.0;     // of the oracle
    double ci = 0.0;            // 1.96 * std_error
    double worst_midpoint_increment = 0.0;
};

struct BarrierDriftReport {
    std::vector<BarrierDriftRow> rows;
    double worst_increment = 0.0; // max over probes of increment
};

// One-step expected increment of w under the least favorable direction:
// alpha times the direction-set maximizer of the midpoint increment plus
// beta times the ball-rule average increment, evaluated deterministically.
// The whole kernel is additionally resampled m times per probe as an
// independent oracle with a confidence radius.
BarrierDriftReport barrier_drift_check(const BarrierFunction& w, const GameParams& params,
                                       const std::vector<Point>& probes,
                                       std::int64_t samples, std::uint64_t seed);

} // namespace dominative
