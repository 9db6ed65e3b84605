#pragma once

#include "dominative/matrix.hpp"
#include "dominative/params.hpp"
#include "dominative/quadrature.hpp"
#include "dominative/smooth_field.hpp"

#include <functional>
#include <span>

namespace dominative {

// Largest eigenvalue of a symmetric matrix, by cyclic Jacobi rotations
// (off-diagonal norm driven below 1e-12 relative).  The input is
// symmetrized first; non-finite entries are rejected.
double lambda_max(const SquareMatrix& H);

// D_p applied to a Hessian: trace(H) + (p - 2) * lambda_max(H).
double dominative_operator(const SquareMatrix& H, const GameParams& params);

struct MeanValueReport {
    double lhs = 0.0;       // beta * ball average + alpha * best midpoint
    double predicted = 0.0; // v + eps^2/(2(n+p)) * (D_p v - c_t v_t)
    double residual = 0.0;  // lhs - predicted
    double epsilon = 0.0;
};

using SpaceTimeFn = std::function<double(std::span<const double>, double)>;

// The two-term mean value expression at (x, t):
//   beta * average of v(., t - dt) over B_eps(x)
//   + alpha * max over the direction set of the midpoint
//     (v(x + eps s, t - dt) + v(x - eps s, t - dt)) / 2,
// with dt the scaling's time step.  In 2-D the discrete argmax is polished
// by golden-section steps when quad.refine_sup is set.
double mean_value_lhs(const SpaceTimeFn& v, std::span<const double> x, double t,
                      const GameParams& params, const QuadratureConfig& quad);

MeanValueReport mean_value_residual(const SmoothField& v, std::span<const double> x,
                                    double t, const GameParams& params,
                                    const QuadratureConfig& quad);

} // namespace dominative
