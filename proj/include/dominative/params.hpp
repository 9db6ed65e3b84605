#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dominative {

// Time lattice convention: "standard" marches with steps of eps^2 and
// corresponds to the equation 2(n+p) u_t = D_p u; "remark24" uses
// eps^2 / (2(n+p)) and corresponds to u_t = D_p u.
enum class TimeScaling { standard, remark24 };

// Dimension, exponent, step size and the derived coin probabilities
//   alpha = (p-2)/(p+n)   controlled move
//   beta  = (n+2)/(p+n)   random move
struct GameParams {
    int n = 0;
    double p = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    TimeScaling scaling = TimeScaling::standard;

    // Per-step decrement of the time coordinate.
    double time_step() const {
        if (scaling == TimeScaling::remark24)
            return epsilon * epsilon / (2.0 * (n + p));
        return epsilon * epsilon;
    }
};

inline GameParams make_params(int n, double p, double epsilon,
                              TimeScaling scaling = TimeScaling::standard) {
    if (n < 1)
        throw std::invalid_argument("make_params: dimension n must be >= 1, got " +
                                    std::to_string(n));
    if (!(p > 2.0))
        throw std::invalid_argument("make_params: exponent p must satisfy p > 2, got " +
                                    std::to_string(p));
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("make_params: step size must satisfy 0 < epsilon < 1, got " +
                                    std::to_string(epsilon));
    GameParams gp;
    gp.n = n;
    gp.p = p;
    gp.epsilon = epsilon;
    gp.alpha = (p - 2.0) / (p + n);
    gp.beta = (n + 2.0) / (p + n);
    gp.scaling = scaling;
    return gp;
}

} // namespace dominative
