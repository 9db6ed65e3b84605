#pragma once

#include "dominative/matrix.hpp"

#include <functional>
#include <span>
#include <vector>

namespace dominative {

enum class Provenance { analytic, finite_difference };

// A C^{2,1} test field v(x, t).  Derivatives are analytic when supplied,
// otherwise central finite differences with step fd_step are used.  The
// Hessian is symmetrized before any eigenvalue work.
struct SmoothField {
    using Value = std::function<double(std::span<const double>, double)>;
    using Gradient = std::function<std::vector<double>(std::span<const double>, double)>;
    using Hessian = std::function<SquareMatrix(std::span<const double>, double)>;
    using TimeDeriv = std::function<double(std::span<const double>, double)>;

    int dim = 0;
    Value value;
    Gradient gradient_fn;   // optional
    Hessian hessian_fn;     // optional
    TimeDeriv time_deriv_fn; // optional
    double fd_step = 1e-3;

    Provenance provenance() const {
        return (gradient_fn && hessian_fn && time_deriv_fn) ? Provenance::analytic
                                                            : Provenance::finite_difference;
    }

    double operator()(std::span<const double> x, double t) const { return value(x, t); }

    std::vector<double> gradient(std::span<const double> x, double t) const;
    SquareMatrix hessian(std::span<const double> x, double t) const;
    double time_derivative(std::span<const double> x, double t) const;

    // Ignores any analytic callbacks; used to cross-check them.
    std::vector<double> fd_gradient(std::span<const double> x, double t) const;
    SquareMatrix fd_hessian(std::span<const double> x, double t) const;
    double fd_time_derivative(std::span<const double> x, double t) const;
};

} // namespace dominative
