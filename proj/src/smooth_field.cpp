#include "dominative/smooth_field.hpp"

namespace dominative {

std::vector<double> SmoothField::fd_gradient(std::span<const double> x, double t) const {
    std::vector<double> g(dim, 0.0);
    std::vector<double> y(x.begin(), x.end());
    const double h = fd_step;
    for (int d = 0; d < dim; ++d) {
        const double xd = y[d];
        y[d] = xd + h;
        const double fp = value(y, t);
        y[d] = xd - h;
        const double fm = value(y, t);
        y[d] = xd;
        g[d] = (fp - fm) / (2.0 * h);
    }
    return g;
}

SquareMatrix SmoothField::fd_hessian(std::span<const double> x, double t) const {
    SquareMatrix H(dim);
    std::vector<double> y(x.begin(), x.end());
    const double h = fd_step;
    const double f0 = value(y, t);
    for (int d = 0; d < dim; ++d) {
        const double xd = y[d];
        y[d] = xd + h;
        const double fp = value(y, t);
        y[d] = xd - h;
        const double fm = value(y, t);
        y[d] = xd;
        H.at(d, d) = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const double xi = y[i], xj = y[j];
            y[i] = xi + h; y[j] = xj + h;
            const double fpp = value(y, t);
            y[j] = xj - h;
            const double fpm = value(y, t);
            y[i] = xi - h; y[j] = xj + h;
            const double fmp = value(y, t);
            y[j] = xj - h;
            const double fmm = value(y, t);
            y[i] = xi; y[j] = xj;
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            H.at(i, j) = v;
            H.at(j, i) = v;
        }
    }
    return H;
}

double SmoothField::fd_time_derivative(std::span<const double> x, double t) const {
    const double h = fd_step;
    return (value(x, t + h) - value(x, t - h)) / (2.0 * h);
}

std::vector<double> SmoothField::gradient(std::span<const double> x, double t) const {
    return gradient_fn ? gradient_fn(x, t) : fd_gradient(x, t);
}

SquareMatrix SmoothField::hessian(std::span<const double> x, double t) const {
    return (hessian_fn ? hessian_fn(x, t) : fd_hessian(x, t)).symmetrized();
}

double SmoothField::time_derivative(std::span<const double> x, double t) const {
    return time_deriv_fn ? time_deriv_fn(x, t) : fd_time_derivative(x, t);
}

} // namespace dominative
