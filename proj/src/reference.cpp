#include "dominative/reference.hpp"

#include "dominative/game.hpp"
#include "dominative/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dominative {

namespace {

double sqdist(std::span<const double> x, std::span<const double> c) {
    double s = 0.0;
    for (size_t d = 0; d < x.size(); ++d) {
        const double u = x[d] - c[d];
        s += u * u;
    }
    return s;
}

} // namespace

ReferenceSolution ReferenceSolution::constant(double c, const GameParams& params) {
    ReferenceSolution s;
    s.kind = Kind::constant;
    s.id = "constant";
    s.params = params;
    s.c0 = c;
    return s;
}

ReferenceSolution ReferenceSolution::linear(std::vector<double> a, double b,
                                            const GameParams& params) {
    if (static_cast<int>(a.size()) != params.n)
        throw std::invalid_argument("reference linear: coefficient dimension mismatch");
    ReferenceSolution s;
    s.kind = Kind::linear;
    s.id = "linear";
    s.params = params;
    s.a = std::move(a);
    s.c0 = b;
    return s;
}

ReferenceSolution ReferenceSolution::quadratic_time(Point center, const GameParams& params) {
    if (static_cast<int>(center.size()) != params.n)
        throw std::invalid_argument("reference quadratic_time: center dimension mismatch");
    ReferenceSolution s;
    s.kind = Kind::quadratic_time;
    s.id = "quadratic_time";
    s.params = params;
    s.center = std::move(center);
    const double np = params.n + params.p;
    s.time_slope = params.scaling == TimeScaling::standard ? (np - 2.0) / np
                                                           : 2.0 * (np - 2.0);
    return s;
}

ReferenceSolution ReferenceSolution::cosh_exp(const GameParams& params) {
    ReferenceSolution s;
    s.kind = Kind::cosh_exp;
    s.id = "cosh_exp";
    s.params = params;
    const double np = params.n + params.p;
    s.kappa = params.scaling == TimeScaling::standard ? (params.p - 1.0) / (2.0 * np)
                                                      : params.p - 1.0;
    return s;
}

ReferenceSolution ReferenceSolution::by_id(const std::string& id, const GameParams& params) {
    if (id == "constant") return constant(1.0, params);
    if (id == "linear") {
        std::vector<double> a(static_cast<size_t>(params.n), 0.0);
        a[0] = 1.0;
        return linear(std::move(a), 0.0, params);
    }
    if (id == "quadratic_time")
        return quadratic_time(Point(static_cast<size_t>(params.n), 0.0), params);
    if (id == "cosh_exp") return cosh_exp(params);
    throw std::invalid_argument("unknown reference solution id: " + id);
}

double ReferenceSolution::value(std::span<const double> x, double t) const {
    switch (kind) {
        case Kind::constant: return c0;
        case Kind::linear: {
            double s = c0;
            for (size_t d = 0; d < a.size(); ++d) s += a[d] * x[d];
            return s;
        }
        case Kind::quadratic_time: return sqdist(x, center) + time_slope * t;
        case Kind::cosh_exp: return std::exp(kappa * t) * std::cosh(x[0]);
    }
    return 0.0;
}

std::vector<double> ReferenceSolution::gradient(std::span<const double> x, double t) const {
    std::vector<double> g(static_cast<size_t>(params.n), 0.0);
    switch (kind) {
        case Kind::constant: break;
        case Kind::linear: g = a; break;
        case Kind::quadratic_time:
            for (int d = 0; d < params.n; ++d)
                g[static_cast<size_t>(d)] = 2.0 * (x[d] - center[static_cast<size_t>(d)]);
            break;
        case Kind::cosh_exp: g[0] = std::exp(kappa * t) * std::sinh(x[0]); break;
    }
    return g;
}

SquareMatrix ReferenceSolution::hessian(std::span<const double> x, double t) const {
    SquareMatrix H(params.n);
    switch (kind) {
        case Kind::constant:
        case Kind::linear: break;
        case Kind::quadratic_time:
            for (int d = 0; d < params.n; ++d) H.at(d, d) = 2.0;
            break;
        case Kind::cosh_exp: H.at(0, 0) = std::exp(kappa * t) * std::cosh(x[0]); break;
    }
    return H;
}

double ReferenceSolution::time_derivative(std::span<const double> x, double t) const {
    switch (kind) {
        case Kind::constant:
        case Kind::linear: return 0.0;
        case Kind::quadratic_time: return time_slope;
        case Kind::cosh_exp: return kappa * value(x, t);
    }
    return 0.0;
}

SmoothField ReferenceSolution::as_smooth_field() const {
    SmoothField f;
    f.dim = params.n;
    f.fd_step = params.epsilon / 8.0;
    ReferenceSolution self = *this;
    f.value = [self](std::span<const double> x, double t) { return self.value(x, t); };
    f.gradient_fn = [self](std::span<const double> x, double t) { return self.gradient(x, t); };
    f.hessian_fn = [self](std::span<const double> x, double t) { return self.hessian(x, t); };
    f.time_deriv_fn = [self](std::span<const double> x, double t) {
        return self.time_derivative(x, t);
    };
    return f;
}

PayoffField ReferenceSolution::as_payoff() const {
    ReferenceSolution self = *this;
    return PayoffField::from_reference(
        id, [self](std::span<const double> x, double t) { return self.value(x, t); });
}

double pde_residual(const ReferenceSolution& sol, std::span<const double> x, double t,
                    const GameParams& params) {
    const double ct =
        params.scaling == TimeScaling::standard ? 2.0 * (params.n + params.p) : 1.0;
    return ct * sol.time_derivative(x, t) - dominative_operator(sol.hessian(x, t), params);
}

BarrierFunction BarrierFunction::make(Point z, double delta, double R,
                                      const GameParams& params) {
    if (params.n < 2)
        throw std::invalid_argument("barrier: needs n >= 2 (1-D reduces to a random walk)");
    if (static_cast<int>(z.size()) != params.n)
        throw std::invalid_argument("barrier: center dimension mismatch");
    if (!(delta > 0.0) || !(R > delta))
        throw std::invalid_argument("barrier: need 0 < delta < R");
    BarrierFunction w;
    w.z = std::move(z);
    w.delta = delta;
    w.R = R;
    w.xi = params.n + params.p - 4.0;
    w.a = 2.0 * (params.n + params.p) / (params.n + params.p - 2.0);
    w.b = (2.0 * w.a / w.xi) * std::pow(R, w.xi + 2.0);
    w.c = w.a * delta * delta + w.b * std::pow(delta, -w.xi);
    return w;
}

BarrierFunction BarrierFunction::quadratic_only(Point z, double delta, double R,
                                                const GameParams& params) {
    BarrierFunction w = make(std::move(z), delta, R, params);
    w.b = 0.0;
    w.c = w.a * delta * delta;
    return w;
}

double BarrierFunction::radius_of(std::span<const double> x) const {
    return std::sqrt(sqdist(x, z));
}

double BarrierFunction::value(std::span<const double> x) const {
    const double r = radius_of(x);
    return -a * r * r - (b != 0.0 ? b * std::pow(r, -xi) : 0.0) + c;
}

double BarrierFunction::radial_derivative(double r) const {
    return -2.0 * a * r + (b != 0.0 ? b * xi * std::pow(r, -xi - 1.0) : 0.0);
}

std::vector<double> BarrierFunction::gradient(std::span<const double> x) const {
    const double r = radius_of(x);
    const double fr = radial_derivative(r);
    std::vector<double> g(x.size(), 0.0);
    for (size_t d = 0; d < x.size(); ++d) g[d] = fr * (x[d] - z[d]) / r;
    return g;
}

SquareMatrix BarrierFunction::hessian(std::span<const double> x) const {
    const double r = radius_of(x);
    const double frr = -2.0 * a - (b != 0.0 ? b * xi * (xi + 1.0) * std::pow(r, -xi - 2.0) : 0.0);
    const double fr_over_r = -2.0 * a + (b != 0.0 ? b * xi * std::pow(r, -xi - 2.0) : 0.0);
    const int n = static_cast<int>(x.size());
    SquareMatrix H(n);
    for (int i = 0; i < n; ++i) {
        const double ui = (x[i] - z[static_cast<size_t>(i)]) / r;
        for (int j = 0; j < n; ++j) {
            const double uj = (x[j] - z[static_cast<size_t>(j)]) / r;
            H.at(i, j) = (frr - fr_over_r) * ui * uj + (i == j ? fr_over_r : 0.0);
        }
    }
    return H;
}

double barrier_dominative(const BarrierFunction& w, std::span<const double> x,
                          const GameParams& params) {
    const double r = w.radius_of(x);
    if (!(r > w.delta - params.epsilon) || !(r < w.R + params.epsilon))
        throw std::invalid_argument("barrier_dominative: point outside the extended annulus");
    return dominative_operator(w.hessian(x), params);
}

BarrierDriftReport barrier_drift_check(const BarrierFunction& w, const GameParams& params,
                                       const std::vector<Point>& probes,
                                       std::int64_t samples, std::uint64_t seed) {
    const double eps = params.epsilon;
    if (eps > w.delta / 2.0)
        throw std::invalid_argument("barrier_drift_check: need epsilon <= delta/2");
    if (samples < 2) throw std::invalid_argument("barrier_drift_check: need samples >= 2");

    const int dim = params.n;
    QuadratureConfig qc;
    const DirectionSet dirs = DirectionSet::make(dim, qc.direction_count(dim));
    const BallRule rule = BallRule::make(dim, eps, qc.ball_cells);

    BarrierDriftReport rep;
    rep.worst_increment = -std::numeric_limits<double>::infinity();

    std::vector<double> probe_buf(static_cast<size_t>(dim), 0.0);
    for (size_t pi = 0; pi < probes.size(); ++pi) {
        const Point& x = probes[pi];
        const double r = w.radius_of(x);
        if (!(r - w.delta > eps) || !(w.R - r > eps))
            throw std::invalid_argument(
                "barrier_drift_check: probe closer than epsilon to an annulus edge");

        const double w0 = w.value(x);

        // Direction-set maximizer of the midpoint increment.
        double worst_mid = -std::numeric_limits<double>::infinity();
        int worst_idx = 0;
        for (int i = 0; i < dirs.count(); ++i) {
            const auto sigma = dirs.at(i);
            for (int d = 0; d < dim; ++d)
                probe_buf[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] + eps * sigma[d];
            const double vp = w.value(probe_buf);
            for (int d = 0; d < dim; ++d)
                probe_buf[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] - eps * sigma[d];
            const double vm = w.value(probe_buf);
            const double mid = 0.5 * (vp + vm) - w0;
            if (mid > worst_mid) {
                worst_mid = mid;
                worst_idx = i;
            }
        }
        const auto sigma = dirs.at(worst_idx);
        const Point worst_sigma(sigma.begin(), sigma.end());

        // Deterministic cross-check via the ball rule.
        double ball_avg = 0.0;
        for (int k = 0; k < rule.count(); ++k) {
            const double* off = rule.offsets.data() + static_cast<size_t>(k) * dim;
            for (int d = 0; d < dim; ++d)
                probe_buf[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] + off[d];
            ball_avg += w.value(probe_buf);
        }
        ball_avg /= rule.count();

        // Whole-kernel resampling with the worst direction.
        double sum = 0.0, sq = 0.0;
        for (std::int64_t m = 0; m < samples; ++m) {
            Rng rng(stream_key(seed, static_cast<std::uint64_t>(pi),
                               static_cast<std::uint64_t>(m)));
            const StepResult next = step(x, 1.0, worst_sigma, params, rng);
            const double inc = w.value(next.x) - w0;
            sum += inc;
            sq += inc * inc;
        }
        const double mean = sum / static_cast<double>(samples);
        const double var = std::max(
            0.0, (sq - static_cast<double>(samples) * mean * mean) / static_cast<double>(samples - 1));

        BarrierDriftRow row;
        row.x = x;
        row.r = r;
        row.increment = params.alpha * worst_mid + params.beta * (ball_avg - w0);
        row.increment_mc = mean;
        row.std_error = std::sqrt(var / static_cast<double>(samples));
        row.ci = 1.96 * row.std_error;
        row.worst_midpoint_increment = worst_mid;
        rep.worst_increment = std::max(rep.worst_increment, row.increment);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace dominative
